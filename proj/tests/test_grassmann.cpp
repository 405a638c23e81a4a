// SPDX-License-Identifier: Apache-2.0
//
// grassfeed - Grassmannian differential CSI feedback for interference alignment
// Copyright (C) 2026 The grassfeed authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <numbers>

#include "doctest.h"

#include "grassfeed/grassmann.hpp"
#include "grassfeed/rng.hpp"

using namespace grassfeed;

namespace {

CVec vec(std::initializer_list<cplx> xs) {
  CVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

} // namespace

TEST_CASE("normalize") {
  const GrassmannPoint p = normalize(vec({2.0, 0.0, 0.0}));
  CHECK(p[0] == cplx(1.0, 0.0));
  CHECK(p[1] == cplx(0.0, 0.0));
  CHECK(std::abs(normalize(vec({{1, 1}, {1, -1}})).vec().norm() - 1.0) < 1e-15);
  try {
    normalize(vec({0.0, 0.0, 0.0}));
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::ZeroVector);
  }
}

TEST_CASE("chordal distance") {
  Rng rng(11);
  const GrassmannPoint x = normalize(rng.cnormal_vector(4));
  CHECK(chordal_distance(x, x) < 1e-15);
  CHECK(chordal_distance(x, normalize(std::polar(1.0, 2.1) * x.vec())) < 1e-14);

  const double r = 1.0 / std::sqrt(2.0);
  CHECK(chordal_distance(normalize(vec({1.0, 0.0})), normalize(vec({r, r}))) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

  for (int i = 0; i < 200; ++i) {
    const GrassmannPoint a = normalize(rng.cnormal_vector(3));
    const GrassmannPoint b = normalize(rng.cnormal_vector(3));
    const double d = chordal_distance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(d == doctest::Approx(chordal_distance(b, a)).epsilon(1e-12));
    // direct formula as an oracle at moderate distances
    const double direct = std::sqrt(std::max(0.0, 1.0 - std::norm(a.vec().dot(b.vec()))));
    CHECK(d == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("log map on the two-dimensional quarter turn") {
  const double r = 1.0 / std::sqrt(2.0);
  const TangentVector t = log_map(normalize(vec({1.0, 0.0})), normalize(vec({r, r})));
  CHECK(t.mag == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK(std::abs(t.dir(0)) < 1e-15);
  CHECK(std::abs(t.dir(1) - 1.0) < 1e-14);

  const GrassmannPoint x = normalize(vec({0.3, {0.2, 0.1}, -0.5}));
  const TangentVector z = log_map(x, x);
  CHECK(z.mag == 0.0);
  CHECK((z.dir - canonical_direction(3)).norm() == 0.0);
}

TEST_CASE("log map rejects orthogonal points") {
  try {
    log_map(normalize(vec({1.0, 0.0})), normalize(vec({0.0, 1.0})));
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::OrthogonalPoints);
  }
}

TEST_CASE("exp map endpoints") {
  const GrassmannPoint b = normalize(vec({1.0, 0.0}));
  TangentVector t{b, vec({0.0, 1.0}), std::numbers::pi / 2};
  const GrassmannPoint y = exp_map(b, t, 1.0);
  CHECK(chordal_distance(y, normalize(vec({0.0, 1.0}))) < 1e-15);
  CHECK(exp_map(b, t, 0.0).same_representative(b));

  Rng rng(3);
  const GrassmannPoint x = normalize(rng.cnormal_vector(5));
  const TangentVector u = log_map(x, normalize(rng.cnormal_vector(5)));
  CHECK(exp_map(x, u, 0.0).same_representative(x));
  TangentVector zero{x, canonical_direction(5), 0.0};
  CHECK(chordal_distance(exp_map(x, zero, 1.7), x) < 1e-15);
}

TEST_CASE("exp map checks the base") {
  Rng rng(4);
  const GrassmannPoint a = normalize(rng.cnormal_vector(3));
  const GrassmannPoint b = normalize(rng.cnormal_vector(3));
  const TangentVector t = log_map(a, b);
  try {
    exp_map(b, t, 1.0);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::BaseMismatch);
  }
}

TEST_CASE("round trip, tangency and unit norm over random pairs") {
  Rng rng(2024);
  double worst_rt = 0.0, worst_tan = 0.0, worst_norm = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int L = 2 + i % 6;
    const GrassmannPoint a = normalize(rng.cnormal_vector(L));
    const GrassmannPoint b = normalize(rng.cnormal_vector(L));
    const TangentVector t = log_map(a, b);
    worst_rt = std::max(worst_rt, chordal_distance(exp_map(a, t, 1.0), b));
    worst_tan = std::max(worst_tan, std::abs(a.vec().dot(t.vector())));
    for (double ell = 0.0; ell <= 2.0; ell += 0.25)
      worst_norm = std::max(worst_norm, std::abs(exp_map(a, t, ell).vec().norm() - 1.0));
  }
  CHECK(worst_rt < 1e-10);
  CHECK(worst_tan < 1e-10);
  CHECK(worst_norm < 1e-12);
}

TEST_CASE("householder rotation") {
  const GrassmannPoint xb = normalize(vec({1.0, 0.0, 0.0}));
  CHECK((householder_rotation(xb) - CMat::Identity(3, 3)).norm() == 0.0);

  const CMat U = householder_rotation(normalize(vec({0.0, 1.0})));
  CMat expect(2, 2);
  expect << 0.0, 1.0, 1.0, 0.0;
  CHECK((U - expect).norm() < 1e-15);

  Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    const int L = 2 + i % 5;
    const GrassmannPoint x = normalize(rng.cnormal_vector(L));
    const CMat M = householder_rotation(x);
    CHECK((M.adjoint() * M - CMat::Identity(L, L)).norm() < 1e-10);
    CHECK(chordal_distance(normalize(M.col(0)), x) < 1e-10);
    const HouseholderRotation R(x);
    CVec v = rng.cnormal_vector(L);
    v(0) = 0.0;
    v.normalize();
    CHECK((R.apply(v) - M * v).norm() < 1e-12);
    CHECK(std::abs(M.col(0).dot(R.apply(v))) < 1e-10);
  }
}
