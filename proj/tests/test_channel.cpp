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

#include "grassfeed/channel.hpp"

using namespace grassfeed;

namespace {

// Power series of J0, independent of the library's Bessel routine.
double j0_series(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -(x * x / 4.0) / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

double lag_corr(const std::vector<CVec> &xs, int tap, int lag) {
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t + lag < xs.size(); ++t) num += xs[t + lag](tap) * std::conj(xs[t](tap));
  for (const auto &x : xs) den += std::norm(x(tap));
  return num.real() / den * static_cast<double>(xs.size()) / static_cast<double>(xs.size() - lag);
}

} // namespace

TEST_CASE("clarke autocorrelation against a series oracle") {
  CHECK(clarke_autocorrelation(0.3, 0) == 1.0);
  const double fd = 1.0 / (2.0 * std::numbers::pi);
  CHECK(clarke_autocorrelation(fd, 1) == doctest::Approx(j0_series(1.0)).epsilon(1e-12));
  CHECK(clarke_autocorrelation(fd, 1) == doctest::Approx(0.76520).epsilon(1e-5));
  CHECK(clarke_autocorrelation(0.005, 1) == doctest::Approx(j0_series(2 * std::numbers::pi * 0.005)).epsilon(1e-13));
  CHECK(clarke_autocorrelation(0.005, 1) == doctest::Approx(0.99975).epsilon(1e-5));
  for (int m = 0; m < 400; m += 7) {
    const double r = clarke_autocorrelation(0.013, m);
    CHECK(r <= 1.0);
    CHECK(r >= -0.5);
  }
}

TEST_CASE("fit_ar special cases") {
  const ArModel a1 = fit_ar(0.05, 1);
  CHECK(a1.coeffs(0) == j0_series(2 * std::numbers::pi * 0.05));
  CHECK(a1.coeffs(0) == doctest::Approx(0.97541).epsilon(1e-4));
  const ArModel st = fit_ar(0.0, 200);
  CHECK(st.coeffs.size() == 1);
  CHECK(st.coeffs(0) == 1.0);
  CHECK(st.noise_var == 0.0);
  const ArModel big = fit_ar(0.01, 200);
  CHECK(big.max_pole_radius < 1.0);
  CHECK(big.noise_var > 0.0);
}

TEST_CASE("static channel never moves") {
  ArChannel ch(ChannelSpec::uniform(3, 0.0, 200), Rng(5));
  const CVec h0 = ch.current();
  for (int t = 0; t < 50; ++t) CHECK((ch.step() - h0).norm() == 0.0);
}

TEST_CASE("AR(200) statistics over 1e5 steps") {
  const double fd = 0.01;
  ArChannel ch(ChannelSpec::uniform(3, fd, 200), Rng(99));
  std::vector<CVec> xs;
  xs.reserve(100000);
  for (int t = 0; t < 100000; ++t) xs.push_back(ch.step());

  double energy = 0.0;
  for (const auto &x : xs) energy += x.squaredNorm();
  CHECK(energy / xs.size() == doctest::Approx(1.0).epsilon(0.05));

  for (int tap = 0; tap < 3; ++tap) {
    CHECK(std::abs(lag_corr(xs, tap, 1) - clarke_autocorrelation(fd, 1)) < 0.01);
    for (int m = 1; m <= 10; ++m) CHECK(std::abs(lag_corr(xs, tap, m) - clarke_autocorrelation(fd, m)) < 0.02);
  }
}

TEST_CASE("taps are uncorrelated") {
  ArChannel ch(ChannelSpec::uniform(3, 0.05, 200), Rng(123));
  Eigen::Matrix3cd cov = Eigen::Matrix3cd::Zero();
  for (int t = 0; t < 1000000; ++t) {
    const CVec x = ch.step();
    cov += x * x.adjoint();
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(std::abs(cov(a, b)) < 0.02 * std::min(cov(a, a).real(), cov(b, b).real()));
}

TEST_CASE("marginal variance right after construction") {
  const auto model = std::make_shared<const ArModel>(fit_ar(0.005, 20));
  double acc = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    ArChannel ch(ChannelSpec::uniform(1, 0.005, 20), model, Rng(1000 + i));
    acc += ch.step().squaredNorm();
  }
  CHECK(acc / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("memoryless AR(1) channel") {
  const ChannelSpec spec = ChannelSpec::uniform(3, 0.1, 1);
  ArChannel ch(spec, std::make_shared<const ArModel>(ar1_model(0.0)), Rng(8));
  std::vector<CVec> xs;
  double energy = 0.0;
  for (int t = 0; t < 100000; ++t) {
    xs.push_back(ch.step());
    energy += xs.back().squaredNorm();
  }
  for (int tap = 0; tap < 3; ++tap) CHECK(std::abs(lag_corr(xs, tap, 1)) < 0.02);
  CHECK(energy / xs.size() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("frequency response") {
  CVec imp = CVec::Zero(3);
  imp(0) = 1.0;
  const CVec flat = frequency_response(imp, 8);
  CHECK((flat - CVec::Ones(8)).norm() < 1e-15);

  CVec h = CVec::Zero(3);
  h(1) = 1.0;
  const CVec H = frequency_response(h, 4);
  const cplx j(0.0, 1.0);
  CHECK(std::abs(H(0) - 1.0) < 1e-15);
  CHECK(std::abs(H(1) + j) < 1e-15);
  CHECK(std::abs(H(2) + 1.0) < 1e-15);
  CHECK(std::abs(H(3) - j) < 1e-15);

  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const CVec g = rng.cnormal_vector(4);
    const CVec G = frequency_response(g, 15);
    CHECK(G.squaredNorm() / 15.0 == doctest::Approx(g.squaredNorm()).epsilon(1e-10));
  }
  try {
    frequency_response(CVec::Ones(5), 4);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::BadLength);
  }
}
