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

#pragma once

#include "grassfeed/common.hpp"

namespace grassfeed {

/// A point on G(L,1): a unit-norm complex L-vector, identified up to a
/// global phase. Construction always goes through `normalize` or
/// `from_unit`, so every instance has norm 1.
class GrassmannPoint {
public:
  GrassmannPoint() = default;

  /// Wraps an already unit-norm vector. Throws InvalidArgument if the norm
  /// deviates from 1 by more than `tol`.
  static GrassmannPoint from_unit(CVec v, double tol = 1e-10);

  const CVec &vec() const noexcept { return v_; }
  Eigen::Index dim() const noexcept { return v_.size(); }
  cplx operator[](Eigen::Index i) const { return v_(i); }

  // Bitwise equality of the stored representative (not the manifold point).
  bool same_representative(const GrassmannPoint &o) const {
    return v_.size() == o.v_.size() && (v_.array() == o.v_.array()).all();
  }

private:
  friend GrassmannPoint normalize(const CVec &h);
  explicit GrassmannPoint(CVec v) : v_(std::move(v)) {}
  CVec v_;
};

/// Tangent vector mag * dir at `base`; dir is unit norm and orthogonal to base.
/// When mag == 0, dir is the canonical vector e_2 = [0, 1, 0, ...].
struct TangentVector {
  GrassmannPoint base;
  CVec dir;
  double mag = 0.0;

  CVec vector() const { return mag * dir; }
};

/// Default threshold on |base* target| below which the log map is undefined.
inline constexpr double kOrthogonalEps = 1e-9;

GrassmannPoint normalize(const CVec &h);

/// sqrt(1 - |x* y|^2), evaluated through the orthogonal residual so that
/// tiny distances keep full relative precision.
double chordal_distance(const GrassmannPoint &x, const GrassmannPoint &y);

/// Canonical tangent direction e_2 used when the magnitude is zero.
CVec canonical_direction(Eigen::Index L);

TangentVector log_map(const GrassmannPoint &base, const GrassmannPoint &target,
                      double eps_orth = kOrthogonalEps);

GrassmannPoint exp_map(const GrassmannPoint &base, const TangentVector &t, double ell = 1.0);

/// Geodesic step base*cos(mag*ell) + dir*sin(mag*ell) without base checks.
/// `dir` must be orthogonal to `base`.
GrassmannPoint geodesic(const GrassmannPoint &base, const CVec &dir, double mag, double ell = 1.0);

/// Householder reflection U(x) mapping x_b = [1,0,...,0] onto x up to phase.
/// The first entry of x is phase-aligned to be real and nonnegative before
/// reflecting, so U is Hermitian, unitary and U * x_b = e^{-j arg x_1} x.
class HouseholderRotation {
public:
  explicit HouseholderRotation(const GrassmannPoint &x);

  /// U * v (U is Hermitian, so this is also U* v).
  CVec apply(const CVec &v) const;
  CMat matrix() const;
  bool is_identity() const noexcept { return scale_ == 0.0; }

private:
  Eigen::Index dim_;
  CVec u_;
  double scale_ = 0.0; // 2 / ||u||^2, or 0 for the identity
};

CMat householder_rotation(const GrassmannPoint &x);

} // namespace grassfeed
