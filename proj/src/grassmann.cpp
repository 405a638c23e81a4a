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

#include "grassfeed/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grassfeed {

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::ZeroVector: return "ZeroVector";
  case ErrorKind::OrthogonalPoints: return "OrthogonalPoints";
  case ErrorKind::BaseMismatch: return "BaseMismatch";
  case ErrorKind::BadLength: return "BadLength";
  case ErrorKind::SingularSystem: return "SingularSystem";
  case ErrorKind::OutOfOrder: return "OutOfOrder";
  case ErrorKind::RankDeficiency: return "RankDeficiency";
  case ErrorKind::DegenerateDimension: return "DegenerateDimension";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  case ErrorKind::Format: return "Format";
  }
  return "Unknown";
}

namespace {

// Residual norms below this are treated as exact coincidence.
constexpr double kCoincident = 64.0 * std::numeric_limits<double>::epsilon();

} // namespace

GrassmannPoint GrassmannPoint::from_unit(CVec v, double tol) {
  const double n = v.norm();
  if (!(std::abs(n - 1.0) <= tol))
    throw Error(ErrorKind::InvalidArgument, "vector is not unit norm (norm = " + std::to_string(n) + ")");
  return GrassmannPoint(std::move(v));
}

GrassmannPoint normalize(const CVec &h) {
  const double n = h.norm();
  if (h.size() == 0 || !(n > 0.0) || !std::isfinite(n))
    throw Error(ErrorKind::ZeroVector, "cannot normalize a zero or non-finite vector");
  return GrassmannPoint(h / n);
}

double chordal_distance(const GrassmannPoint &x, const GrassmannPoint &y) {
  if (x.dim() != y.dim()) throw Error(ErrorKind::BadLength, "chordal_distance: dimension mismatch");
  const cplx rho = x.vec().dot(y.vec());
  const double d = (y.vec() - rho * x.vec()).norm();
  return std::clamp(d, 0.0, 1.0);
}

CVec canonical_direction(Eigen::Index L) {
  if (L < 2) throw Error(ErrorKind::BadLength, "tangent directions need L >= 2");
  CVec e = CVec::Zero(L);
  e(1) = 1.0;
  return e;
}

TangentVector log_map(const GrassmannPoint &base, const GrassmannPoint &target, double eps_orth) {
  if (base.dim() != target.dim()) throw Error(ErrorKind::BadLength, "log_map: dimension mismatch");
  const Eigen::Index L = base.dim();
  const CVec &b = base.vec();
  const cplx rho = b.dot(target.vec());
  const double abs_rho = std::abs(rho);
  if (abs_rho <= eps_orth)
    throw Error(ErrorKind::OrthogonalPoints, "log_map: base and target are orthogonal");

  CVec r = target.vec() - rho * b;
  r -= b.dot(r) * b; // second Gram-Schmidt pass
  const double d = r.norm();
  if (d <= kCoincident) return TangentVector{base, canonical_direction(L), 0.0};

  // target/rho - base == r/rho; rescale to unit norm and fold the phase of rho in.
  CVec dir = r * (std::conj(rho) / (abs_rho * d));
  return TangentVector{base, std::move(dir), std::atan2(d, abs_rho)};
}

GrassmannPoint geodesic(const GrassmannPoint &base, const CVec &dir, double mag, double ell) {
  const double arc = mag * ell;
  if (arc == 0.0) return base;
  return normalize(base.vec() * std::cos(arc) + dir * std::sin(arc));
}

GrassmannPoint exp_map(const GrassmannPoint &base, const TangentVector &t, double ell) {
  if (t.base.dim() != base.dim() || t.dir.size() != base.dim())
    throw Error(ErrorKind::BadLength, "exp_map: dimension mismatch");
  if (chordal_distance(t.base, base) >= 1e-10)
    throw Error(ErrorKind::BaseMismatch, "exp_map: tangent vector belongs to a different base point");
  return geodesic(base, t.dir, t.mag, ell);
}

HouseholderRotation::HouseholderRotation(const GrassmannPoint &x) : dim_(x.dim()) {
  const CVec &v = x.vec();
  const double a = std::abs(v(0));
  const cplx phase = a > 0.0 ? std::conj(v(0)) / a : cplx(1.0);
  const double tail = v.tail(dim_ - 1).squaredNorm();

  u_ = -phase * v;
  // 1 - |x_1| written without cancellation, valid because ||x|| = 1.
  u_(0) = tail / (1.0 + a);
  const double n2 = u_.squaredNorm();
  scale_ = n2 > 0.0 ? 2.0 / n2 : 0.0;
}

CVec HouseholderRotation::apply(const CVec &v) const {
  if (scale_ == 0.0) return v;
  return v - (scale_ * u_.dot(v)) * u_;
}

CMat HouseholderRotation::matrix() const {
  CMat U = CMat::Identity(dim_, dim_);
  if (scale_ != 0.0) U -= scale_ * u_ * u_.adjoint();
  return U;
}

CMat householder_rotation(const GrassmannPoint &x) { return HouseholderRotation(x).matrix(); }

} // namespace grassfeed
