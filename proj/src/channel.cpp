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

#include "grassfeed/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace grassfeed {

ChannelSpec ChannelSpec::uniform(int L, double fd_ts, int ar_order, std::uint64_t seed) {
  ChannelSpec s;
  s.L = L;
  s.pdp = RVec::Constant(L, 1.0 / L);
  s.fd_ts = fd_ts;
  s.ar_order = ar_order;
  s.seed = seed;
  return s;
}

void ChannelSpec::validate() const {
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "channel needs at least one tap");
  if (pdp.size() != L) throw Error(ErrorKind::BadLength, "pdp length must equal L");
  if ((pdp.array() < 0.0).any() || !(pdp.sum() > 0.0))
    throw Error(ErrorKind::InvalidArgument, "pdp must be nonnegative with positive sum");
  if (!(fd_ts >= 0.0 && fd_ts < 0.5)) throw Error(ErrorKind::InvalidArgument, "fd_ts must lie in [0, 0.5)");
  if (ar_order < 1) throw Error(ErrorKind::InvalidArgument, "AR order must be positive");
}

double clarke_autocorrelation(double fd_ts, int m) {
  if (m < 0) throw Error(ErrorKind::InvalidArgument, "lag must be nonnegative");
  if (m == 0) return 1.0;
  return std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * fd_ts * m);
}

double max_pole_radius(const RVec &coeffs) {
  const Eigen::Index M = coeffs.size();
  if (M == 0) return 0.0;
  if (M == 1) return std::abs(coeffs(0));
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(M, M);
  companion.row(0) = coeffs.transpose();
  companion.diagonal(-1).setOnes();
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "pole computation failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ArModel fit_ar(double fd_ts, int M, double eps) {
  if (M < 1) throw Error(ErrorKind::InvalidArgument, "AR order must be positive");
  if (!(fd_ts >= 0.0 && fd_ts < 0.5)) throw Error(ErrorKind::InvalidArgument, "fd_ts must lie in [0, 0.5)");

  ArModel model;
  model.fd_ts = fd_ts;
  if (fd_ts == 0.0) {
    model.coeffs = RVec::Ones(1);
    model.noise_var = 0.0;
    model.max_pole_radius = 1.0;
    model.init_factor = Eigen::MatrixXd::Ones(1, 1);
    return model;
  }
  if (M == 1) {
    const double a = clarke_autocorrelation(fd_ts, 1);
    model.coeffs = RVec::Constant(1, a);
    model.noise_var = 1.0 - a * a;
    model.max_pole_radius = std::abs(a);
    model.init_factor = Eigen::MatrixXd::Ones(1, 1);
    return model;
  }

  RVec r(M + 1);
  for (int m = 0; m <= M; ++m) r(m) = clarke_autocorrelation(fd_ts, m);
  Eigen::MatrixXd R(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) R(i, j) = r(std::abs(i - j));
  R.diagonal().array() += eps;

  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::SingularSystem, "loaded Yule-Walker system is not positive definite");
  model.coeffs = llt.solve(r.tail(M));
  model.noise_var = r(0) + eps - model.coeffs.dot(r.tail(M));
  if (!(model.noise_var > 0.0) || !model.coeffs.allFinite())
    throw Error(ErrorKind::SingularSystem, "Yule-Walker fit produced a non-positive innovation variance");
  model.max_pole_radius = max_pole_radius(model.coeffs);
  if (!(model.max_pole_radius < 1.0))
    throw Error(ErrorKind::SingularSystem, "fitted AR filter is unstable");
  model.init_factor = llt.matrixL();
  return model;
}

ArModel ar1_model(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "eta must lie in [0, 1]");
  ArModel model;
  model.fd_ts = std::numeric_limits<double>::quiet_NaN();
  model.coeffs = RVec::Constant(1, eta);
  model.noise_var = 1.0 - eta * eta;
  model.max_pole_radius = eta;
  model.init_factor = Eigen::MatrixXd::Ones(1, 1);
  return model;
}

ArChannel::ArChannel(const ChannelSpec &spec, Rng rng)
    : ArChannel(spec, std::make_shared<const ArModel>(fit_ar(spec.fd_ts, spec.ar_order, spec.loading)),
                std::move(rng)) {}

ArChannel::ArChannel(const ChannelSpec &spec, std::shared_ptr<const ArModel> model, Rng rng)
    : model_(std::move(model)), rng_(std::move(rng)) {
  spec.validate();
  scale_ = spec.pdp.cwiseSqrt();
  const Eigen::Index L = spec.L;
  const Eigen::Index M = model_->order();
  reversed_ = model_->coeffs.reverse();
  noise_std_ = std::sqrt(model_->noise_var);

  // Stationary start: x[t-M..t-1] ~ CN(0, R) per tap, oldest first.
  hist_.resize(2 * M, L);
  for (Eigen::Index l = 0; l < L; ++l) {
    CVec w = rng_.cnormal_vector(M);
    CVec x = model_->init_factor.cast<cplx>() * w;
    hist_.block(0, l, M, 1) = x;
    hist_.block(M, l, M, 1) = x;
  }
  current_ = hist_.row(M - 1).transpose().cwiseProduct(scale_.cast<cplx>());
  if (!model_->is_static())
    for (Eigen::Index i = 0; i < 10 * M; ++i) advance();
}

CVec ArChannel::advance() {
  const Eigen::Index M = model_->order();
  const Eigen::Index L = hist_.cols();
  if (model_->is_static()) return hist_.row(pos_ + M - 1).transpose();
  CVec next = (reversed_.cast<cplx>().transpose() * hist_.block(pos_, 0, M, L)).transpose();
  for (Eigen::Index l = 0; l < L; ++l) next(l) += noise_std_ * rng_.cnormal();
  hist_.row(pos_) = next.transpose();
  hist_.row(pos_ + M) = next.transpose();
  pos_ = (pos_ + 1) % M;
  return next;
}

CVec ArChannel::step() {
  current_ = advance().cwiseProduct(scale_.cast<cplx>());
  return current_;
}

CVec frequency_response(const CVec &h, int N) {
  const Eigen::Index L = h.size();
  if (N < L || N < 1) throw Error(ErrorKind::BadLength, "frequency_response needs N >= L");
  CVec H = CVec::Zero(N);
  for (int n = 0; n < N; ++n) {
    cplx acc = 0.0;
    for (Eigen::Index l = 0; l < L; ++l) {
      // Exponent reduced mod N keeps the twiddle argument in [0, 2 pi).
      const long k = (static_cast<long>(n) * static_cast<long>(l)) % N;
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / N;
      acc += h(l) * std::polar(1.0, ang);
    }
    H(n) = acc;
  }
  return H;
}

} // namespace grassfeed
