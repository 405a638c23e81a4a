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

#include <cstdint>
#include <memory>

#include "grassfeed/common.hpp"
#include "grassfeed/rng.hpp"

namespace grassfeed {

/// Parameters of one temporally correlated L-tap link.
struct ChannelSpec {
  int L = 3;
  RVec pdp;             // power delay profile; sums to the link attenuation
  double fd_ts = 0.0;   // normalized Doppler, in [0, 0.5)
  int ar_order = 200;   // M
  double loading = 1e-7;
  std::uint64_t seed = 0;

  /// Uniform profile 1/L per tap (unit total power).
  static ChannelSpec uniform(int L, double fd_ts, int ar_order, std::uint64_t seed = 0);

  void validate() const;
  double attenuation() const { return pdp.sum(); }
};

/// Clarke/Jakes autocorrelation J0(2 pi fd_ts m).
double clarke_autocorrelation(double fd_ts, int m);

/// AR(M) fit of the Clarke autocorrelation. Shared read-only between links.
struct ArModel {
  RVec coeffs;         // a_1 .. a_M for x[t] = sum_k a_k x[t-k] + w[t]
  double noise_var = 0.0;
  double fd_ts = 0.0;
  double max_pole_radius = 0.0;
  Eigen::MatrixXd init_factor; // lower Cholesky factor of the (loaded) M x M autocorrelation

  int order() const { return static_cast<int>(coeffs.size()); }
  bool is_static() const { return noise_var == 0.0; }
};

/// Yule-Walker fit with diagonal loading `eps`. M == 1 gives a_1 = J0(2 pi fd_ts)
/// exactly (no loading); fd_ts == 0 gives the static model a_1 = 1, noise 0.
/// Throws SingularSystem if the loaded Toeplitz system cannot be factored or
/// the resulting filter is not stable.
ArModel fit_ar(double fd_ts, int M, double eps = 1e-7);

/// First-order model h[t] = eta h[t-1] + sqrt(1 - eta^2) z[t] for a given
/// one-step correlation eta in [0, 1].
ArModel ar1_model(double eta);

/// Largest pole magnitude of 1 - sum_k a_k z^-k.
double max_pole_radius(const RVec &coeffs);

/// One link's impulse-response process h[t] ~ CN(0, diag(pdp)) with
/// Clarke-correlated taps. Single-owner mutable state.
class ArChannel {
public:
  /// History starts in the stationary distribution (Cholesky draw) and is then
  /// advanced by a warm-up of 10*M steps.
  ArChannel(const ChannelSpec &spec, std::shared_ptr<const ArModel> model, Rng rng);
  ArChannel(const ChannelSpec &spec, Rng rng);

  /// Advances the process one symbol and returns h[t].
  CVec step();
  const CVec &current() const noexcept { return current_; }
  int taps() const noexcept { return static_cast<int>(scale_.size()); }

private:
  CVec advance();

  std::shared_ptr<const ArModel> model_;
  RVec scale_;     // sqrt(pdp)
  RVec reversed_;  // a_M .. a_1
  double noise_std_ = 0.0;
  Eigen::MatrixXcd hist_; // 2M x L, rows i and i+M mirror each other
  Eigen::Index pos_ = 0;
  CVec current_;
  Rng rng_;
};

/// N-point DFT of the zero-padded impulse response: H[n] = sum_l h_l e^{-j 2 pi n l / N}.
/// No 1/sqrt(N) scaling. Throws BadLength if N < L.
CVec frequency_response(const CVec &h, int N);

} // namespace grassfeed
