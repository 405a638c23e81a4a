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
#include <vector>

#include "grassfeed/common.hpp"

namespace grassfeed {

/// K user pairs aligning over N frequency extensions (one alignment group
/// per OFDM symbol, so N_sc = N). P is the per-subcarrier power, noise_var
/// the per-subcarrier noise variance.
struct IAConfig {
  int K = 3;
  int N = 3;
  std::vector<int> d{2, 1, 1};
  double P = 1.0;
  double noise_var = 1.0;

  /// d = (n+1, n, ..., n) over N = 2n+1 extensions.
  static IAConfig symmetric(int K, int n);
  int total_streams() const;
  void validate() const;
};

/// H[k][i] holds the diagonal of the N x N response from transmitter i to
/// receiver k.
using ChannelSet = std::vector<std::vector<CVec>>;

/// Frequency responses of per-link tap vectors taps[k][i] over N extensions.
ChannelSet channels_from_taps(const std::vector<std::vector<CVec>> &taps, int N);

struct IASolution {
  std::vector<CMat> F;            // N x d_k precoders, unit-norm columns
  std::vector<CMat> W;            // N x d_k combiners, unit-norm columns
  std::vector<double> history;    // interference leakage after each iteration (entry 0 = initial)
  int iterations = 0;
  bool converged = false;

  double final_leakage() const { return history.empty() ? 0.0 : history.back(); }
};

/// Alternating leakage minimization. Each iteration sets the combiners to the
/// least-dominant eigenvectors of the received interference covariance, then
/// the precoders to those of the reciprocal network. The tracked leakage is
/// sum_k tr(W_k* Q_k W_k) with unweighted covariances, which cannot increase
/// from one half-step to the next. Stops once it drops to `tol`.
IASolution solve_alignment(const ChannelSet &H, const IAConfig &cfg, std::uint64_t seed, int max_iters = 5000,
                           double tol = 1e-8);

/// Same solver started from given precoders.
IASolution solve_alignment_from(const ChannelSet &H, const IAConfig &cfg, std::vector<CMat> F0, int max_iters = 5000,
                                double tol = 1e-8);

struct ZeroForcing {
  std::vector<CMat> W;
  double margin = 0.0; // min_k,m |w_k^m* H_kk f_k^m|
};

/// Zero-forcing combiners from the CSI in H. Each w_k^m lies in the subspace
/// left free by the other users' interference and is orthogonal to the
/// receiver's other streams; within that it follows H_kk f_k^m. Throws
/// RankDeficiency when no such direction exists.
ZeroForcing zf_combiners(const ChannelSet &H, const std::vector<CMat> &F, const IAConfig &cfg);

struct Leakage {
  std::vector<std::vector<double>> self;  // I1[k][m]
  std::vector<std::vector<double>> cross; // I2[k][m]

  double total() const;
};

/// Self and cross-user interference power after combining, on channels H.
Leakage leakage(const ChannelSet &H, const std::vector<CMat> &F, const std::vector<CMat> &W, const IAConfig &cfg);

/// Per-stream zero-forcing sum rate in bits/s/Hz, normalized by N_sc.
double sum_rate_zf(const ChannelSet &H, const std::vector<CMat> &F, const std::vector<CMat> &W, const IAConfig &cfg);

/// Log-det sum rate with receivers that whiten interference plus noise
/// using the true channels. Interferer m is weighted by its own per-stream
/// power N P / d_m.
double sum_rate_capacity(const ChannelSet &H, const std::vector<CMat> &F, const IAConfig &cfg);

/// Upper bound on |w* H f|^2 for H = diag(DFT_N(h)) when w* H^ f = 0 for
/// the quantized direction g_hat:  N * ||conj(w) o f||^2 * ||h||^2 * d(g, g_hat)^2.
/// The factor N is the gain of the unnormalized DFT.
double leakage_bound_term(const CVec &h, const CVec &g_hat, const CVec &w, const CVec &f);

} // namespace grassfeed
