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
#include "grassfeed/ia.hpp"

namespace grassfeed {

struct DistortionParams {
  double eta_f = 1.0; // J0(2 pi fd_ts)
  int n_dir = 6;
  int L = 3;
};

/// sin(pi / 2^n) / (pi / 2^n); 0 at n = 0.
double theta_term(int n_theta);

/// 1 - 4 * 2^(-n_g / (L - 2)), clamped at 0. Throws DegenerateDimension for L < 3.
double grass_term(int n_g, int L);

struct DistortionApprox {
  double D = 1.0;
  int n_theta = 0;
  int n_g = 0;
};

/// Closed-form accuracy E|g* g^|^2 of the differential codec under an AR(1)
/// channel, maximized over the n_dir + 1 splits n_theta + n_g = n_dir.
/// Ties keep the split with the most Grassmannian bits.
DistortionApprox distortion_approx(const DistortionParams &p);

/// Approximate mean IA sum-rate loss with accuracy D; rho[k][l] are the
/// average link attenuations.
double rate_loss_bound(const IAConfig &cfg, const std::vector<std::vector<double>> &rho, double D);

/// sum_{k,m} (1/N) log2(1 + mean_leakage[k][m] / noise_var).
double jensen_bound(const std::vector<std::vector<double>> &mean_leakage, const IAConfig &cfg);

/// One-sided paired t-test of mean(a - b) > 0.
struct PairedTest {
  double mean_diff = 0.0;
  double std_err = 0.0;
  double t = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};
PairedTest paired_t_test(const std::vector<double> &a, const std::vector<double> &b);

struct PredictorConfig {
  double eta_f = 0.99;
  int L = 3;
  std::vector<double> ep_norms{0.0, 0.1, 0.3, 0.6};
  int trials = 10000;
  int n_dir = 6;
  int n_mag = 1;
  int warmup = 50;      // codec steps before the measured transition
  std::uint64_t seed = 1;
};

struct PredictorRow {
  double ep_norm = 0.0;
  double mean = 0.0;    // E|g~* h[t]|^2
  double std_err = 0.0;
  PairedTest vs_zero;   // objective at ||e_p|| = 0 minus objective here
};

struct PredictorResult {
  std::vector<PredictorRow> rows;
  double mean_rho2 = 0.0;     // E|g[t-1]* g^[t-1]|^2
  double closed_form = 0.0;   // eta^2 E|rho|^2 + (1 - eta^2) / L
};

/// Monte Carlo of the geodesic predictor objective. Each trial runs the
/// codec over an AR(1) channel, then scores every predicted point
/// G(g^[t-1], e_p, 1) against the next channel realization, with an
/// isotropic tangent direction shared across the grid.
PredictorResult predictor_gain_experiment(const PredictorConfig &cfg);

} // namespace grassfeed
