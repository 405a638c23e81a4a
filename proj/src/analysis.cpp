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

#include "grassfeed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

#include "grassfeed/channel.hpp"
#include "grassfeed/codebook.hpp"
#include "grassfeed/feedback.hpp"
#include "grassfeed/grassmann.hpp"
#include "grassfeed/rng.hpp"

namespace grassfeed {

double theta_term(int n_theta) {
  if (n_theta < 0) throw Error(ErrorKind::InvalidArgument, "theta bits must be nonnegative");
  if (n_theta == 0) return 0.0;
  const double x = std::numbers::pi / std::ldexp(1.0, n_theta);
  return std::sin(x) / x;
}

double grass_term(int n_g, int L) {
  if (L < 3) throw Error(ErrorKind::DegenerateDimension, "Grassmannian term needs L >= 3");
  if (n_g < 0) throw Error(ErrorKind::InvalidArgument, "Grassmannian bits must be nonnegative");
  return std::max(0.0, 1.0 - 4.0 * std::exp2(-static_cast<double>(n_g) / (L - 2)));
}

DistortionApprox distortion_approx(const DistortionParams &p) {
  if (p.L < 3) throw Error(ErrorKind::DegenerateDimension, "the approximation needs L >= 3");
  if (p.n_dir < 0) throw Error(ErrorKind::InvalidArgument, "direction bits must be nonnegative");
  if (!(p.eta_f >= 0.0 && p.eta_f <= 1.0)) throw Error(ErrorKind::InvalidArgument, "eta_f must lie in [0, 1]");
  const double e2 = p.eta_f * p.eta_f;
  const double u = 1.0 - e2;
  DistortionApprox best{-1.0, 0, 0};
  for (int ng = p.n_dir; ng >= 0; --ng) {
    const int nt = p.n_dir - ng;
    const double g = grass_term(ng, p.L);
    const double D = e2 * e2 + 2.0 * e2 * u * theta_term(nt) * std::sqrt(g) + u * u * g;
    if (D > best.D) best = {D, nt, ng};
  }
  best.D = std::clamp(best.D, 0.0, 1.0);
  return best;
}

double rate_loss_bound(const IAConfig &cfg, const std::vector<std::vector<double>> &rho, double D) {
  cfg.validate();
  if (!(D >= 0.0 && D <= 1.0)) throw Error(ErrorKind::InvalidArgument, "D must lie in [0, 1]");
  if (static_cast<int>(rho.size()) != cfg.K) throw Error(ErrorKind::BadLength, "rho must be K x K");
  double loss = 0.0;
  for (int k = 0; k < cfg.K; ++k) {
    if (static_cast<int>(rho[k].size()) != cfg.K) throw Error(ErrorKind::BadLength, "rho must be K x K");
    double s = 0.0;
    for (int l = 0; l < cfg.K; ++l) s += rho[k][l] * (cfg.d[l] - (l == k ? 1 : 0)) / cfg.d[l];
    loss += cfg.d[k] / static_cast<double>(cfg.N) * std::log2(1.0 + cfg.N * cfg.P / cfg.noise_var * s * (1.0 - D));
  }
  return loss;
}

double jensen_bound(const std::vector<std::vector<double>> &mean_leakage, const IAConfig &cfg) {
  double acc = 0.0;
  for (const auto &row : mean_leakage)
    for (double v : row) {
      if (!(v >= 0.0)) throw Error(ErrorKind::InvalidArgument, "mean leakage must be nonnegative");
      acc += std::log2(1.0 + v / cfg.noise_var) / cfg.N;
    }
  return acc;
}

PairedTest paired_t_test(const std::vector<double> &a, const std::vector<double> &b) {
  if (a.size() != b.size() || a.size() < 2) throw Error(ErrorKind::BadLength, "paired test needs two equal samples of size >= 2");
  PairedTest r;
  r.n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(r.n);
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
  const double var = ss / static_cast<double>(r.n - 1);
  r.mean_diff = mean;
  r.std_err = std::sqrt(var / static_cast<double>(r.n));
  if (r.std_err == 0.0) {
    r.t = mean > 0.0 ? INFINITY : (mean < 0.0 ? -INFINITY : 0.0);
    r.p_value = mean > 0.0 ? 0.0 : 1.0;
    return r;
  }
  r.t = mean / r.std_err;
  boost::math::students_t dist(static_cast<double>(r.n - 1));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.t));
  return r;
}

PredictorResult predictor_gain_experiment(const PredictorConfig &cfg) {
  if (cfg.trials < 2) throw Error(ErrorKind::InvalidArgument, "need at least two trials");
  if (cfg.L < 2) throw Error(ErrorKind::InvalidArgument, "need L >= 2");
  const auto model = std::make_shared<const ArModel>(ar1_model(cfg.eta_f));
  const ChannelSpec spec = ChannelSpec::uniform(cfg.L, 0.0, 1);
  const std::size_t G = cfg.ep_norms.size();
  std::vector<std::vector<double>> obj(G, std::vector<double>(static_cast<std::size_t>(cfg.trials)));
  double rho2 = 0.0;

  for (int tr = 0; tr < cfg.trials; ++tr) {
    const auto utr = static_cast<std::uint64_t>(tr);
    auto cb = std::make_shared<const Codebook>(random_canonical_codebook(cfg.L, cfg.n_dir, derive_seed(cfg.seed, {utr, 1})));
    CodecState codec = init_all_ones(cb, MagnitudeWindow::adaptive(cfg.n_mag));
    ArChannel ch(spec, model, Rng(cfg.seed, {utr, 2}));
    CVec h = ch.current();
    for (int t = 0; t < cfg.warmup; ++t) {
      h = ch.step();
      encode(codec, normalize(h));
    }
    const GrassmannPoint &base = codec.g_hat;
    rho2 += std::norm(normalize(h).vec().dot(base.vec()));
    const CVec h_next = ch.step();

    Rng dir_rng(cfg.seed, {utr, 3});
    CVec v = dir_rng.cnormal_vector(cfg.L);
    v -= base.vec() * base.vec().dot(v);
    v.normalize();
    for (std::size_t j = 0; j < G; ++j) {
      const GrassmannPoint pred = geodesic(base, v, cfg.ep_norms[j]);
      obj[j][static_cast<std::size_t>(tr)] = std::norm(pred.vec().dot(h_next));
    }
  }

  PredictorResult res;
  res.mean_rho2 = rho2 / cfg.trials;
  const double e2 = cfg.eta_f * cfg.eta_f;
  res.closed_form = e2 * res.mean_rho2 + (1.0 - e2) / cfg.L;
  std::size_t zero = G;
  for (std::size_t j = 0; j < G; ++j)
    if (cfg.ep_norms[j] == 0.0) zero = j;
  for (std::size_t j = 0; j < G; ++j) {
    PredictorRow row;
    row.ep_norm = cfg.ep_norms[j];
    double m = 0.0, ss = 0.0;
    for (double x : obj[j]) m += x;
    m /= cfg.trials;
    for (double x : obj[j]) ss += (x - m) * (x - m);
    row.mean = m;
    row.std_err = std::sqrt(ss / (cfg.trials - 1) / cfg.trials);
    if (zero < G && zero != j) row.vs_zero = paired_t_test(obj[zero], obj[j]);
    res.rows.push_back(row);
  }
  return res;
}

} // namespace grassfeed
