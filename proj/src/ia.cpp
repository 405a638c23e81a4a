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

#include "grassfeed/ia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "grassfeed/channel.hpp"
#include "grassfeed/grassmann.hpp"
#include "grassfeed/rng.hpp"

namespace grassfeed {

namespace {

// First entry with non-negligible magnitude made real positive.
void fix_phase(Eigen::Ref<CVec> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-8 * scale) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

struct Eig {
  RVec values; // ascending
  CMat vectors;
};

Eig hermitian_eig(const CMat &Q) {
  Eigen::SelfAdjointEigenSolver<CMat> es(Q);
  Eig out{es.eigenvalues(), es.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) fix_phase(out.vectors.col(c));
  return out;
}

CMat least_dominant(const CMat &Q, int d) { return hermitian_eig(Q).vectors.leftCols(d); }

CMat received_interference(const ChannelSet &H, const std::vector<CMat> &F, int k) {
  const int N = static_cast<int>(H[k][k].size());
  CMat Q = CMat::Zero(N, N);
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (static_cast<int>(i) == k) continue;
    const CMat G = H[k][i].asDiagonal() * F[i];
    Q.noalias() += G * G.adjoint();
  }
  return Q;
}

CMat reciprocal_interference(const ChannelSet &H, const std::vector<CMat> &W, int i) {
  const int N = static_cast<int>(H[i][i].size());
  CMat Q = CMat::Zero(N, N);
  for (std::size_t k = 0; k < W.size(); ++k) {
    if (static_cast<int>(k) == i) continue;
    const CMat G = H[k][i].conjugate().asDiagonal() * W[k];
    Q.noalias() += G * G.adjoint();
  }
  return Q;
}

double interference_leakage(const ChannelSet &H, const std::vector<CMat> &F, const std::vector<CMat> &W) {
  double acc = 0.0;
  for (std::size_t k = 0; k < W.size(); ++k)
    for (std::size_t i = 0; i < F.size(); ++i)
      if (i != k) acc += (W[k].adjoint() * H[k][i].asDiagonal() * F[i]).squaredNorm();
  return acc;
}

void check_channels(const ChannelSet &H, const IAConfig &cfg) {
  cfg.validate();
  if (static_cast<int>(H.size()) != cfg.K) throw Error(ErrorKind::BadLength, "channel set must be K x K");
  for (const auto &row : H) {
    if (static_cast<int>(row.size()) != cfg.K) throw Error(ErrorKind::BadLength, "channel set must be K x K");
    for (const auto &h : row)
      if (h.size() != cfg.N) throw Error(ErrorKind::BadLength, "frequency response length must equal N");
  }
}

void check_precoders(const std::vector<CMat> &F, const IAConfig &cfg, const char *what) {
  if (static_cast<int>(F.size()) != cfg.K) throw Error(ErrorKind::BadLength, std::string(what) + ": need K matrices");
  for (int k = 0; k < cfg.K; ++k)
    if (F[k].rows() != cfg.N || F[k].cols() != cfg.d[k])
      throw Error(ErrorKind::BadLength, std::string(what) + ": matrix k must be N x d_k");
}

double log2_det_hpd(const CMat &A) {
  Eigen::LLT<CMat> llt(A);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "covariance is not positive definite");
  const CMat &L = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) acc += std::log2(L(i, i).real());
  return 2.0 * acc;
}

} // namespace

IAConfig IAConfig::symmetric(int K, int n) {
  IAConfig c;
  c.K = K;
  c.N = 2 * n + 1;
  c.d.assign(static_cast<std::size_t>(K), n);
  if (K > 0) c.d[0] = n + 1;
  c.validate();
  return c;
}

int IAConfig::total_streams() const {
  int s = 0;
  for (int v : d) s += v;
  return s;
}

void IAConfig::validate() const {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be at least 1");
  if (static_cast<int>(d.size()) != K) throw Error(ErrorKind::BadLength, "need one stream count per user");
  for (int v : d)
    if (v < 1 || v >= N) throw Error(ErrorKind::InvalidArgument, "stream counts need 1 <= d_k < N");
  if (!(P >= 0.0) || !(noise_var > 0.0)) throw Error(ErrorKind::InvalidArgument, "need P >= 0 and noise variance > 0");
}

ChannelSet channels_from_taps(const std::vector<std::vector<CVec>> &taps, int N) {
  ChannelSet H(taps.size());
  for (std::size_t k = 0; k < taps.size(); ++k) {
    H[k].reserve(taps[k].size());
    for (const auto &h : taps[k]) H[k].push_back(frequency_response(h, N));
  }
  return H;
}

IASolution solve_alignment(const ChannelSet &H, const IAConfig &cfg, std::uint64_t seed, int max_iters, double tol) {
  cfg.validate();
  Rng rng(seed);
  std::vector<CMat> F0;
  for (int k = 0; k < cfg.K; ++k) {
    CMat A(cfg.N, cfg.d[k]);
    for (Eigen::Index c = 0; c < A.cols(); ++c) A.col(c) = rng.cnormal_vector(cfg.N);
    Eigen::HouseholderQR<CMat> qr(A);
    F0.push_back(qr.householderQ() * CMat::Identity(cfg.N, cfg.d[k]));
  }
  return solve_alignment_from(H, cfg, std::move(F0), max_iters, tol);
}

IASolution solve_alignment_from(const ChannelSet &H, const IAConfig &cfg, std::vector<CMat> F0, int max_iters,
                                double tol) {
  check_channels(H, cfg);
  check_precoders(F0, cfg, "solve_alignment");
  IASolution s;
  s.F = std::move(F0);
  for (auto &Fk : s.F) Fk.colwise().normalize();
  s.W.resize(static_cast<std::size_t>(cfg.K));
  for (int k = 0; k < cfg.K; ++k) s.W[k] = least_dominant(received_interference(H, s.F, k), cfg.d[k]);
  s.history.push_back(interference_leakage(H, s.F, s.W));

  while (s.history.back() > tol && s.iterations < max_iters) {
    for (int i = 0; i < cfg.K; ++i) s.F[i] = least_dominant(reciprocal_interference(H, s.W, i), cfg.d[i]);
    for (int k = 0; k < cfg.K; ++k) s.W[k] = least_dominant(received_interference(H, s.F, k), cfg.d[k]);
    s.history.push_back(interference_leakage(H, s.F, s.W));
    ++s.iterations;
  }
  s.converged = s.history.back() <= tol;
  return s;
}

ZeroForcing zf_combiners(const ChannelSet &H, const std::vector<CMat> &F, const IAConfig &cfg) {
  check_channels(H, cfg);
  check_precoders(F, cfg, "zf_combiners");
  ZeroForcing out;
  out.margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.K; ++k) {
    const Eig e = hermitian_eig(received_interference(H, F, k));
    const int dk = cfg.d[k];
    // Every direction as quiet as the d_k-th quietest one is interference free.
    const double cut = e.values(dk - 1) + 1e-12 * std::max(e.values.cwiseAbs().maxCoeff(), 1e-300);
    int s = dk;
    while (s < cfg.N && e.values(s) <= cut) ++s;
    const CMat U = e.vectors.leftCols(s);
    const CMat B = U.adjoint() * H[k][k].asDiagonal() * F[k];

    CMat Wk(cfg.N, dk);
    for (int m = 0; m < dk; ++m) {
      CVec r = B.col(m);
      if (dk > 1) {
        CMat others(s, dk - 1);
        for (int l = 0, c = 0; l < dk; ++l)
          if (l != m) others.col(c++) = B.col(l);
        Eigen::ColPivHouseholderQR<CMat> qr(others);
        const CMat Qb = qr.householderQ() * CMat::Identity(s, qr.rank());
        r -= Qb * (Qb.adjoint() * r);
      }
      const double rn = r.norm();
      if (!(rn > 1e-12 * std::max(B.col(m).norm(), 1e-300)))
        throw Error(ErrorKind::RankDeficiency, "no interference-free direction left for a stream");
      Wk.col(m) = U * (r / rn);
      out.margin = std::min(out.margin, std::abs(Wk.col(m).dot(H[k][k].cwiseProduct(F[k].col(m)))));
    }
    out.W.push_back(std::move(Wk));
  }
  return out;
}

double Leakage::total() const {
  double acc = 0.0;
  for (const auto &row : self)
    for (double v : row) acc += v;
  for (const auto &row : cross)
    for (double v : row) acc += v;
  return acc;
}

Leakage leakage(const ChannelSet &H, const std::vector<CMat> &F, const std::vector<CMat> &W, const IAConfig &cfg) {
  check_channels(H, cfg);
  check_precoders(F, cfg, "leakage");
  check_precoders(W, cfg, "leakage");
  Leakage out;
  out.self.resize(static_cast<std::size_t>(cfg.K));
  out.cross.resize(static_cast<std::size_t>(cfg.K));
  for (int k = 0; k < cfg.K; ++k) {
    for (int m = 0; m < cfg.d[k]; ++m) {
      const CVec w = W[k].col(m);
      double self = 0.0;
      for (int l = 0; l < cfg.d[k]; ++l)
        if (l != m) self += cfg.N * cfg.P / cfg.d[k] * std::norm(w.dot(H[k][k].cwiseProduct(F[k].col(l))));
      double cross = 0.0;
      for (int i = 0; i < cfg.K; ++i) {
        if (i == k) continue;
        for (int l = 0; l < cfg.d[i]; ++l)
          cross += cfg.N * cfg.P / cfg.d[i] * std::norm(w.dot(H[k][i].cwiseProduct(F[i].col(l))));
      }
      out.self[k].push_back(self);
      out.cross[k].push_back(cross);
    }
  }
  return out;
}

double sum_rate_zf(const ChannelSet &H, const std::vector<CMat> &F, const std::vector<CMat> &W, const IAConfig &cfg) {
  const Leakage lk = leakage(H, F, W, cfg);
  double rate = 0.0;
  for (int k = 0; k < cfg.K; ++k) {
    for (int m = 0; m < cfg.d[k]; ++m) {
      const double sig = cfg.N * cfg.P / cfg.d[k] * std::norm(W[k].col(m).dot(H[k][k].cwiseProduct(F[k].col(m))));
      rate += std::log2(1.0 + sig / (lk.self[k][m] + lk.cross[k][m] + cfg.noise_var)) / cfg.N;
    }
  }
  return rate;
}

double sum_rate_capacity(const ChannelSet &H, const std::vector<CMat> &F, const IAConfig &cfg) {
  check_channels(H, cfg);
  check_precoders(F, cfg, "sum_rate_capacity");
  double rate = 0.0;
  for (int k = 0; k < cfg.K; ++k) {
    CMat R = cfg.noise_var * CMat::Identity(cfg.N, cfg.N);
    for (int m = 0; m < cfg.K; ++m) {
      if (m == k) continue;
      const CMat G = H[k][m].asDiagonal() * F[m];
      R.noalias() += (cfg.N * cfg.P / cfg.d[m]) * (G * G.adjoint());
    }
    const CMat S = H[k][k].asDiagonal() * F[k];
    const CMat RS = R + (cfg.N * cfg.P / cfg.d[k]) * (S * S.adjoint());
    rate += std::max(0.0, log2_det_hpd(RS) - log2_det_hpd(R)) / cfg.N;
  }
  return rate;
}

double leakage_bound_term(const CVec &h, const CVec &g_hat, const CVec &w, const CVec &f) {
  if (h.size() != g_hat.size() || w.size() != f.size()) throw Error(ErrorKind::BadLength, "leakage_bound_term: size mismatch");
  const double d = chordal_distance(normalize(h), normalize(g_hat));
  const double a = (w.conjugate().cwiseProduct(f)).squaredNorm();
  return static_cast<double>(w.size()) * a * h.squaredNorm() * d * d;
}

} // namespace grassfeed
