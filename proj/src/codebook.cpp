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

#include "grassfeed/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "grassfeed/rng.hpp"

namespace grassfeed {

namespace {

constexpr int kFormatVersion = 1;

const char *kind_name(CodebookKind k) {
  return k == CodebookKind::CanonicalDirection ? "canonical_direction" : "random_vector";
}

CVec isotropic_unit(Rng &rng, Eigen::Index n) {
  for (;;) {
    CVec v = rng.cnormal_vector(n);
    const double nv = v.norm();
    if (nv > 1e-12) return v / nv;
  }
}

void check_bits(int n_bits) {
  if (n_bits < 0 || n_bits > 24) throw Error(ErrorKind::InvalidArgument, "codebook bits must lie in [0, 24]");
}

} // namespace

void Codebook::validate() const {
  if (L < 1) throw Error(ErrorKind::Format, "codebook dimension must be positive");
  if (kind == CodebookKind::CanonicalDirection && L < 2)
    throw Error(ErrorKind::Format, "canonical codebooks need L >= 2");
  if (n_bits < 0 || n_bits > 24 || words.size() != (std::size_t{1} << n_bits))
    throw Error(ErrorKind::Format, "codebook must hold exactly 2^n_bits words");
  for (std::size_t i = 0; i < words.size(); ++i) {
    const CVec &w = words[i];
    if (w.size() != L) throw Error(ErrorKind::Format, "word " + std::to_string(i) + " has wrong length");
    if (!w.allFinite()) throw Error(ErrorKind::Format, "word " + std::to_string(i) + " is not finite");
    if (std::abs(w.norm() - 1.0) > 1e-12) throw Error(ErrorKind::Format, "word " + std::to_string(i) + " is not unit norm");
    if (kind == CodebookKind::CanonicalDirection && w(0) != cplx(0.0))
      throw Error(ErrorKind::Format, "canonical word " + std::to_string(i) + " has a nonzero leading entry");
  }
}

Codebook random_canonical_codebook(int L, int n_bits, std::uint64_t seed) {
  if (L < 2) throw Error(ErrorKind::InvalidArgument, "canonical codebooks need L >= 2");
  check_bits(n_bits);
  Rng rng(seed, {0xC0DEB00Cu});
  Codebook cb{CodebookKind::CanonicalDirection, L, n_bits, {}};
  cb.words.reserve(std::size_t{1} << n_bits);
  for (std::size_t i = 0; i < (std::size_t{1} << n_bits); ++i) {
    CVec w = CVec::Zero(L);
    w.tail(L - 1) = isotropic_unit(rng, L - 1);
    cb.words.push_back(std::move(w));
  }
  return cb;
}

Codebook random_vector_codebook(int L, int n_bits, std::uint64_t seed) {
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "codebook dimension must be positive");
  check_bits(n_bits);
  Rng rng(seed, {0x5EC7u});
  Codebook cb{CodebookKind::RandomVector, L, n_bits, {}};
  cb.words.reserve(std::size_t{1} << n_bits);
  for (std::size_t i = 0; i < (std::size_t{1} << n_bits); ++i) cb.words.push_back(isotropic_unit(rng, L));
  return cb;
}

namespace {

// Best word by Re(v~* e); returns (index, 1 - Re).
std::pair<int, double> best_direction(const CVec &e, const Codebook &cb) {
  int best = 0;
  double best_re = -2.0;
  const Eigen::Index n = e.size();
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const double re = cb[i].tail(n).dot(e).real();
    if (re > best_re) {
      best_re = re;
      best = static_cast<int>(i);
    }
  }
  return {best, 1.0 - best_re};
}

} // namespace

double direction_distortion(const std::vector<CVec> &directions, const Codebook &cb) {
  if (directions.empty()) return 0.0;
  double acc = 0.0;
  for (const auto &e : directions) acc += best_direction(e, cb).second;
  return acc / static_cast<double>(directions.size());
}

LloydResult lloyd_train(const std::vector<CVec> &directions, int n_bits, int iters, std::uint64_t seed) {
  if (directions.empty()) throw Error(ErrorKind::InvalidArgument, "lloyd_train needs training data");
  const Eigen::Index n = directions.front().size();
  for (const auto &e : directions)
    if (e.size() != n || std::abs(e.norm() - 1.0) > 1e-9)
      throw Error(ErrorKind::InvalidArgument, "training directions must be unit vectors of equal length");
  const int L = static_cast<int>(n) + 1;

  LloydResult out{random_canonical_codebook(L, n_bits, seed), {}};
  Codebook &cb = out.codebook;
  const std::size_t K = cb.size();
  std::vector<int> cell(directions.size());
  std::vector<double> dist(directions.size());

  auto assign = [&] {
    double acc = 0.0;
    for (std::size_t j = 0; j < directions.size(); ++j) {
      auto [idx, d] = best_direction(directions[j], cb);
      cell[j] = idx;
      dist[j] = d;
      acc += d;
    }
    return acc / static_cast<double>(directions.size());
  };

  out.distortion.push_back(assign());
  for (int it = 0; it < iters; ++it) {
    std::vector<CVec> sums(K, CVec::Zero(n));
    std::vector<std::size_t> count(K, 0);
    for (std::size_t j = 0; j < directions.size(); ++j) {
      sums[cell[j]] += directions[j];
      ++count[cell[j]];
    }
    for (std::size_t k = 0; k < K; ++k) {
      const double s = sums[k].norm();
      if (count[k] > 0 && s > 1e-300) cb.words[k].tail(n) = sums[k] / s;
    }
    // Empty cells take the worst-served member of the most populated cell.
    for (std::size_t k = 0; k < K; ++k) {
      if (count[k] != 0) continue;
      const auto donor = static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin());
      std::size_t worst = 0;
      double worst_d = -1.0;
      for (std::size_t j = 0; j < directions.size(); ++j)
        if (cell[j] == donor && dist[j] > worst_d) {
          worst_d = dist[j];
          worst = j;
        }
      cb.words[k].tail(n) = directions[worst];
      cell[worst] = static_cast<int>(k);
      dist[worst] = 0.0;
      --count[donor];
      count[k] = 1;
    }
    out.distortion.push_back(assign());
  }
  return out;
}

std::string codebook_to_json(const Codebook &cb) {
  nlohmann::json j;
  j["version"] = kFormatVersion;
  j["kind"] = kind_name(cb.kind);
  j["L"] = cb.L;
  j["n_bits"] = cb.n_bits;
  nlohmann::json words = nlohmann::json::array();
  for (const auto &w : cb.words) {
    nlohmann::json jw = nlohmann::json::array();
    for (Eigen::Index i = 0; i < w.size(); ++i) jw.push_back({w(i).real(), w(i).imag()});
    words.push_back(std::move(jw));
  }
  j["words"] = std::move(words);
  return j.dump();
}

Codebook codebook_from_json(const std::string &text) {
  Codebook cb;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != kFormatVersion) throw Error(ErrorKind::Format, "unsupported codebook version");
    const auto kind = j.value("kind", std::string("canonical_direction"));
    if (kind == "canonical_direction") cb.kind = CodebookKind::CanonicalDirection;
    else if (kind == "random_vector") cb.kind = CodebookKind::RandomVector;
    else throw Error(ErrorKind::Format, "unknown codebook kind '" + kind + "'");
    cb.L = j.at("L").get<int>();
    cb.n_bits = j.at("n_bits").get<int>();
    for (const auto &jw : j.at("words")) {
      CVec w(static_cast<Eigen::Index>(jw.size()));
      for (std::size_t i = 0; i < jw.size(); ++i)
        w(static_cast<Eigen::Index>(i)) = cplx(jw.at(i).at(0).get<double>(), jw.at(i).at(1).get<double>());
      cb.words.push_back(std::move(w));
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::Format, std::string("malformed codebook JSON: ") + e.what());
  }
  cb.validate();
  return cb;
}

void save_codebook(const Codebook &cb, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string() + " for writing");
  out << codebook_to_json(cb) << '\n';
}

Codebook load_codebook(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return codebook_from_json(ss.str());
}

MagnitudeWindow MagnitudeWindow::adaptive(int n_bits, double tau, double alpha, double beta) {
  MagnitudeWindow w;
  w.n_bits = n_bits;
  w.tau = tau;
  w.alpha = alpha;
  w.beta = beta;
  w.validate();
  return w;
}

MagnitudeWindow MagnitudeWindow::fixed_range(int n_bits) {
  MagnitudeWindow w;
  w.n_bits = n_bits;
  w.e_min = 0.0;
  w.e_max = 1.0;
  w.e_avg = 0.5;
  w.alpha = 1.0;
  w.beta = 1.0;
  w.validate();
  return w;
}

void MagnitudeWindow::validate() const {
  if (n_bits < 0 || n_bits > 20) throw Error(ErrorKind::InvalidArgument, "magnitude bits must lie in [0, 20]");
  if (!(tau > 1.0)) throw Error(ErrorKind::InvalidArgument, "tau must exceed 1");
  if (!(alpha > 0.0 && alpha <= 1.0 && beta >= 1.0))
    throw Error(ErrorKind::InvalidArgument, "window scalars need 0 < alpha <= 1 <= beta");
  if (!(e_min >= 0.0 && e_min <= e_avg && e_avg <= e_max))
    throw Error(ErrorKind::InvalidArgument, "window needs 0 <= e_min <= e_avg <= e_max");
}

double MagnitudeWindow::level(int index) const {
  return lower() + (static_cast<double>(index) + 0.5) * cell_width();
}

MagnitudeQuantization quantize_magnitude(double mag, const MagnitudeWindow &w) {
  MagnitudeQuantization q{0, w.level(0)};
  double best = std::abs(mag - q.value);
  for (int i = 1; i < w.levels(); ++i) {
    const double v = w.level(i);
    const double err = std::abs(mag - v);
    if (err < best) {
      best = err;
      q = {i, v};
    }
  }
  return q;
}

MagnitudeWindow update_window(const MagnitudeWindow &w, double quantized_mag) {
  MagnitudeWindow out = w;
  const double keep = 1.0 - 1.0 / w.tau;
  const double take = 1.0 / w.tau;
  out.e_avg = keep * w.e_avg + take * quantized_mag;
  bool below = quantized_mag <= w.e_avg;
  bool above = quantized_mag >= w.e_avg;
  if (w.rule == WindowRule::Level) {
    const int qi = quantize_magnitude(quantized_mag, w).index;
    const int ai = quantize_magnitude(w.e_avg, w).index;
    below = qi <= ai;
    above = qi >= ai;
  }
  if (below) out.e_min = keep * w.e_min + take * quantized_mag;
  if (above) out.e_max = keep * w.e_max + take * quantized_mag;
  out.e_min = std::clamp(out.e_min, 0.0, out.e_avg);
  out.e_max = std::max(out.e_max, out.e_avg);
  return out;
}

DirectionQuantization quantize_direction(const GrassmannPoint &base, const GrassmannPoint &target, double mag,
                                         const Codebook &cb, int excluded) {
  if (cb.kind != CodebookKind::CanonicalDirection) throw Error(ErrorKind::InvalidArgument, "direction codebook must be canonical");
  if (base.dim() != cb.L || target.dim() != cb.L) throw Error(ErrorKind::BadLength, "quantize_direction: dimension mismatch");
  const HouseholderRotation U(base);
  const cplx rho = base.vec().dot(target.vec());
  const CVec rotated = U.apply(target.vec()); // U* g, U Hermitian
  const double c = std::cos(mag);
  const double s = std::sin(mag);
  const Eigen::Index n = cb.L - 1;

  int best = -1;
  double best_obj = -1.0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    if (static_cast<int>(i) == excluded) continue;
    const cplx proj = cb[i].tail(n).dot(rotated.tail(n));
    const double obj = std::norm(c * rho + s * proj);
    if (obj > best_obj) {
      best_obj = obj;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw Error(ErrorKind::InvalidArgument, "no eligible direction codeword");
  return {best, U.apply(cb[static_cast<std::size_t>(best)])};
}

int nearest_word(const GrassmannPoint &g, const Codebook &cb) {
  if (g.dim() != cb.L) throw Error(ErrorKind::BadLength, "nearest_word: dimension mismatch");
  int best = 0;
  double best_gain = -1.0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const double gain = std::norm(cb[i].dot(g.vec()));
    if (gain > best_gain) {
      best_gain = gain;
      best = static_cast<int>(i);
    }
  }
  return best;
}

} // namespace grassfeed
