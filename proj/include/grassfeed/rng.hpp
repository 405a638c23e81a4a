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

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

#include "grassfeed/common.hpp"

namespace grassfeed {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream key from a master seed and a path of ids
// (e.g. {trial, link}). Same inputs always give the same key.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t k = mix64(master + 0x9e3779b97f4a7c15ULL);
  for (auto id : path) k = mix64(k ^ mix64(id + 0x632be59bd9b4e019ULL));
  return k;
}

/// Counter-based generator: the n-th output is mix64(key + n * gamma).
/// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) : key_(key) {}
  Rng(std::uint64_t master, std::initializer_list<std::uint64_t> path)
      : key_(derive_seed(master, path)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(*this); }
  double normal() { return normal_(*this); }

  // Circularly symmetric complex Gaussian with E|z|^2 = var.
  cplx cnormal(double var = 1.0) {
    const double s = std::sqrt(var / 2.0);
    const double re = normal_(*this);
    const double im = normal_(*this);
    return {s * re, s * im};
  }

  CVec cnormal_vector(Eigen::Index n, double var = 1.0) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal(var);
    return v;
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace grassfeed
