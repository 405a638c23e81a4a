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
#include <filesystem>
#include <string>
#include <vector>

#include "grassfeed/common.hpp"
#include "grassfeed/grassmann.hpp"

namespace grassfeed {

enum class CodebookKind {
  CanonicalDirection, // words [0, v~] orthogonal to x_b = [1, 0, ..., 0]
  RandomVector,       // unconstrained unit vectors (memoryless RVQ)
};

/// 2^n_bits unit-norm complex L-vectors. Immutable once built.
struct Codebook {
  CodebookKind kind = CodebookKind::CanonicalDirection;
  int L = 0;
  int n_bits = 0;
  std::vector<CVec> words;

  std::size_t size() const noexcept { return words.size(); }
  const CVec &operator[](std::size_t i) const { return words[i]; }

  /// Checks word count, dimension, unit norm (1e-12) and, for canonical
  /// codebooks, a structurally zero leading entry. Throws Format on failure.
  void validate() const;
};

/// Isotropic unit (L-1)-vectors with a 0 prepended.
Codebook random_canonical_codebook(int L, int n_bits, std::uint64_t seed);
/// Isotropic unit L-vectors.
Codebook random_vector_codebook(int L, int n_bits, std::uint64_t seed);

struct LloydResult {
  Codebook codebook;
  std::vector<double> distortion; // mean training distortion after each iteration (entry 0 = initial)
};

/// Mean of 1 - Re(v* e) for the best word v, i.e. the small-magnitude limit of
/// the direction objective. `directions` are unit (L-1)-vectors.
double direction_distortion(const std::vector<CVec> &directions, const Codebook &cb);

/// Generalized Lloyd on the unit sphere of C^{L-1} with distortion 1 - Re(v* e).
/// Starts from random_canonical_codebook(L, n_bits, seed). Empty cells are
/// re-seeded from the most populated cell.
LloydResult lloyd_train(const std::vector<CVec> &directions, int n_bits, int iters, std::uint64_t seed);

/// Versioned JSON: {"version":1,"kind":...,"L":..,"n_bits":..,"words":[[[re,im],...],...]}.
std::string codebook_to_json(const Codebook &cb);
Codebook codebook_from_json(const std::string &text);
void save_codebook(const Codebook &cb, const std::filesystem::path &path);
Codebook load_codebook(const std::filesystem::path &path);

struct MagnitudeQuantization {
  int index = 0;
  double value = 0.0;
};

/// How a quantized magnitude is compared with the running average.
/// `Level` compares quantizer indices, so a magnitude in the same cell as
/// the average counts as equal and moves both limits. `Literal` compares the
/// raw values and can stall once the quantized sequence becomes constant.
enum class WindowRule { Level, Literal };

/// Sliding quantization range [alpha*e_min, beta*e_max] for tangent magnitudes,
/// split into 2^n_bits equal cells with levels at the cell midpoints.
struct MagnitudeWindow {
  double e_min = 0.0;
  double e_max = 1.5707963267948966;
  double e_avg = 0.7853981633974483;
  double tau = 5.0;
  double alpha = 0.5;
  double beta = 2.0;
  int n_bits = 1;
  WindowRule rule = WindowRule::Level;

  /// e_min = 0, e_max = pi/2, e_avg = pi/4 with the given smoothing parameters.
  static MagnitudeWindow adaptive(int n_bits, double tau = 5.0, double alpha = 0.5, double beta = 2.0);
  /// Non-adaptive window uniform on [0, 1] (fixed-range baseline).
  static MagnitudeWindow fixed_range(int n_bits);

  int levels() const noexcept { return 1 << n_bits; }
  double lower() const noexcept { return alpha * e_min; }
  double upper() const noexcept { return beta * e_max; }
  double cell_width() const noexcept { return (upper() - lower()) / levels(); }
  double level(int index) const;

  void validate() const;
};

/// Nearest level (ties to the lower index); out-of-range inputs clamp.
MagnitudeQuantization quantize_magnitude(double mag, const MagnitudeWindow &w);

/// Moving-average window update with the quantized magnitude.
MagnitudeWindow update_window(const MagnitudeWindow &w, double quantized_mag);

struct DirectionQuantization {
  int index = 0;
  CVec dir; // U(base) * v_index
};

/// Chooses the canonical word whose rotated version maximizes
/// |G(base, mag * U(base) v_i, 1)* target|^2 (ties to the lower index).
/// The channel is rotated instead of the codebook. When `excluded` >= 0
/// that index is skipped.
DirectionQuantization quantize_direction(const GrassmannPoint &base, const GrassmannPoint &target, double mag,
                                         const Codebook &cb, int excluded = -1);

/// Index of the chordal-nearest word (ties to the lower index).
int nearest_word(const GrassmannPoint &g, const Codebook &cb);

} // namespace grassfeed
