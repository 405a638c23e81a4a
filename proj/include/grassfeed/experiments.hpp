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

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "grassfeed/codebook.hpp"
#include "grassfeed/config.hpp"
#include "grassfeed/feedback.hpp"

namespace grassfeed {

/// CSV body; cells are preformatted strings.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

/// %.9g; enough for byte-stable output without noise digits.
std::string fmt(double v);
/// Six significant digits, used for every dB column.
std::string fmt_db(double v);
std::string fmt_int(long long v);

/// Two comment lines (experiment, schema version, config hash; resolved
/// config), then the header row and the data rows.
void write_csv(std::ostream &out, const Table &table, const Config &cfg);

/// Runs f(i) for i in [0, n) on `workers` threads. Results must be written to
/// per-index slots so the outcome does not depend on scheduling.
void parallel_for(int n, int workers, const std::function<void(int)> &f);

enum class Method { Adaptive, FixedRange, Rvq };
const char *to_string(Method m);

/// Optional artifacts of the fig3 run for trial 0 of the adaptive codec.
struct TraceArtifacts {
  std::filesystem::path log_path; // message-log CSV; empty disables
};

struct Fig3Result {
  std::vector<double> mean_d[3];               // per t = 1..T, indexed by Method
  std::vector<double> steady_d2[3];            // per trial, mean d^2 over t >= steady_from
  Table table() const;
};
Fig3Result run_fig3(const Config &cfg, const TraceArtifacts &artifacts = {});

struct SweepRow {
  std::string section; // "mag", "total", "dir"
  double fd_ts = 0.0;
  Method method = Method::Adaptive;
  int n_dir = 0;
  int n_mag = 0;
  double mean_d2 = 0.0;
  double std_err = 0.0;
};
struct SweepResult {
  std::vector<SweepRow> rows;
  Table table() const;
};
SweepResult run_fig4(const Config &cfg);
SweepResult run_fig5(const Config &cfg);

struct ApproxRow {
  double fd_ts = 0.0;
  int n_dir = 0;
  double simulated = 0.0; // E|g* g^|^2
  double approx = 0.0;    // closed form D
  int n_theta = 0;
  int n_g = 0;
};
struct ApproxResult {
  std::vector<ApproxRow> rows;
  Table table() const;
};
ApproxResult run_fig6(const Config &cfg);

struct RefreshRow {
  double doppler_hz = 0.0;
  int bits_per_update = 0;
  int period_ticks = 0;
  double bits_per_second = 0.0;
  double mean_d2 = 0.0;
};
struct RefreshResult {
  std::vector<RefreshRow> rows;
  Table table() const;
};
RefreshResult run_fig7(const Config &cfg);

struct RateRow {
  double fd_ts = 0.0;
  double snr_db = 0.0;
  std::string method; // perfect, differential, fixed_range, rvq, analytic
  double mean_rate = 0.0;
  double std_err = 0.0;
};
struct RateResult {
  std::vector<RateRow> rows;
  Table table() const;
  /// Mean rate of a method at (fd, snr); NaN if absent.
  double rate(double fd_ts, double snr_db, const std::string &method) const;
};
RateResult run_fig8(const Config &cfg);

struct PhaseRow {
  int L = 0;
  int n_dir = 0;
  double mean_d2 = 0.0;
  bool floored = false;
};
struct PhaseResult {
  std::vector<PhaseRow> rows;
  std::vector<std::pair<int, int>> min_bits; // (L, minimal N_dir without a floor; -1 if none)
  Table table() const;
};
PhaseResult run_table1(const Config &cfg);

/// Dispatches on cfg.experiment() and writes the CSV.
void run_experiment(const Config &cfg, std::ostream &out, const TraceArtifacts &artifacts = {});

/// Codec state at t = 0 for the adaptive method described by cfg.
CodecState initial_codec_state(const Config &cfg, std::shared_ptr<const Codebook> dir_cb);

/// "t,re0,im0,re1,im1,..." with %.17g.
void write_trajectory(std::ostream &out, const std::vector<GrassmannPoint> &traj);

} // namespace grassfeed
