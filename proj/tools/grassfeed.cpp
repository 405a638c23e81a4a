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

// grassfeed command-line driver: experiments plus codebook and log utilities.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "grassfeed/codebook.hpp"
#include "grassfeed/config.hpp"
#include "grassfeed/experiments.hpp"
#include "grassfeed/feedback.hpp"
#include "grassfeed/grassmann.hpp"
#include "grassfeed/rng.hpp"

using namespace grassfeed;

namespace {

struct RunArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out = "-";
  int trials = 0;
  int parallel = 0;
  bool full_scale = false;
  std::vector<std::string> overrides;
  std::string log;
};

// Trial counts used by --full-scale; desk-scale presets stay the default.
int full_scale_trials(const std::string &experiment) {
  if (experiment == "fig8_ia") return 500;
  return 2000;
}

Config resolve(const std::string &experiment, const RunArgs &a) {
  Config cfg = Config::preset(experiment);
  if (!a.config_path.empty()) cfg.merge_file(a.config_path);
  if (a.full_scale) cfg.set("trials", std::to_string(full_scale_trials(experiment)));
  for (const auto &kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Format, "--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.seed_given) cfg.set("seed", std::to_string(a.seed));
  if (a.trials > 0) cfg.set("trials", std::to_string(a.trials));
  if (a.parallel > 0) cfg.set("parallel", std::to_string(a.parallel));
  return cfg;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Invariant checks that exercise a codebook through the geometry and codec.
int validate_codebook(const Codebook &cb, std::uint64_t seed) {
  int failures = 0;
  auto check = [&](bool ok, const std::string &what) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++failures;
  };
  cb.validate();
  check(true, "structure: " + std::to_string(cb.size()) + " unit words, L=" + std::to_string(cb.L));
  if (cb.kind != CodebookKind::CanonicalDirection) return failures;

  Rng rng(seed, {0xBA5E});
  double worst_tangent = 0.0;
  double worst_round_trip = 0.0;
  for (int i = 0; i < 200; ++i) {
    const GrassmannPoint base = normalize(rng.cnormal_vector(cb.L));
    const HouseholderRotation U(base);
    for (const auto &w : cb.words) worst_tangent = std::max(worst_tangent, std::abs(base.vec().dot(U.apply(w))));
    const GrassmannPoint target = normalize(rng.cnormal_vector(cb.L));
    const GrassmannPoint back = exp_map(base, log_map(base, target));
    worst_round_trip = std::max(worst_round_trip, chordal_distance(back, target));
  }
  check(worst_tangent < 1e-10, "rotated words tangent to the base (worst " + std::to_string(worst_tangent) + ")");
  check(worst_round_trip < 1e-10, "log/exp round trip (worst " + std::to_string(worst_round_trip) + ")");

  auto shared = std::make_shared<const Codebook>(cb);
  const MagnitudeWindow w = MagnitudeWindow::adaptive(1);
  CodecState enc = init_all_ones(shared, w);
  CodecState dec = init_all_ones(shared, w);
  bool lockstep = true;
  CVec h = rng.cnormal_vector(cb.L);
  for (int t = 0; t < 2000 && lockstep; ++t) {
    h = 0.99 * h + std::sqrt(1.0 - 0.99 * 0.99) * rng.cnormal_vector(cb.L);
    decode(dec, encode(enc, normalize(h)));
    lockstep = enc.synchronized_with(dec);
  }
  check(lockstep, "encoder and decoder stay synchronized over 2000 steps");
  return failures;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"grassfeed: differential Grassmannian CSI feedback simulator"};
  app.require_subcommand(1);

  RunArgs run;
  for (const auto &name : Config::experiments()) {
    auto *sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", run.config_path, "key=value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", run.seed, "master seed")->each([&](const std::string &) { run.seed_given = true; });
    sub->add_option("--out", run.out, "results CSV path ('-' for stdout)");
    sub->add_option("--trials", run.trials, "override the trial count")->check(CLI::PositiveNumber);
    sub->add_option("--parallel", run.parallel, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--full-scale", run.full_scale, "use full-scale trial counts");
    sub->add_option("--set", run.overrides, "override one key (key=value), repeatable");
    if (name == "fig3_track")
      sub->add_option("--log", run.log, "write trial 0's adaptive message log here (plus .codebook.json, .trajectory.csv)");
  }

  int L = 3, bits = 6, train = 20000, iters = 50;
  std::uint64_t seed = 1;
  std::string cb_out;
  auto *tr = app.add_subcommand("train-codebook", "Lloyd-train a canonical direction codebook");
  tr->add_option("--L", L, "channel taps")->check(CLI::Range(2, 64));
  tr->add_option("--bits", bits, "direction bits")->check(CLI::Range(1, 20));
  tr->add_option("--train", train, "training set size")->check(CLI::PositiveNumber);
  tr->add_option("--iters", iters, "Lloyd iterations")->check(CLI::NonNegativeNumber);
  tr->add_option("--seed", seed, "seed");
  tr->add_option("--out", cb_out, "codebook JSON path")->required();

  std::string cb_in;
  std::string val_config;
  auto *val = app.add_subcommand("validate", "load a codebook and config and re-run invariant checks");
  val->add_option("--codebook", cb_in, "codebook JSON");
  val->add_option("--config", val_config, "config file to parse");
  val->add_option("--seed", seed, "seed for the random checks");

  std::string rp_config, rp_log, rp_out = "-";
  std::string rp_experiment = "fig3_track";
  auto *rp = app.add_subcommand("replay", "re-decode a logged message stream");
  rp->add_option("--config", rp_config, "config used for the logged run")->check(CLI::ExistingFile);
  rp->add_option("--experiment", rp_experiment, "experiment preset the config overlays");
  rp->add_option("--log", rp_log, "message log CSV")->required()->check(CLI::ExistingFile);
  rp->add_option("--codebook", cb_in, "direction codebook JSON")->required()->check(CLI::ExistingFile);
  rp->add_option("--out", rp_out, "trajectory CSV path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App *chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();

    if (name == "train-codebook") {
      Rng rng(seed, {0x7A1});
      std::vector<CVec> set;
      set.reserve(static_cast<std::size_t>(train));
      for (int i = 0; i < train; ++i) {
        CVec v = rng.cnormal_vector(L - 1);
        set.push_back(v / v.norm());
      }
      const LloydResult res = lloyd_train(set, bits, iters, derive_seed(seed, {0x7A2}));
      save_codebook(res.codebook, cb_out);
      std::fprintf(stderr, "distortion %.6g -> %.6g over %d iterations\n", res.distortion.front(), res.distortion.back(),
                   iters);
      return 0;
    }

    if (name == "validate") {
      if (cb_in.empty() && val_config.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to validate");
      int failures = 0;
      if (!val_config.empty()) {
        std::string experiment;
        std::istringstream text(slurp(val_config));
        for (std::string line; std::getline(text, line);) {
          const auto eq = line.find('=');
          if (line.rfind("experiment", 0) == 0 && eq != std::string::npos) {
            experiment = line.substr(eq + 1);
            experiment.erase(0, experiment.find_first_not_of(" \t"));
            experiment.erase(experiment.find_last_not_of(" \t\r") + 1);
          }
        }
        if (experiment.empty()) throw Error(ErrorKind::Format, val_config + ": missing 'experiment = <id>' line");
        Config cfg = Config::preset(experiment);
        cfg.merge_file(val_config);
        std::printf("ok   config %s (hash %s)\n", val_config.c_str(), cfg.hash().c_str());
      }
      if (!cb_in.empty()) failures += validate_codebook(load_codebook(cb_in), seed);
      return failures ? 1 : 0;
    }

    if (name == "replay") {
      Config cfg = Config::preset(rp_experiment);
      if (!rp_config.empty()) cfg.merge_file(rp_config);
      auto cb = std::make_shared<const Codebook>(load_codebook(cb_in));
      std::ifstream lf(rp_log);
      std::vector<FeedbackMessage> msgs;
      for (const auto &m : read_message_log(lf)) msgs.push_back(m.msg);
      const auto traj = replay(initial_codec_state(cfg, cb), msgs);
      if (rp_out == "-") {
        write_trajectory(std::cout, traj);
      } else {
        std::ofstream of(rp_out);
        if (!of) throw Error(ErrorKind::InvalidArgument, "cannot write " + rp_out);
        write_trajectory(of, traj);
      }
      return 0;
    }

    const Config cfg = resolve(name, run);
    TraceArtifacts art;
    art.log_path = run.log;
    if (run.out == "-") {
      run_experiment(cfg, std::cout, art);
    } else {
      std::ofstream of(run.out);
      if (!of) throw Error(ErrorKind::InvalidArgument, "cannot write " + run.out);
      run_experiment(cfg, of, art);
    }
    return 0;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "grassfeed: %s\n", e.what());
    return 1;
  }
}
