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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "grassfeed/config.hpp"
#include "grassfeed/experiments.hpp"

using namespace grassfeed;

namespace {

std::string csv(const Config &cfg) {
  std::ostringstream out;
  run_experiment(cfg, out);
  return out.str();
}

Config small(const std::string &experiment, int trials) {
  Config c = Config::preset(experiment);
  c.set("trials", std::to_string(trials));
  return c;
}

} // namespace

TEST_CASE("every experiment has a preset") {
  const auto ids = Config::experiments();
  CHECK(ids.size() == 7);
  for (const auto &id : ids) {
    const Config c = Config::preset(id);
    CHECK(c.experiment() == id);
    CHECK(c.get_int("trials") >= 1);
    CHECK(c.hash().size() == 16);
  }
  CHECK_THROWS_AS(Config::preset("fig9"), Error);
}

TEST_CASE("config parsing") {
  Config c = Config::preset("fig3_track");
  c.merge_text("# comment\nexperiment = fig3_track\nfd_ts = 0.003   # trailing\nn_dir=5\n");
  CHECK(c.get_real_list("fd_ts") == std::vector<double>{0.003});
  CHECK(c.get_int("n_dir") == 5);

  try {
    c.merge_text("n_dirr = 5\n", "typo.conf");
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Format);
    CHECK(std::string(e.what()).find("n_dirr") != std::string::npos);
  }
  CHECK_THROWS_AS(c.merge_text("n_dir = six\n"), Error);
  CHECK_THROWS_AS(c.merge_text("n_dir = 2.5\n"), Error);
  CHECK_THROWS_AS(c.merge_text("experiment = fig4_magbits\n"), Error);
  CHECK_THROWS_AS(c.merge_text("just words\n"), Error);
  CHECK_THROWS_AS(c.set("seed", "-1"), Error);
}

TEST_CASE("hash ignores the worker count only") {
  Config a = Config::preset("fig5_dirbits");
  Config b = a;
  b.set("parallel", "4");
  CHECK(a.hash() == b.hash());
  b.set("seed", "2");
  CHECK(a.hash() != b.hash());
}

TEST_CASE("results are byte-identical across runs and worker counts") {
  for (const std::string id : {"fig3_track", "fig5_dirbits", "fig7_refresh"}) {
    Config c = small(id, 6);
    if (id == "fig5_dirbits") {
      c.set("fd_ts", "0.005,0.05");
      c.set("dir_bits", "2,6");
    }
    if (id == "fig7_refresh") {
      c.set("horizon", "1500");
      c.set("steady_from", "500");
      c.set("dir_bits", "3,7");
    }
    const std::string one = csv(c);
    CHECK(one == csv(c));
    c.set("parallel", "4");
    CHECK(one == csv(c));
    c.set("seed", "99");
    CHECK(one != csv(c));
  }
}

TEST_CASE("csv header carries the resolved config") {
  Config c = small("table1_phase", 4);
  c.set("L_list", "2");
  const std::string out = csv(c);
  std::istringstream in(out);
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  CHECK(l1 == "# grassfeed table1_phase schema=1 config_hash=" + c.hash());
  CHECK(l2.find("L_list=2") != std::string::npos);
  CHECK(l3 == "L,n_dir,mean_d2,mean_d2_db,floored,min_bits");
}

TEST_CASE("db values use six significant digits") {
  CHECK(fmt_db(-23.456789123) == "-23.4568");
  CHECK(fmt_db(0.000123456789) == "0.000123457");
}

TEST_CASE("fig3 transient and ordering") {
  Config c = small("fig3_track", 60);
  const Fig3Result r = run_fig3(c);
  double steady = 0.0;
  for (std::size_t t = 19; t < r.mean_d[0].size(); ++t) steady += r.mean_d[0][t];
  steady /= static_cast<double>(r.mean_d[0].size() - 19);
  CHECK(r.mean_d[0][0] > steady);
  double a = 0.0, f = 0.0, q = 0.0;
  for (std::size_t i = 0; i < r.steady_d2[0].size(); ++i) {
    a += r.steady_d2[0][i];
    f += r.steady_d2[1][i];
    q += r.steady_d2[2][i];
  }
  CHECK(a < f);
  CHECK(a < q);
  // From t = 6 on the adaptive curve stays under the RVQ curve.
  for (std::size_t t = 5; t < r.mean_d[0].size(); ++t) CHECK(r.mean_d[0][t] < r.mean_d[2][t]);
}

TEST_CASE("fig3 artifacts replay") {
  const auto dir = std::filesystem::temp_directory_path() / "grassfeed_fig3_artifacts";
  std::filesystem::create_directories(dir);
  Config c = small("fig3_track", 2);
  TraceArtifacts art;
  art.log_path = dir / "messages.csv";
  std::ostringstream sink;
  run_experiment(c, sink, art);
  std::ifstream lf(art.log_path);
  std::vector<FeedbackMessage> msgs;
  for (const auto &m : read_message_log(lf)) msgs.push_back(m.msg);
  CHECK(msgs.size() == 100);
  auto cb = std::make_shared<const Codebook>(load_codebook(art.log_path.string() + ".codebook.json"));
  std::ostringstream replayed;
  write_trajectory(replayed, replay(initial_codec_state(c, cb), msgs));
  std::ifstream tf(art.log_path.string() + ".trajectory.csv");
  std::stringstream recorded;
  recorded << tf.rdbuf();
  CHECK(replayed.str() == recorded.str());
  std::filesystem::remove_all(dir);
}

TEST_CASE("table1 floor detection") {
  Config c = small("table1_phase", 10);
  c.set("L_list", "2");
  const PhaseResult r = run_table1(c);
  REQUIRE(r.min_bits.size() == 1);
  const int mb = r.min_bits[0].second;
  const double ref = r.rows.back().mean_d2;
  for (const auto &row : r.rows) {
    CHECK(row.floored == !(row.mean_d2 < 10.0 * ref));
    if (row.n_dir >= mb) CHECK(!row.floored);
  }
  CHECK(r.rows.back().n_dir == 7);
}

TEST_CASE("fig7 keeps the bit rate fixed") {
  Config c = small("fig7_refresh", 3);
  c.set("horizon", "1200");
  c.set("steady_from", "400");
  const RefreshResult r = run_fig7(c);
  for (const auto &row : r.rows) {
    CHECK(row.bits_per_second == 5000.0);
    CHECK(row.period_ticks == row.bits_per_update);
  }
}

TEST_CASE("fig8 on a small system") {
  Config c = small("fig8_ia", 2);
  c.set("N", "3");
  c.set("d", "2,1,1");
  c.set("fd_ts", "0.003");
  c.set("snr_db", "10,30");
  const RateResult r = run_fig8(c);
  for (const std::string m : {"perfect", "differential", "fixed_range", "rvq", "analytic"}) {
    CHECK(std::isfinite(r.rate(0.003, 10, m)));
    CHECK(r.rate(0.003, 30, m) >= r.rate(0.003, 10, m) - 1e-9);
  }
  CHECK(r.rate(0.003, 30, "analytic") <= r.rate(0.003, 30, "perfect"));
  CHECK_THROWS_AS(([&] {
                    Config bad = c;
                    bad.set("d", "3,1,1");
                    run_fig8(bad);
                  }()),
                  Error);
}
