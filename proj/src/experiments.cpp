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

#include "grassfeed/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "grassfeed/analysis.hpp"
#include "grassfeed/channel.hpp"
#include "grassfeed/ia.hpp"
#include "grassfeed/rng.hpp"

namespace grassfeed {

namespace {

constexpr int kSchemaVersion = 1;

// Stream tags for derive_seed; fixed forever so outputs stay reproducible.
constexpr std::uint64_t kTagChannel = 0xC4A7;
constexpr std::uint64_t kTagDirBook = 0xC0DE;
constexpr std::uint64_t kTagRvqBook = 0x2A9;
constexpr std::uint64_t kTagLloyd = 0x11D;
constexpr std::uint64_t kTagIa = 0x1A;

std::uint64_t u(long long v) { return static_cast<std::uint64_t>(v); }

int as_int(const Config &c, const char *key, long long lo, long long hi) {
  const long long v = c.get_int(key);
  if (v < lo || v > hi)
    throw Error(ErrorKind::InvalidArgument, std::string("key '") + key + "' must lie in [" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::vector<int> int_list(const Config &c, const char *key, long long lo, long long hi) {
  std::vector<int> out;
  for (long long v : c.get_int_list(key)) {
    if (v < lo || v > hi)
      throw Error(ErrorKind::InvalidArgument, std::string("entries of '") + key + "' must lie in [" + std::to_string(lo) +
                                                  ", " + std::to_string(hi) + "]");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

WindowRule window_rule(const Config &c) {
  const std::string &r = c.get_text("window_rule");
  if (r == "level") return WindowRule::Level;
  if (r == "literal") return WindowRule::Literal;
  throw Error(ErrorKind::Format, "window_rule must be 'level' or 'literal'");
}

MagnitudeWindow adaptive_window(const Config &c, int n_mag) {
  MagnitudeWindow w = MagnitudeWindow::adaptive(n_mag, c.get_real("tau"), c.get_real("alpha"), c.get_real("beta"));
  w.rule = window_rule(c);
  return w;
}

struct Common {
  std::uint64_t seed;
  int trials;
  int workers;
  int L;
  int ar_order;

  explicit Common(const Config &c)
      : seed(c.get_u64("seed")), trials(as_int(c, "trials", 1, 100000000)), workers(as_int(c, "parallel", 1, 1024)),
        L(as_int(c, "L", 2, 64)), ar_order(as_int(c, "ar_order", 1, 4096)) {}
};

// Direction codebooks: a fresh random canonical codebook per trial, or one
// Lloyd-trained codebook per size shared by all trials.
class DirBooks {
public:
  DirBooks(const Config &c, int L) : seed_(c.get_u64("seed")), L_(L) {
    const std::string &kind = c.get_text("codebook");
    if (kind == "lloyd") {
      lloyd_ = true;
      train_size_ = as_int(c, "lloyd_train", 1, 10000000);
      iters_ = as_int(c, "lloyd_iters", 0, 100000);
    } else if (kind != "random") {
      throw Error(ErrorKind::Format, "codebook must be 'random' or 'lloyd'");
    }
  }

  // Must run before any parallel section that calls get().
  void prepare(const std::vector<int> &sizes) {
    if (!lloyd_) return;
    for (int n : sizes) {
      if (trained_.count(n)) continue;
      Rng rng(seed_, {kTagLloyd, u(L_), u(n)});
      std::vector<CVec> train;
      train.reserve(static_cast<std::size_t>(train_size_));
      for (int i = 0; i < train_size_; ++i) {
        CVec v = rng.cnormal_vector(L_ - 1);
        train.push_back(v / v.norm());
      }
      trained_[n] = std::make_shared<const Codebook>(lloyd_train(train, n, iters_, derive_seed(seed_, {kTagLloyd, u(n)})).codebook);
    }
  }

  std::shared_ptr<const Codebook> get(int trial, int n_dir) const {
    if (lloyd_) return trained_.at(n_dir);
    return std::make_shared<const Codebook>(
        random_canonical_codebook(L_, n_dir, derive_seed(seed_, {kTagDirBook, u(trial), u(L_), u(n_dir)})));
  }

private:
  std::uint64_t seed_;
  int L_;
  bool lloyd_ = false;
  int train_size_ = 0;
  int iters_ = 0;
  std::map<int, std::shared_ptr<const Codebook>> trained_;
};

struct LinkRun {
  std::vector<double> d;     // chordal distance at t = 1..T
  GrassmannPoint last_hat;
  CVec last_h;
};

struct Tracker {
  Method method = Method::Adaptive;
  MagnitudeWindow window;
  int n_mag = 1;
  std::shared_ptr<const Codebook> dir_cb;
  std::shared_ptr<const Codebook> rvq_cb;
};

// One channel realization, generated once and shared by every method and
// bit setting so comparisons are paired.
struct ChannelPath {
  std::vector<CVec> h;
  std::vector<GrassmannPoint> g;
};

ChannelPath channel_path(int L, double fd_ts, const std::shared_ptr<const ArModel> &model, std::uint64_t key, int horizon) {
  const ChannelSpec spec = ChannelSpec::uniform(L, std::isfinite(fd_ts) ? fd_ts : 0.0, model->order());
  ArChannel ch(spec, model, Rng(key));
  ChannelPath p;
  p.h.reserve(static_cast<std::size_t>(horizon));
  p.g.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    p.h.push_back(ch.step());
    p.g.push_back(normalize(p.h.back()));
  }
  return p;
}

LinkRun track(const Tracker &tk, const ChannelPath &path, std::vector<LoggedMessage> *log = nullptr,
              std::vector<GrassmannPoint> *traj = nullptr) {
  LinkRun run;
  run.d.reserve(path.g.size());
  CodecState state;
  if (tk.method == Method::Adaptive) state = init_all_ones(tk.dir_cb, tk.window);
  if (tk.method == Method::FixedRange) state = init_fixed_range(tk.dir_cb, tk.n_mag);
  for (const GrassmannPoint &g : path.g) {
    if (tk.method == Method::Rvq) {
      run.last_hat = memoryless_rvq(g, *tk.rvq_cb);
    } else {
      const FeedbackMessage msg = encode(state, g);
      if (log) log->push_back({0, msg});
      run.last_hat = state.g_hat;
    }
    if (traj) traj->push_back(run.last_hat);
    run.d.push_back(chordal_distance(run.last_hat, g));
  }
  if (!path.h.empty()) run.last_h = path.h.back();
  return run;
}

double steady_mean_d2(const std::vector<double> &d, int steady_from) {
  double acc = 0.0;
  int n = 0;
  for (std::size_t i = static_cast<std::size_t>(std::max(steady_from, 1) - 1); i < d.size(); ++i) {
    acc += d[i] * d[i];
    ++n;
  }
  return n ? acc / n : std::numeric_limits<double>::quiet_NaN();
}

std::pair<double, double> mean_and_se(const std::vector<double> &x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  if (x.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()))};
}

std::vector<std::shared_ptr<const ArModel>> fit_models(const std::vector<double> &fds, int order) {
  std::vector<std::shared_ptr<const ArModel>> out;
  for (double fd : fds) out.push_back(std::make_shared<const ArModel>(fit_ar(fd, order)));
  return out;
}

double db(double x) { return 10.0 * std::log10(x); }

} // namespace

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw Error(ErrorKind::BadLength, "table row width differs from header");
  rows.push_back(std::move(row));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_db(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_int(long long v) { return std::to_string(v); }

void write_csv(std::ostream &out, const Table &table, const Config &cfg) {
  out << "# grassfeed " << cfg.experiment() << " schema=" << kSchemaVersion << " config_hash=" << cfg.hash() << "\n";
  std::string flat = cfg.canonical();
  for (auto &c : flat)
    if (c == '\n') c = ';';
  out << "# config: " << flat << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto &row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void parallel_for(int n, int workers, const std::function<void(int)> &f) {
  if (n <= 0) return;
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto &t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

const char *to_string(Method m) {
  switch (m) {
  case Method::Adaptive: return "adaptive";
  case Method::FixedRange: return "fixed_range";
  case Method::Rvq: return "rvq";
  }
  return "?";
}

// ---------------------------------------------------------------- fig3

Fig3Result run_fig3(const Config &cfg, const TraceArtifacts &artifacts) {
  const Common cm(cfg);
  const auto fds = cfg.get_real_list("fd_ts");
  if (fds.size() != 1) throw Error(ErrorKind::InvalidArgument, "fig3_track takes a single fd_ts");
  const int T = as_int(cfg, "horizon", 1, 100000000);
  const int steady = as_int(cfg, "steady_from", 1, T);
  const int n_dir = as_int(cfg, "n_dir", 1, 20);
  const int n_mag = as_int(cfg, "n_mag", 0, 20);
  const int rvq_bits = as_int(cfg, "rvq_bits", 1, 20);
  const auto model = std::make_shared<const ArModel>(fit_ar(fds[0], cm.ar_order));
  DirBooks books(cfg, cm.L);
  books.prepare({n_dir});
  const MagnitudeWindow window = adaptive_window(cfg, n_mag);

  std::vector<std::array<LinkRun, 3>> runs(static_cast<std::size_t>(cm.trials));
  std::vector<LoggedMessage> log;
  std::vector<GrassmannPoint> traj;
  parallel_for(cm.trials, cm.workers, [&](int tr) {
    const ChannelPath path = channel_path(cm.L, fds[0], model, derive_seed(cm.seed, {kTagChannel, u(tr), 0}), T);
    Tracker tk;
    tk.window = window;
    tk.n_mag = n_mag;
    tk.dir_cb = books.get(tr, n_dir);
    tk.rvq_cb = std::make_shared<const Codebook>(random_vector_codebook(cm.L, rvq_bits, derive_seed(cm.seed, {kTagRvqBook, u(tr), 0})));
    const bool record = tr == 0 && !artifacts.log_path.empty();
    for (Method m : {Method::Adaptive, Method::FixedRange, Method::Rvq}) {
      tk.method = m;
      const bool rec = record && m == Method::Adaptive;
      runs[static_cast<std::size_t>(tr)][static_cast<int>(m)] =
          track(tk, path, rec ? &log : nullptr, rec ? &traj : nullptr);
    }
  });

  if (!artifacts.log_path.empty()) {
    std::ofstream lf(artifacts.log_path);
    if (!lf) throw Error(ErrorKind::InvalidArgument, "cannot write " + artifacts.log_path.string());
    write_message_log(lf, log);
    save_codebook(*books.get(0, n_dir), artifacts.log_path.string() + ".codebook.json");
    std::ofstream tf(artifacts.log_path.string() + ".trajectory.csv");
    write_trajectory(tf, traj);
  }

  Fig3Result res;
  for (int m = 0; m < 3; ++m) {
    res.mean_d[m].assign(static_cast<std::size_t>(T), 0.0);
    for (const auto &r : runs) {
      for (int t = 0; t < T; ++t) res.mean_d[m][static_cast<std::size_t>(t)] += r[m].d[static_cast<std::size_t>(t)];
      res.steady_d2[m].push_back(steady_mean_d2(r[m].d, steady));
    }
    for (auto &v : res.mean_d[m]) v /= cm.trials;
  }
  return res;
}

Table Fig3Result::table() const {
  Table t;
  t.columns = {"t", "adaptive_d", "fixed_range_d", "rvq_d", "adaptive_d2_db", "fixed_range_d2_db", "rvq_d2_db"};
  for (std::size_t i = 0; i < mean_d[0].size(); ++i) {
    t.add({fmt_int(static_cast<long long>(i + 1)), fmt(mean_d[0][i]), fmt(mean_d[1][i]), fmt(mean_d[2][i]),
           fmt_db(db(mean_d[0][i] * mean_d[0][i])), fmt_db(db(mean_d[1][i] * mean_d[1][i])),
           fmt_db(db(mean_d[2][i] * mean_d[2][i]))});
  }
  return t;
}

// ---------------------------------------------------------------- fig4 / fig5

namespace {

struct SweepPoint {
  std::string section;
  int fd_index;
  Method method;
  int n_dir;
  int n_mag;
};

SweepResult run_sweep(const Config &cfg, const std::vector<SweepPoint> &points) {
  const Common cm(cfg);
  const auto fds = cfg.get_real_list("fd_ts");
  const int T = as_int(cfg, "horizon", 1, 100000000);
  const int steady = as_int(cfg, "steady_from", 1, T);
  const auto models = fit_models(fds, cm.ar_order);
  DirBooks books(cfg, cm.L);
  std::vector<int> sizes;
  for (const auto &p : points) sizes.push_back(p.n_dir);
  books.prepare(sizes);

  std::vector<std::vector<double>> vals(points.size(), std::vector<double>(static_cast<std::size_t>(cm.trials)));
  parallel_for(cm.trials, cm.workers, [&](int tr) {
    std::map<int, std::shared_ptr<const Codebook>> books_here;
    std::map<int, ChannelPath> paths;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto &p = points[i];
      auto &cb = books_here[p.n_dir];
      if (!cb) cb = books.get(tr, p.n_dir);
      auto it = paths.find(p.fd_index);
      if (it == paths.end()) {
        const auto f = static_cast<std::size_t>(p.fd_index);
        it = paths.emplace(p.fd_index, channel_path(cm.L, fds[f], models[f], derive_seed(cm.seed, {kTagChannel, u(tr), f}), T)).first;
      }
      Tracker tk;
      tk.method = p.method;
      tk.window = adaptive_window(cfg, p.n_mag);
      tk.n_mag = p.n_mag;
      tk.dir_cb = cb;
      vals[i][static_cast<std::size_t>(tr)] = steady_mean_d2(track(tk, it->second).d, steady);
    }
  });

  SweepResult res;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [m, se] = mean_and_se(vals[i]);
    res.rows.push_back({points[i].section, fds[static_cast<std::size_t>(points[i].fd_index)], points[i].method,
                        points[i].n_dir, points[i].n_mag, m, se});
  }
  return res;
}

} // namespace

SweepResult run_fig4(const Config &cfg) {
  const int n_dir = as_int(cfg, "n_dir", 1, 20);
  const int total = as_int(cfg, "total_bits", 2, 40);
  const auto mags = int_list(cfg, "mag_bits", 0, 20);
  const auto total_mags = int_list(cfg, "total_mag_bits", 0, 20);
  const int nfd = static_cast<int>(cfg.get_real_list("fd_ts").size());
  std::vector<SweepPoint> pts;
  for (int f = 0; f < nfd; ++f) {
    for (Method m : {Method::Adaptive, Method::FixedRange})
      for (int nm : mags) pts.push_back({"mag", f, m, n_dir, nm});
    for (int nm : total_mags) {
      if (total - nm < 1) throw Error(ErrorKind::InvalidArgument, "total_bits leaves no direction bits");
      pts.push_back({"total", f, Method::Adaptive, total - nm, nm});
    }
  }
  return run_sweep(cfg, pts);
}

SweepResult run_fig5(const Config &cfg) {
  const int n_mag = as_int(cfg, "n_mag", 0, 20);
  const auto dirs = int_list(cfg, "dir_bits", 1, 20);
  const int nfd = static_cast<int>(cfg.get_real_list("fd_ts").size());
  std::vector<SweepPoint> pts;
  for (int f = 0; f < nfd; ++f)
    for (Method m : {Method::Adaptive, Method::FixedRange})
      for (int nd : dirs) pts.push_back({"dir", f, m, nd, n_mag});
  return run_sweep(cfg, pts);
}

Table SweepResult::table() const {
  Table t;
  t.columns = {"section", "fd_ts", "method", "n_dir", "n_mag", "mean_d2", "std_err", "mean_d2_db"};
  for (const auto &r : rows)
    t.add({r.section, fmt(r.fd_ts), to_string(r.method), fmt_int(r.n_dir), fmt_int(r.n_mag), fmt(r.mean_d2),
           fmt(r.std_err), fmt_db(db(r.mean_d2))});
  return t;
}

// ---------------------------------------------------------------- fig6

ApproxResult run_fig6(const Config &cfg) {
  const auto fds = cfg.get_real_list("fd_ts");
  const auto dirs = int_list(cfg, "dir_bits", 1, 20);
  const int n_mag = as_int(cfg, "n_mag", 0, 20);
  std::vector<SweepPoint> pts;
  for (int f = 0; f < static_cast<int>(fds.size()); ++f)
    for (int nd : dirs) pts.push_back({"approx", f, Method::Adaptive, nd, n_mag});
  const SweepResult sw = run_sweep(cfg, pts);
  const int L = as_int(cfg, "L", 3, 64);
  ApproxResult res;
  for (const auto &r : sw.rows) {
    const DistortionApprox a = distortion_approx({clarke_autocorrelation(r.fd_ts, 1), r.n_dir, L});
    res.rows.push_back({r.fd_ts, r.n_dir, 1.0 - r.mean_d2, a.D, a.n_theta, a.n_g});
  }
  return res;
}

Table ApproxResult::table() const {
  Table t;
  t.columns = {"fd_ts", "n_dir", "simulated", "approx", "gap", "n_theta", "n_g"};
  for (const auto &r : rows)
    t.add({fmt(r.fd_ts), fmt_int(r.n_dir), fmt(r.simulated), fmt(r.approx), fmt(std::abs(r.simulated - r.approx)),
           fmt_int(r.n_theta), fmt_int(r.n_g)});
  return t;
}

// ---------------------------------------------------------------- fig7

RefreshResult run_fig7(const Config &cfg) {
  const Common cm(cfg);
  const double rate = cfg.get_real("rate_bps");
  if (!(rate > 0.0)) throw Error(ErrorKind::InvalidArgument, "rate_bps must be positive");
  const auto dopplers = cfg.get_real_list("doppler_hz");
  const auto dirs = int_list(cfg, "dir_bits", 1, 20);
  const int n_mag = as_int(cfg, "n_mag", 0, 20);
  const int T = as_int(cfg, "horizon", 1, 100000000);
  const int steady = as_int(cfg, "steady_from", 1, T);
  // One tick is one bit time; an update of b bits goes out every b ticks.
  std::vector<double> fd_tick;
  for (double f : dopplers) fd_tick.push_back(f / rate);
  const auto models = fit_models(fd_tick, cm.ar_order);
  DirBooks books(cfg, cm.L);
  books.prepare(dirs);

  const std::size_t P = dopplers.size() * dirs.size();
  std::vector<std::vector<double>> vals(P, std::vector<double>(static_cast<std::size_t>(cm.trials)));
  parallel_for(cm.trials, cm.workers, [&](int tr) {
    for (std::size_t f = 0; f < dopplers.size(); ++f) {
      const ChannelPath path = channel_path(cm.L, fd_tick[f], models[f], derive_seed(cm.seed, {kTagChannel, u(tr), f}), T);
      for (std::size_t j = 0; j < dirs.size(); ++j) {
        const int b = dirs[j] + n_mag;
        CodecState st = init_all_ones(books.get(tr, dirs[j]), adaptive_window(cfg, n_mag));
        double acc = 0.0;
        int n = 0;
        for (int t = 1; t <= T; ++t) {
          const GrassmannPoint &g = path.g[static_cast<std::size_t>(t - 1)];
          if (t % b == 0) encode(st, g);
          if (t >= steady) {
            const double d = chordal_distance(st.g_hat, g);
            acc += d * d;
            ++n;
          }
        }
        vals[f * dirs.size() + j][static_cast<std::size_t>(tr)] = acc / n;
      }
    }
  });

  RefreshResult res;
  for (std::size_t f = 0; f < dopplers.size(); ++f)
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      const int b = dirs[j] + n_mag;
      const double bps = b / (b / rate);
      if (std::abs(bps - rate) > 1e-9 * rate) throw Error(ErrorKind::InvalidArgument, "bit budget drifted across the sweep");
      res.rows.push_back({dopplers[f], b, b, bps, mean_and_se(vals[f * dirs.size() + j]).first});
    }
  return res;
}

Table RefreshResult::table() const {
  Table t;
  t.columns = {"doppler_hz", "bits_per_update", "period_ticks", "bits_per_second", "mean_d2", "mean_d2_db"};
  for (const auto &r : rows)
    t.add({fmt(r.doppler_hz), fmt_int(r.bits_per_update), fmt_int(r.period_ticks), fmt(r.bits_per_second), fmt(r.mean_d2),
           fmt_db(db(r.mean_d2))});
  return t;
}

// ---------------------------------------------------------------- fig8

RateResult run_fig8(const Config &cfg) {
  const Common cm(cfg);
  IAConfig ia;
  ia.K = as_int(cfg, "K", 1, 64);
  ia.N = as_int(cfg, "N", 1, 4096);
  ia.d = int_list(cfg, "d", 1, 4096);
  ia.validate();
  if (ia.N < cm.L) throw Error(ErrorKind::InvalidArgument, "N must be at least L");
  const auto snrs = cfg.get_real_list("snr_db");
  const auto fds = cfg.get_real_list("fd_ts");
  const int T = as_int(cfg, "horizon", 1, 100000000);
  const int n_dir = as_int(cfg, "n_dir", 1, 20);
  const int n_mag = as_int(cfg, "n_mag", 0, 20);
  const int rvq_bits = as_int(cfg, "rvq_bits", 1, 24);
  const int max_iters = as_int(cfg, "ia_max_iters", 0, 100000000);
  const double tol = cfg.get_real("ia_tol");
  const auto models = fit_models(fds, cm.ar_order);
  DirBooks books(cfg, cm.L);
  books.prepare({n_dir});
  const char *names[] = {"perfect", "differential", "fixed_range", "rvq"};
  const int K = ia.K;

  // rates[f][method][snr][trial]
  std::vector<std::vector<std::vector<std::vector<double>>>> rates(
      fds.size(), std::vector<std::vector<std::vector<double>>>(
                      4, std::vector<std::vector<double>>(snrs.size(), std::vector<double>(static_cast<std::size_t>(cm.trials)))));

  parallel_for(cm.trials, cm.workers, [&](int tr) {
    for (std::size_t f = 0; f < fds.size(); ++f) {
      std::vector<std::vector<CVec>> truth(static_cast<std::size_t>(K), std::vector<CVec>(static_cast<std::size_t>(K)));
      std::vector<std::vector<std::vector<CVec>>> quant(
          3, std::vector<std::vector<CVec>>(static_cast<std::size_t>(K), std::vector<CVec>(static_cast<std::size_t>(K))));
      for (int k = 0; k < K; ++k) {
        for (int i = 0; i < K; ++i) {
          const ChannelPath path = channel_path(cm.L, fds[f], models[f], derive_seed(cm.seed, {kTagChannel, u(tr), f, u(k), u(i)}), T);
          Tracker tk;
          tk.window = adaptive_window(cfg, n_mag);
          tk.n_mag = n_mag;
          tk.dir_cb = books.get(tr * K * K + k * K + i, n_dir);
          tk.rvq_cb = std::make_shared<const Codebook>(
              random_vector_codebook(cm.L, rvq_bits, derive_seed(cm.seed, {kTagRvqBook, u(tr), u(k), u(i)})));
          int q = 0;
          for (Method m : {Method::Adaptive, Method::FixedRange}) {
            tk.method = m;
            const LinkRun run = track(tk, path);
            if (q == 0) truth[k][i] = run.last_h;
            quant[static_cast<std::size_t>(q)][k][i] = run.last_hat.vec();
            ++q;
            // Receivers know their direct links; only the first run is needed for those.
            if (i == k) break;
          }
          if (i != k) quant[2][k][i] = memoryless_rvq(normalize(truth[k][i]), *tk.rvq_cb).vec();
        }
      }
      const ChannelSet H = channels_from_taps(truth, ia.N);
      const std::uint64_t ia_seed = derive_seed(cm.seed, {kTagIa, u(tr), f});
      std::vector<std::vector<CMat>> precoders;
      precoders.push_back(solve_alignment(H, ia, ia_seed, max_iters, tol).F);
      for (int q = 0; q < 3; ++q) {
        auto taps = quant[static_cast<std::size_t>(q)];
        for (int k = 0; k < K; ++k) taps[k][k] = truth[k][k];
        precoders.push_back(solve_alignment(channels_from_taps(taps, ia.N), ia, ia_seed, max_iters, tol).F);
      }
      for (std::size_t s = 0; s < snrs.size(); ++s) {
        IAConfig c = ia;
        c.P = std::pow(10.0, snrs[s] / 10.0);
        for (std::size_t m = 0; m < 4; ++m) rates[f][m][s][static_cast<std::size_t>(tr)] = sum_rate_capacity(H, precoders[m], c);
      }
    }
  });

  RateResult res;
  std::vector<std::vector<double>> rho(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(K), 1.0));
  for (std::size_t f = 0; f < fds.size(); ++f) {
    const double D = cm.L >= 3 ? distortion_approx({clarke_autocorrelation(fds[f], 1), n_dir, cm.L}).D
                               : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t s = 0; s < snrs.size(); ++s) {
      for (std::size_t m = 0; m < 4; ++m) {
        const auto [mean, se] = mean_and_se(rates[f][m][s]);
        res.rows.push_back({fds[f], snrs[s], names[m], mean, se});
      }
      IAConfig c = ia;
      c.P = std::pow(10.0, snrs[s] / 10.0);
      const double perfect = mean_and_se(rates[f][0][s]).first;
      // The loss bound grows without limit in SNR; a rate cannot go below zero.
      const double analytic = std::isfinite(D) ? std::max(0.0, perfect - rate_loss_bound(c, rho, D)) : D;
      res.rows.push_back({fds[f], snrs[s], "analytic", analytic, 0.0});
    }
  }
  return res;
}

double RateResult::rate(double fd_ts, double snr_db, const std::string &method) const {
  for (const auto &r : rows)
    if (r.fd_ts == fd_ts && r.snr_db == snr_db && r.method == method) return r.mean_rate;
  return std::numeric_limits<double>::quiet_NaN();
}

Table RateResult::table() const {
  Table t;
  t.columns = {"fd_ts", "snr_db", "method", "sum_rate", "std_err"};
  for (const auto &r : rows) t.add({fmt(r.fd_ts), fmt_db(r.snr_db), r.method, fmt(r.mean_rate), fmt(r.std_err)});
  return t;
}

// ---------------------------------------------------------------- table1

PhaseResult run_table1(const Config &cfg) {
  const auto Ls = int_list(cfg, "L_list", 2, 16);
  const auto fds = cfg.get_real_list("fd_ts");
  if (fds.size() != 1) throw Error(ErrorKind::InvalidArgument, "table1_phase takes a single fd_ts");
  const int n_mag = as_int(cfg, "n_mag", 0, 20);
  const double factor = cfg.get_real("floor_factor");
  PhaseResult res;
  for (int L : Ls) {
    Config c = cfg;
    c.set("L", std::to_string(L));
    std::vector<SweepPoint> pts;
    for (int nd = 1; nd <= 2 * L + 3; ++nd) pts.push_back({"phase", 0, Method::Adaptive, nd, n_mag});
    const SweepResult sw = run_sweep(c, pts);
    const double ref = sw.rows.back().mean_d2;
    int first = -1;
    for (std::size_t i = 0; i < sw.rows.size(); ++i) {
      const bool floored = !(sw.rows[i].mean_d2 < factor * ref);
      res.rows.push_back({L, sw.rows[i].n_dir, sw.rows[i].mean_d2, floored});
      if (floored) first = -1;
      else if (first < 0) first = sw.rows[i].n_dir;
    }
    res.min_bits.emplace_back(L, first);
  }
  return res;
}

Table PhaseResult::table() const {
  Table t;
  t.columns = {"L", "n_dir", "mean_d2", "mean_d2_db", "floored", "min_bits"};
  for (const auto &r : rows) {
    int mb = -1;
    for (const auto &[L, b] : min_bits)
      if (L == r.L) mb = b;
    t.add({fmt_int(r.L), fmt_int(r.n_dir), fmt(r.mean_d2), fmt_db(db(r.mean_d2)), r.floored ? "1" : "0", fmt_int(mb)});
  }
  return t;
}

// ---------------------------------------------------------------- dispatch

void run_experiment(const Config &cfg, std::ostream &out, const TraceArtifacts &artifacts) {
  const std::string &e = cfg.experiment();
  Table t;
  if (e == "fig3_track") t = run_fig3(cfg, artifacts).table();
  else if (e == "fig4_magbits") t = run_fig4(cfg).table();
  else if (e == "fig5_dirbits") t = run_fig5(cfg).table();
  else if (e == "fig6_approx") t = run_fig6(cfg).table();
  else if (e == "fig7_refresh") t = run_fig7(cfg).table();
  else if (e == "fig8_ia") t = run_fig8(cfg).table();
  else if (e == "table1_phase") t = run_table1(cfg).table();
  else throw Error(ErrorKind::InvalidArgument, "unknown experiment '" + e + "'");
  write_csv(out, t, cfg);
}

CodecState initial_codec_state(const Config &cfg, std::shared_ptr<const Codebook> dir_cb) {
  return init_all_ones(std::move(dir_cb), adaptive_window(cfg, as_int(cfg, "n_mag", 0, 20)));
}

void write_trajectory(std::ostream &out, const std::vector<GrassmannPoint> &traj) {
  out << "t";
  const Eigen::Index L = traj.empty() ? 0 : traj.front().dim();
  for (Eigen::Index l = 0; l < L; ++l) out << ",re" << l << ",im" << l;
  out << "\n";
  char buf[64];
  for (std::size_t t = 0; t < traj.size(); ++t) {
    out << (t + 1);
    for (Eigen::Index l = 0; l < L; ++l) {
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", traj[t][l].real(), traj[t][l].imag());
      out << buf;
    }
    out << "\n";
  }
}

} // namespace grassfeed
