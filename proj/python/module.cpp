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

#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grassfeed/analysis.hpp"
#include "grassfeed/channel.hpp"
#include "grassfeed/codebook.hpp"
#include "grassfeed/config.hpp"
#include "grassfeed/experiments.hpp"
#include "grassfeed/feedback.hpp"
#include "grassfeed/grassmann.hpp"
#include "grassfeed/ia.hpp"

namespace py = pybind11;
using namespace grassfeed;

namespace {

using Taps = std::vector<std::vector<CVec>>;

std::string run_to_csv(const std::string &experiment, const std::map<std::string, std::string> &overrides,
                       std::uint64_t seed, int trials, int parallel) {
  Config cfg = Config::preset(experiment);
  for (const auto &[k, v] : overrides) cfg.set(k, v);
  cfg.set("seed", std::to_string(seed));
  if (trials > 0) cfg.set("trials", std::to_string(trials));
  cfg.set("parallel", std::to_string(parallel));
  std::ostringstream out;
  {
    py::gil_scoped_release release;
    run_experiment(cfg, out);
  }
  return out.str();
}

py::dict solve(const Taps &taps, int N, const std::vector<int> &d, std::uint64_t seed, int max_iters, double tol) {
  IAConfig cfg;
  cfg.K = static_cast<int>(taps.size());
  cfg.N = N;
  cfg.d = d;
  cfg.validate();
  const ChannelSet H = channels_from_taps(taps, N);
  const IASolution s = solve_alignment(H, cfg, seed, max_iters, tol);
  py::dict r;
  r["F"] = s.F;
  r["W"] = s.W;
  r["history"] = s.history;
  r["iterations"] = s.iterations;
  r["converged"] = s.converged;
  return r;
}

double capacity(const Taps &taps, const std::vector<CMat> &F, int N, const std::vector<int> &d, double snr_db) {
  IAConfig cfg;
  cfg.K = static_cast<int>(taps.size());
  cfg.N = N;
  cfg.d = d;
  cfg.P = std::pow(10.0, snr_db / 10.0);
  cfg.validate();
  return sum_rate_capacity(channels_from_taps(taps, N), F, cfg);
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Differential Grassmannian CSI feedback: geometry, channel, codec and experiments";

  py::register_exception<Error>(m, "GrassfeedError", PyExc_ValueError);

  // Grassmann points cross the boundary as plain complex vectors.
  m.def("normalize", [](const CVec &h) { return normalize(h).vec(); }, py::arg("h"));
  m.def("chordal_distance", [](const CVec &x, const CVec &y) { return chordal_distance(normalize(x), normalize(y)); },
        py::arg("x"), py::arg("y"));
  m.def(
      "log_map",
      [](const CVec &base, const CVec &target) {
        const TangentVector t = log_map(GrassmannPoint::from_unit(base), GrassmannPoint::from_unit(target));
        return py::make_tuple(t.mag, t.dir);
      },
      py::arg("base"), py::arg("target"), "returns (magnitude, unit direction)");
  m.def(
      "exp_map",
      [](const CVec &base, const CVec &dir, double mag, double ell) {
        return geodesic(GrassmannPoint::from_unit(base), dir, mag, ell).vec();
      },
      py::arg("base"), py::arg("dir"), py::arg("mag"), py::arg("ell") = 1.0);
  m.def("householder", [](const CVec &x) { return householder_rotation(GrassmannPoint::from_unit(x)); }, py::arg("x"));

  m.def("clarke_autocorrelation", &clarke_autocorrelation, py::arg("fd_ts"), py::arg("lag"));
  m.def(
      "fit_ar",
      [](double fd_ts, int order) {
        const ArModel a = fit_ar(fd_ts, order);
        return py::make_tuple(a.coeffs, a.noise_var);
      },
      py::arg("fd_ts"), py::arg("order"), "returns (coefficients, innovation variance)");
  m.def(
      "channel_path",
      [](int L, double fd_ts, int order, int steps, std::uint64_t seed) {
        ArChannel ch(ChannelSpec::uniform(L, fd_ts, order), Rng(seed));
        CMat out(steps, L);
        for (int t = 0; t < steps; ++t) out.row(t) = ch.step().transpose();
        return out;
      },
      py::arg("L"), py::arg("fd_ts"), py::arg("order"), py::arg("steps"), py::arg("seed"),
      "steps x L array of tap vectors from a uniform power-delay profile");
  m.def("frequency_response", &frequency_response, py::arg("h"), py::arg("N"));

  py::class_<Codebook, std::shared_ptr<Codebook>>(m, "Codebook")
      .def_static("random_canonical", [](int L, int bits, std::uint64_t seed) { return std::make_shared<Codebook>(random_canonical_codebook(L, bits, seed)); },
                  py::arg("L"), py::arg("bits"), py::arg("seed"))
      .def_static("from_json", [](const std::string &s) { return std::make_shared<Codebook>(codebook_from_json(s)); })
      .def("to_json", &codebook_to_json)
      .def_readonly("L", &Codebook::L)
      .def_readonly("bits", &Codebook::n_bits)
      .def_readonly("words", &Codebook::words)
      .def("__len__", &Codebook::size);

  py::class_<CodecState>(m, "Codec")
      .def(py::init([](std::shared_ptr<Codebook> cb, int mag_bits, bool adaptive) {
             return adaptive ? init_all_ones(cb, MagnitudeWindow::adaptive(mag_bits)) : init_fixed_range(cb, mag_bits);
           }),
           py::arg("codebook"), py::arg("mag_bits"), py::arg("adaptive") = true)
      .def(
          "encode",
          [](CodecState &s, const CVec &h) {
            const FeedbackMessage msg = encode(s, normalize(h));
            return py::make_tuple(msg.t, msg.mag_index, msg.dir_index);
          },
          py::arg("h"), "quantize one observation; returns the message (t, mag_index, dir_index)")
      .def(
          "decode",
          [](CodecState &s, std::int64_t t, int mag, int dir) { return decode(s, FeedbackMessage{t, mag, dir}).vec(); },
          py::arg("t"), py::arg("mag_index"), py::arg("dir_index"))
      .def("synchronized_with", &CodecState::synchronized_with)
      .def("copy", [](const CodecState &s) { return s; })
      .def_property_readonly("estimate", [](const CodecState &s) { return s.g_hat.vec(); })
      .def_readonly("t", &CodecState::t)
      .def_readonly("reinit_count", &CodecState::reinit_count)
      .def_property_readonly("window", [](const CodecState &s) { return py::make_tuple(s.window.lower(), s.window.upper(), s.window.e_avg); });

  m.def("solve_alignment", &solve, py::arg("taps"), py::arg("N"), py::arg("d"), py::arg("seed"), py::arg("max_iters") = 5000,
        py::arg("tol") = 1e-12, "taps[k][i] is the tap vector from transmitter i to receiver k");
  m.def("sum_rate", &capacity, py::arg("taps"), py::arg("F"), py::arg("N"), py::arg("d"), py::arg("snr_db"));

  m.def(
      "distortion_approx",
      [](double eta, int n_dir, int L) {
        const DistortionApprox a = distortion_approx(DistortionParams{eta, n_dir, L});
        return py::make_tuple(a.D, a.n_theta, a.n_g);
      },
      py::arg("eta"), py::arg("n_dir"), py::arg("L"), "returns (accuracy, theta bits, Grassmannian bits)");
  m.def(
      "paired_t_test",
      [](const std::vector<double> &a, const std::vector<double> &b) {
        const PairedTest t = paired_t_test(a, b);
        return py::make_tuple(t.mean_diff, t.t, t.p_value);
      },
      py::arg("a"), py::arg("b"), "one-sided test of mean(a - b) > 0; returns (mean difference, t, p)");

  m.def("experiments", &Config::experiments);
  m.def("run_experiment", &run_to_csv, py::arg("experiment"), py::arg("overrides") = std::map<std::string, std::string>{},
        py::arg("seed") = 1, py::arg("trials") = 0, py::arg("parallel") = 1, "runs a preset and returns the results CSV text");
}
