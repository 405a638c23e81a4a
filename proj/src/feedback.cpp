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

#include "grassfeed/feedback.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace grassfeed {

namespace {

bool same_window(const MagnitudeWindow &a, const MagnitudeWindow &b) {
  return a.e_min == b.e_min && a.e_max == b.e_max && a.e_avg == b.e_avg && a.tau == b.tau && a.alpha == b.alpha &&
         a.beta == b.beta && a.n_bits == b.n_bits && a.rule == b.rule;
}

void check_codebook(const std::shared_ptr<const Codebook> &cb, const MagnitudeWindow &w) {
  if (!cb) throw Error(ErrorKind::InvalidArgument, "codec needs a direction codebook");
  if (cb->kind != CodebookKind::CanonicalDirection) throw Error(ErrorKind::InvalidArgument, "codec needs a canonical codebook");
  if (static_cast<std::size_t>(w.levels()) * cb->size() < 2)
    throw Error(ErrorKind::InvalidArgument, "codec needs at least one non-reserved message");
  w.validate();
}

CodecState make_state(std::shared_ptr<const Codebook> dir_cb, const MagnitudeWindow &window, GrassmannPoint start,
                      bool adaptive) {
  check_codebook(dir_cb, window);
  CodecState s;
  s.g_hat = std::move(start);
  s.window = window;
  s.initial_window = window;
  s.dir_cb = std::move(dir_cb);
  s.adaptive = adaptive;
  if (s.g_hat.dim() != s.dir_cb->L) throw Error(ErrorKind::BadLength, "initial point and codebook dimensions differ");
  return s;
}

void advance(CodecState &s, const FeedbackMessage &msg) {
  if (s.is_reinit(msg)) {
    s.g_hat = all_ones_point(s.dim());
    s.window = s.initial_window;
    ++s.reinit_count;
  } else {
    const TangentVector q = dequantize(s, msg);
    s.g_hat = geodesic(s.g_hat, q.dir, q.mag);
    if (s.adaptive) s.window = update_window(s.window, q.mag);
  }
  s.t = msg.t;
}

} // namespace

bool CodecState::synchronized_with(const CodecState &o) const {
  return g_hat.same_representative(o.g_hat) && same_window(window, o.window) && t == o.t && adaptive == o.adaptive &&
         reinit_count == o.reinit_count;
}

FeedbackMessage CodecState::reinit_message() const {
  return {t + 1, window.levels() - 1, static_cast<int>(dir_cb->size()) - 1};
}

bool CodecState::is_reinit(const FeedbackMessage &m) const {
  return m.mag_index == window.levels() - 1 && m.dir_index == static_cast<int>(dir_cb->size()) - 1;
}

GrassmannPoint all_ones_point(int L) {
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "L must be positive");
  return normalize(CVec::Ones(L));
}

CodecState init_all_ones(std::shared_ptr<const Codebook> dir_cb, const MagnitudeWindow &window) {
  const int L = dir_cb ? dir_cb->L : 0;
  return make_state(std::move(dir_cb), window, all_ones_point(L), true);
}

CodecState init_fixed_range(std::shared_ptr<const Codebook> dir_cb, int n_mag_bits) {
  const int L = dir_cb ? dir_cb->L : 0;
  return make_state(std::move(dir_cb), MagnitudeWindow::fixed_range(n_mag_bits), all_ones_point(L), false);
}

std::pair<CodecState, int> init_memoryless(std::shared_ptr<const Codebook> dir_cb, const MagnitudeWindow &window,
                                           const Codebook &init_cb, const GrassmannPoint &first) {
  const int idx = nearest_word(first, init_cb);
  return {init_from_codeword(std::move(dir_cb), window, init_cb, idx), idx};
}

CodecState init_from_codeword(std::shared_ptr<const Codebook> dir_cb, const MagnitudeWindow &window,
                              const Codebook &init_cb, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= init_cb.size())
    throw Error(ErrorKind::InvalidArgument, "initialization index out of range");
  return make_state(std::move(dir_cb), window, normalize(init_cb[static_cast<std::size_t>(index)]), true);
}

TangentVector dequantize(const CodecState &state, const FeedbackMessage &msg) {
  const Codebook &cb = *state.dir_cb;
  if (msg.mag_index < 0 || msg.mag_index >= state.window.levels() || msg.dir_index < 0 ||
      static_cast<std::size_t>(msg.dir_index) >= cb.size())
    throw Error(ErrorKind::InvalidArgument, "message index out of range");
  const HouseholderRotation U(state.g_hat);
  return {state.g_hat, U.apply(cb[static_cast<std::size_t>(msg.dir_index)]), state.window.level(msg.mag_index)};
}

FeedbackMessage encode(CodecState &state, const GrassmannPoint &g) {
  if (g.dim() != state.g_hat.dim()) throw Error(ErrorKind::BadLength, "encode: channel dimension mismatch");
  TangentVector e;
  try {
    e = log_map(state.g_hat, g);
  } catch (const Error &err) {
    if (err.kind() != ErrorKind::OrthogonalPoints) throw;
    const FeedbackMessage msg = state.reinit_message();
    advance(state, msg);
    return msg;
  }
  const MagnitudeQuantization mq = quantize_magnitude(e.mag, state.window);
  const int reserved_dir = static_cast<int>(state.dir_cb->size()) - 1;
  const int excluded = mq.index == state.window.levels() - 1 ? reserved_dir : -1;
  const DirectionQuantization dq = quantize_direction(state.g_hat, g, mq.value, *state.dir_cb, excluded);
  const FeedbackMessage msg{state.t + 1, mq.index, dq.index};
  advance(state, msg);
  return msg;
}

const GrassmannPoint &decode(CodecState &state, const FeedbackMessage &msg) {
  if (msg.t != state.t + 1)
    throw Error(ErrorKind::OutOfOrder, "expected message t=" + std::to_string(state.t + 1) + ", got t=" +
                                           std::to_string(msg.t));
  advance(state, msg);
  return state.g_hat;
}

GrassmannPoint memoryless_rvq(const GrassmannPoint &g, const Codebook &cb) {
  return normalize(cb[static_cast<std::size_t>(nearest_word(g, cb))]);
}

void write_message_log(std::ostream &out, const std::vector<LoggedMessage> &log) {
  out << "t,link_id,mag_index,dir_index\n";
  for (const auto &m : log) out << m.msg.t << ',' << m.link_id << ',' << m.msg.mag_index << ',' << m.msg.dir_index << '\n';
}

std::vector<LoggedMessage> read_message_log(std::istream &in) {
  std::vector<LoggedMessage> out;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("t,", 0) == 0) continue;
    }
    std::istringstream ss(line);
    LoggedMessage m;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ss >> m.msg.t >> c1 >> m.link_id >> c2 >> m.msg.mag_index >> c3 >> m.msg.dir_index) || c1 != ',' ||
        c2 != ',' || c3 != ',')
      throw Error(ErrorKind::Format, "bad message log line " + std::to_string(lineno));
    out.push_back(m);
  }
  return out;
}

std::vector<GrassmannPoint> replay(CodecState state, const std::vector<FeedbackMessage> &messages) {
  std::vector<GrassmannPoint> out;
  out.reserve(messages.size());
  for (const auto &m : messages) out.push_back(decode(state, m));
  return out;
}

} // namespace grassfeed
