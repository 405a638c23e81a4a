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
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "grassfeed/codebook.hpp"
#include "grassfeed/grassmann.hpp"

namespace grassfeed {

/// One quantized tangent update: N_mag + N_dir bits on the wire.
/// The all-ones index pair is reserved as the reinitialization message.
struct FeedbackMessage {
  std::int64_t t = 0;
  int mag_index = 0;
  int dir_index = 0;

  bool operator==(const FeedbackMessage &) const = default;
};

/// Synchronized codec state; one instance per directional link and side.
struct CodecState {
  GrassmannPoint g_hat;                 // g^[t-1]
  MagnitudeWindow window;
  MagnitudeWindow initial_window;       // restored on reinitialization
  std::shared_ptr<const Codebook> dir_cb;
  std::int64_t t = 0;
  bool adaptive = true;                 // false: fixed-range baseline, window never moves
  std::int64_t reinit_count = 0;

  /// Bitwise comparison of everything both sides must agree on.
  bool synchronized_with(const CodecState &other) const;
  int dim() const { return static_cast<int>(g_hat.dim()); }
  FeedbackMessage reinit_message() const;
  bool is_reinit(const FeedbackMessage &m) const;
};

/// (1/sqrt(L)) [1, ..., 1].
GrassmannPoint all_ones_point(int L);

CodecState init_all_ones(std::shared_ptr<const Codebook> dir_cb, const MagnitudeWindow &window);

/// Fixed-range baseline: window uniform on [0, 1], never updated.
CodecState init_fixed_range(std::shared_ptr<const Codebook> dir_cb, int n_mag_bits);

/// Receiver side of memoryless initialization: g^[0] is the chordal-nearest
/// word of `init_cb` to the first observation. Returns the state and the
/// index sent out of band.
std::pair<CodecState, int> init_memoryless(std::shared_ptr<const Codebook> dir_cb, const MagnitudeWindow &window,
                                           const Codebook &init_cb, const GrassmannPoint &first);
/// Transmitter side of memoryless initialization from the received index.
CodecState init_from_codeword(std::shared_ptr<const Codebook> dir_cb, const MagnitudeWindow &window,
                              const Codebook &init_cb, int index);

/// Receiver step: tangent from g^[t-1] to g, magnitude then direction
/// quantization, and the same state advance the decoder performs. If g is
/// orthogonal to g^[t-1] a reinitialization message is emitted instead.
FeedbackMessage encode(CodecState &state, const GrassmannPoint &g);

/// Transmitter step. Throws OutOfOrder unless msg.t == state.t + 1.
const GrassmannPoint &decode(CodecState &state, const FeedbackMessage &msg);

/// Quantized tangent (magnitude value, rotated direction) a message denotes
/// at the current state.
TangentVector dequantize(const CodecState &state, const FeedbackMessage &msg);

/// Memoryless RVQ: chordal-nearest codeword.
GrassmannPoint memoryless_rvq(const GrassmannPoint &g, const Codebook &cb);

struct LoggedMessage {
  int link_id = 0;
  FeedbackMessage msg;
};

/// CSV "t,link_id,mag_index,dir_index" with a header row.
void write_message_log(std::ostream &out, const std::vector<LoggedMessage> &log);
std::vector<LoggedMessage> read_message_log(std::istream &in);

/// Re-decodes a message stream from `initial`; returns g^[t] after each message.
std::vector<GrassmannPoint> replay(CodecState initial, const std::vector<FeedbackMessage> &messages);

} // namespace grassfeed
