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
#include <map>
#include <string>
#include <vector>

namespace grassfeed {

enum class ValueType { Int, U64, Real, IntList, RealList, Text };

/// Resolved experiment configuration: the experiment's preset overlaid with
/// a key=value file and command-line overrides. Keys outside the preset's
/// schema are rejected.
///
/// File syntax: one `key = value` per line, `#` starts a comment, lists are
/// comma separated.
class Config {
public:
  /// Preset for an experiment id; throws InvalidArgument for unknown ids.
  static Config preset(const std::string &experiment);
  static std::vector<std::string> experiments();

  void merge_text(const std::string &text, const std::string &origin = "<text>");
  void merge_file(const std::filesystem::path &path);
  /// Sets one key, validating the value against its declared type.
  void set(const std::string &key, const std::string &value);

  const std::string &experiment() const { return experiment_; }
  bool has(const std::string &key) const { return values_.count(key) != 0; }
  long long get_int(const std::string &key) const;
  std::uint64_t get_u64(const std::string &key) const;
  double get_real(const std::string &key) const;
  std::vector<long long> get_int_list(const std::string &key) const;
  std::vector<double> get_real_list(const std::string &key) const;
  const std::string &get_text(const std::string &key) const;

  /// "key=value" lines in key order; `parallel` is excluded because it never
  /// changes results.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;

private:
  struct Entry {
    ValueType type;
    std::string value;
  };
  const Entry &entry(const std::string &key) const;

  std::string experiment_;
  std::map<std::string, Entry> values_;
};

} // namespace grassfeed
