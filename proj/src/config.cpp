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

#include "grassfeed/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "grassfeed/common.hpp"

namespace grassfeed {

namespace {

struct Default {
  const char *key;
  ValueType type;
  const char *value;
};

using Preset = std::vector<Default>;

const Preset &common() {
  static const Preset p{
      {"seed", ValueType::U64, "1"},
      {"trials", ValueType::Int, "200"},
      {"parallel", ValueType::Int, "1"},
  };
  return p;
}

const Preset &codec_keys() {
  static const Preset p{
      {"L", ValueType::Int, "3"},
      {"ar_order", ValueType::Int, "200"},
      {"codebook", ValueType::Text, "random"},
      {"lloyd_train", ValueType::Int, "20000"},
      {"lloyd_iters", ValueType::Int, "50"},
      {"window_rule", ValueType::Text, "level"},
      {"tau", ValueType::Real, "5"},
      {"alpha", ValueType::Real, "0.5"},
      {"beta", ValueType::Real, "2"},
  };
  return p;
}

const std::map<std::string, Preset> &presets() {
  static const std::map<std::string, Preset> p{
      {"fig3_track",
       {{"fd_ts", ValueType::RealList, "0.005"},
        {"horizon", ValueType::Int, "100"},
        {"steady_from", ValueType::Int, "20"},
        {"n_dir", ValueType::Int, "6"},
        {"n_mag", ValueType::Int, "2"},
        {"rvq_bits", ValueType::Int, "8"}}},
      {"fig4_magbits",
       {{"fd_ts", ValueType::RealList, "0.001,0.002,0.005,0.01,0.02,0.05"},
        {"horizon", ValueType::Int, "300"},
        {"steady_from", ValueType::Int, "100"},
        {"n_dir", ValueType::Int, "6"},
        {"mag_bits", ValueType::IntList, "1,2,3,4,5,6,7,8,9,10"},
        {"total_bits", ValueType::Int, "8"},
        {"total_mag_bits", ValueType::IntList, "1,2,3,4"}}},
      {"fig5_dirbits",
       {{"fd_ts", ValueType::RealList, "0.001,0.002,0.005,0.01,0.02,0.05"},
        {"horizon", ValueType::Int, "300"},
        {"steady_from", ValueType::Int, "100"},
        {"dir_bits", ValueType::IntList, "1,2,3,4,5,6,7,8,9,10"},
        {"n_mag", ValueType::Int, "1"}}},
      {"fig6_approx",
       {{"fd_ts", ValueType::RealList, "0.001,0.002,0.005,0.01,0.02,0.05"},
        {"horizon", ValueType::Int, "300"},
        {"steady_from", ValueType::Int, "100"},
        {"dir_bits", ValueType::IntList, "4,6,8,10"},
        {"n_mag", ValueType::Int, "1"}}},
      {"fig7_refresh",
       {{"rate_bps", ValueType::Real, "5000"},
        {"doppler_hz", ValueType::RealList, "5,20,50,100"},
        {"horizon", ValueType::Int, "3000"},
        {"steady_from", ValueType::Int, "1000"},
        {"dir_bits", ValueType::IntList, "1,2,3,4,5,6,7,8,9,10"},
        {"n_mag", ValueType::Int, "1"}}},
      {"fig8_ia",
       {{"K", ValueType::Int, "3"},
        {"N", ValueType::Int, "15"},
        {"d", ValueType::IntList, "8,7,7"},
        {"snr_db", ValueType::RealList, "0,10,20,25,30,35,40,50"},
        {"fd_ts", ValueType::RealList, "0.003,0.01,0.05"},
        {"horizon", ValueType::Int, "100"},
        {"n_dir", ValueType::Int, "7"},
        {"n_mag", ValueType::Int, "3"},
        {"rvq_bits", ValueType::Int, "10"},
        {"ia_max_iters", ValueType::Int, "2000"},
        {"ia_tol", ValueType::Real, "1e-8"}}},
      {"table1_phase",
       {{"L_list", ValueType::IntList, "2,3"},
        {"fd_ts", ValueType::RealList, "0.0001"},
        {"horizon", ValueType::Int, "600"},
        {"steady_from", ValueType::Int, "300"},
        {"n_mag", ValueType::Int, "1"},
        {"floor_factor", ValueType::Real, "10"}}},
  };
  return p;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

long long parse_int(const std::string &key, const std::string &v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw Error(ErrorKind::Format, "key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string &key, const std::string &v) {
  std::size_t pos = 0;
  std::uint64_t x = 0;
  try {
    if (!v.empty() && v[0] != '-') x = std::stoull(v, &pos, 0);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size())
    throw Error(ErrorKind::Format, "key '" + key + "': expected an unsigned 64-bit integer, got '" + v + "'");
  return x;
}

double parse_real(const std::string &key, const std::string &v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw Error(ErrorKind::Format, "key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

void check_value(const std::string &key, ValueType type, const std::string &v) {
  switch (type) {
  case ValueType::Int: parse_int(key, v); break;
  case ValueType::U64: parse_u64(key, v); break;
  case ValueType::Real: parse_real(key, v); break;
  case ValueType::IntList:
    for (const auto &item : split_list(v)) parse_int(key, item);
    if (split_list(v).empty()) throw Error(ErrorKind::Format, "key '" + key + "': empty list");
    break;
  case ValueType::RealList:
    for (const auto &item : split_list(v)) parse_real(key, item);
    if (split_list(v).empty()) throw Error(ErrorKind::Format, "key '" + key + "': empty list");
    break;
  case ValueType::Text:
    if (v.empty()) throw Error(ErrorKind::Format, "key '" + key + "': empty value");
    break;
  }
}

} // namespace

Config Config::preset(const std::string &experiment) {
  const auto it = presets().find(experiment);
  if (it == presets().end()) throw Error(ErrorKind::InvalidArgument, "unknown experiment '" + experiment + "'");
  Config c;
  c.experiment_ = experiment;
  for (const auto &d : common()) c.values_[d.key] = {d.type, d.value};
  for (const auto &d : codec_keys()) c.values_[d.key] = {d.type, d.value};
  for (const auto &d : it->second) c.values_[d.key] = {d.type, d.value};
  if (experiment == "fig6_approx") c.values_["ar_order"].value = "1";
  if (experiment == "fig8_ia") c.values_["trials"].value = "50";
  if (experiment == "table1_phase") c.values_["trials"].value = "100";
  return c;
}

std::vector<std::string> Config::experiments() {
  std::vector<std::string> out;
  for (const auto &[k, v] : presets()) out.push_back(k);
  return out;
}

void Config::set(const std::string &key, const std::string &value) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    std::string known;
    for (const auto &[k, v] : values_) known += (known.empty() ? "" : ", ") + k;
    throw Error(ErrorKind::Format, "unknown key '" + key + "' for " + experiment_ + " (known: " + known + ")");
  }
  const std::string v = trim(value);
  check_value(key, it->second.type, v);
  it->second.value = v;
}

void Config::merge_text(const std::string &text, const std::string &origin) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Format, origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "experiment") {
      if (value != experiment_)
        throw Error(ErrorKind::Format, origin + ": config is for '" + value + "', not '" + experiment_ + "'");
      continue;
    }
    try {
      set(key, value);
    } catch (const Error &e) {
      throw Error(ErrorKind::Format, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void Config::merge_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str(), path.string());
}

const Config::Entry &Config::entry(const std::string &key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorKind::InvalidArgument, "config has no key '" + key + "'");
  return it->second;
}

long long Config::get_int(const std::string &key) const { return parse_int(key, entry(key).value); }
std::uint64_t Config::get_u64(const std::string &key) const { return parse_u64(key, entry(key).value); }
double Config::get_real(const std::string &key) const { return parse_real(key, entry(key).value); }

std::vector<long long> Config::get_int_list(const std::string &key) const {
  std::vector<long long> out;
  for (const auto &item : split_list(entry(key).value)) out.push_back(parse_int(key, item));
  return out;
}

std::vector<double> Config::get_real_list(const std::string &key) const {
  std::vector<double> out;
  for (const auto &item : split_list(entry(key).value)) out.push_back(parse_real(key, item));
  return out;
}

const std::string &Config::get_text(const std::string &key) const { return entry(key).value; }

std::string Config::canonical() const {
  std::string out = "experiment=" + experiment_ + "\n";
  for (const auto &[k, e] : values_)
    if (k != "parallel") out += k + "=" + e.value + "\n";
  return out;
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace grassfeed
