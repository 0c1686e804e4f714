// Copyright 2026 The rabicat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rabicat/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace rabicat {

ConfigError::ConfigError(const std::string& message, int line, std::string field)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      field_(std::move(field)) {}

const std::vector<std::string>& supported_observables() {
  static const std::vector<std::string> names = {"avg_x",   "avg_p",  "sigma_x", "sigma_y",    "sigma_z",
                                                 "parity",  "overlap", "purity", "left_weight"};
  return names;
}

const std::vector<std::string>& default_observables() {
  static const std::vector<std::string> names = {"avg_x", "avg_p", "sigma_x", "sigma_z", "parity", "overlap", "purity"};
  return names;
}

void RunConfig::validate() const {
  auto wrap = [](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(field) + ": " + e.what(), 0, field);
    }
  };
  wrap("model", [&] { model.validate(); });
  wrap("fock", [&] {
    if (fock.n_max < 0) throw std::invalid_argument("n_max must be >= 0 (0 selects 4R)");
    resolved_fock().validate();
  });
  wrap("plan", [&] { plan.validate(); });
  const auto& ok = supported_observables();
  for (const auto& o : outputs)
    if (std::find(ok.begin(), ok.end(), o) == ok.end())
      throw ConfigError("unsupported observable '" + o + "'", 0, "outputs");
}

FockConfig RunConfig::resolved_fock() const {
  if (fock.n_max > 0) return fock;
  FockConfig f = FockConfig::for_size(model.R, fock.tail_tol);
  return f;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

enum class Section { Any, Model, Fock, Plan };

struct KeyInfo {
  std::string canonical;
  Section section;
};

const std::map<std::string, KeyInfo>& key_table() {
  static const std::map<std::string, KeyInfo> table = {
      {"R", {"R", Section::Model}},
      {"lambda", {"lambda", Section::Model}},
      {"delta", {"delta", Section::Model}},
      {"mu", {"mu", Section::Model}},
      {"gamma", {"gamma", Section::Model}},
      {"n_max", {"n_max", Section::Fock}},
      {"nmax", {"n_max", Section::Fock}},
      {"tail_tol", {"tail_tol", Section::Fock}},
      {"method", {"method", Section::Plan}},
      {"dt", {"dt", Section::Plan}},
      {"t_max", {"t_max", Section::Plan}},
      {"tmax", {"t_max", Section::Plan}},
      {"krylov_dim", {"krylov_dim", Section::Plan}},
      {"step_tol", {"step_tol", Section::Plan}},
      {"outputs", {"outputs", Section::Any}},
  };
  return table;
}

double parse_double(const std::string& key, const std::string& text, int line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw ConfigError("value '" + text + "' for " + key + " is not a finite number", line, key);
  return v;
}

int parse_int(const std::string& key, const std::string& text, int line) {
  int v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ConfigError("value '" + text + "' for " + key + " is not an integer", line, key);
  return v;
}

std::vector<std::string> split_outputs(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text + ";") {
    if (c == ';' || c == ' ' || c == '\t' || c == '|') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
  if (value.empty()) throw ConfigError("empty value for " + key, line, key);
  if (key == "R") cfg.model.R = parse_double(key, value, line);
  else if (key == "lambda") cfg.model.lambda = parse_double(key, value, line);
  else if (key == "delta") cfg.model.delta = parse_double(key, value, line);
  else if (key == "mu") cfg.model.mu = parse_double(key, value, line);
  else if (key == "gamma") cfg.model.gamma = parse_double(key, value, line);
  else if (key == "n_max") cfg.fock.n_max = parse_int(key, value, line);
  else if (key == "tail_tol") cfg.fock.tail_tol = parse_double(key, value, line);
  else if (key == "method") {
    try {
      cfg.plan.method = parse_method(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line, key);
    }
  } else if (key == "dt") cfg.plan.dt = parse_double(key, value, line);
  else if (key == "t_max") cfg.plan.t_max = parse_double(key, value, line);
  else if (key == "krylov_dim") cfg.plan.krylov_dim = parse_int(key, value, line);
  else if (key == "step_tol") cfg.plan.step_tol = parse_double(key, value, line);
  else if (key == "outputs") cfg.outputs = split_outputs(value);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::map<std::string, std::string>& overrides) {
  RunConfig cfg;
  cfg.outputs = default_observables();
  std::set<std::string> seen;
  Section section = Section::Any;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", line_no);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "model") section = Section::Model;
      else if (name == "fock") section = Section::Fock;
      else if (name == "plan") section = Section::Plan;
      else throw ConfigError("unknown section [" + name + "]", line_no);
      continue;
    }
    std::stringstream items(line);
    std::string item;
    while (std::getline(items, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + item + "'", line_no);
      const std::string key = trim(item.substr(0, eq));
      const std::string value = trim(item.substr(eq + 1));
      const auto it = key_table().find(key);
      if (it == key_table().end()) throw ConfigError("unknown key '" + key + "'", line_no, key);
      const KeyInfo& info = it->second;
      if (section != Section::Any && info.section != Section::Any && info.section != section)
        throw ConfigError("key '" + key + "' does not belong to this section", line_no, key);
      if (!seen.insert(info.canonical).second)
        throw ConfigError("duplicate key '" + key + "'", line_no, key);
      apply(cfg, info.canonical, value, line_no);
    }
  }

  for (const auto& [key, value] : overrides) {
    const auto it = key_table().find(key);
    if (it == key_table().end()) throw ConfigError("unknown override '" + key + "'", 0, key);
    apply(cfg, it->second.canonical, trim(value), 0);
    seen.insert(it->second.canonical);
  }

  if (!seen.count("R")) throw ConfigError("missing required field R", 0, "R");
  cfg.validate();
  return cfg;
}

std::string to_text(const RunConfig& config) {
  std::ostringstream os;
  os.precision(17);
  os << "[model]\n"
     << "R = " << config.model.R << "\n"
     << "lambda = " << config.model.lambda << "\n"
     << "delta = " << config.model.delta << "\n"
     << "mu = " << config.model.mu << "\n"
     << "gamma = " << config.model.gamma << "\n"
     << "[fock]\n"
     << "n_max = " << config.fock.n_max << "\n"
     << "tail_tol = " << config.fock.tail_tol << "\n"
     << "[plan]\n"
     << "method = " << to_string(config.plan.method) << "\n"
     << "dt = " << config.plan.dt << "\n"
     << "t_max = " << config.plan.t_max << "\n"
     << "krylov_dim = " << config.plan.krylov_dim << "\n"
     << "step_tol = " << config.plan.step_tol << "\n";
  os << "outputs = ";
  for (std::size_t i = 0; i < config.outputs.size(); ++i) os << (i ? ";" : "") << config.outputs[i];
  os << "\n";
  return os.str();
}

}  // namespace rabicat
