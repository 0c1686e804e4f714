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

// Run configuration in a flat key=value format:
//
//   # comment
//   [model]
//   R = 100
//   lambda = 0.75, delta = 0.5, mu = 1.3e-3
//   [fock]
//   n_max = 400
//   [plan]
//   method = eigen
//   dt = 0.01
//   t_max = 40
//
// Section headers are optional because every key is unique; when present,
// a key must belong to the current section. Pairs may be separated by
// newlines or commas.

#pragma once

#include "rabicat/evolution.hpp"
#include "rabicat/fock_space.hpp"
#include "rabicat/rabi_model.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabicat {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  /// line = 0 for errors not tied to a line (validation, overrides).
  ConfigError(const std::string& message, int line = 0, std::string field = {});
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

struct RunConfig {
  ModelParams model;
  /// n_max = 0 selects FockConfig::for_size(model.R).
  FockConfig fock{0, 1e-8};
  PropagatorPlan plan;
  std::vector<std::string> outputs;

  void validate() const;
  FockConfig resolved_fock() const;
};

/// Observables a run can emit, in canonical column order.
const std::vector<std::string>& supported_observables();
const std::vector<std::string>& default_observables();

/// Parses `text`, then applies `overrides` (key -> value, as given by
/// command-line flags), then validates. R is mandatory.
RunConfig parse_config(const std::string& text,
                       const std::map<std::string, std::string>& overrides = {});

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const RunConfig& config);

}  // namespace rabicat
