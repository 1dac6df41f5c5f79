// Copyright 2026 The eigengrad Authors.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace eigengrad::cli {

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct InstanceInfo {
  std::string name;
  int n = 0;
  int k = 0;
  std::string solver;
};

struct Environment {
  std::uint64_t seed = 0;
  int n = 0;
  int k = 0;
  std::string solver;
  std::vector<InstanceInfo> instances;
};

/// Versioned result of a verification run. Timing is kept out of the JSON
/// so reports are reproducible bit for bit.
struct DerivativeReport {
  static constexpr int kSchema = 1;

  Environment environment;
  std::vector<CheckRecord> checks;
  double elapsed_seconds = 0.0;

  /// Records pass iff measured <= tolerance (NaN fails).
  CheckRecord& record(std::string name, double measured, double tolerance);
  /// A check that failed outright, e.g. because a module threw.
  CheckRecord& fail(std::string name, double tolerance);
  CheckRecord& skip(std::string name, double tolerance);

  bool all_passed() const;
  nlohmann::ordered_json to_json() const;
  void write(const std::filesystem::path& path) const;
};

std::string to_string(CheckStatus status);

}  // namespace eigengrad::cli
