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

#include "eigengrad/cli/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "eigengrad/errors.hpp"

namespace eigengrad::cli {

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "fail";
}

CheckRecord& DerivativeReport::record(std::string name, double measured,
                                      double tolerance) {
  const bool pass = std::isfinite(measured) && measured <= tolerance;
  checks.push_back({std::move(name), pass ? CheckStatus::Pass : CheckStatus::Fail,
                    measured, tolerance});
  return checks.back();
}

CheckRecord& DerivativeReport::fail(std::string name, double tolerance) {
  checks.push_back({std::move(name), CheckStatus::Fail,
                    std::numeric_limits<double>::infinity(), tolerance});
  return checks.back();
}

CheckRecord& DerivativeReport::skip(std::string name, double tolerance) {
  checks.push_back({std::move(name), CheckStatus::Skipped, 0.0, tolerance});
  return checks.back();
}

bool DerivativeReport::all_passed() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) return false;
  return true;
}

nlohmann::ordered_json DerivativeReport::to_json() const {
  using json = nlohmann::ordered_json;
  json env;
  env["seed"] = environment.seed;
  env["n"] = environment.n;
  env["k"] = environment.k;
  env["solver"] = environment.solver;
  json instances = json::array();
  for (const auto& i : environment.instances)
    instances.push_back({{"name", i.name}, {"n", i.n}, {"k", i.k}, {"solver", i.solver}});
  env["instances"] = std::move(instances);

  json list = json::array();
  for (const auto& c : checks) {
    json entry;
    entry["name"] = c.name;
    entry["status"] = to_string(c.status);
    // JSON has no infinity; a thrown check reports null.
    if (std::isfinite(c.measured))
      entry["measured"] = c.measured;
    else
      entry["measured"] = nullptr;
    entry["tolerance"] = c.tolerance;
    list.push_back(std::move(entry));
  }

  json out;
  out["schema"] = kSchema;
  out["environment"] = std::move(env);
  out["checks"] = std::move(list);
  out["all_passed"] = all_passed();
  return out;
}

void DerivativeReport::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << to_json().dump(2) << '\n';
}

}  // namespace eigengrad::cli
