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
#include <optional>
#include <string>
#include <vector>

#include "eigengrad/cli/generate.hpp"
#include "eigengrad/cli/report.hpp"
#include "eigengrad/cli/sampling.hpp"
#include "eigengrad/eigsolve.hpp"
#include "eigengrad/options.hpp"

namespace eigengrad::cli {

struct Tolerances {
  double tol_eig = 1e-9;    // relative eigen-equation residual
  double tol_orth = 1e-10;  // max |X^T M X - I|
  double tol_solv = 1e-10;
  double tol_cond = 1e-7;
  double fd_step = 1e-5;
};

struct RunConfig {
  std::optional<int> n;  // set => single generated instance
  int k = 3;
  Which which = Which::Smallest;
  std::uint64_t seed = 42;
  std::string degeneracy;
  MassKind mass = MassKind::RandomSpd;
  SolverKind solver = SolverKind::Dense;
  Tolerances tol;
  std::optional<std::filesystem::path> in_dir;  // set => A.mat/M.mat instance
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> tangent_a;
  std::optional<std::filesystem::path> tangent_m;
  int threads = 1;
  int pairing_draws = 20;
};

/// One pencil plus everything needed to run the check sequence on it.
struct Instance {
  std::string name;
  DenseSymmetric A;
  DenseSymmetric M;
  int k = 1;
  Which which = Which::Smallest;
  SolverKind solver = SolverKind::Dense;
  std::uint64_t seed = 0;
  std::optional<DenseTangent> tangent;  // overrides the sampled tangent
};

std::string to_string(SolverKind solver);
std::string to_string(Which which);

/// The shipped default suite: small hand-checkable, random, exactly
/// degenerate, largest-k and a matrix-free n = 100 iterative pencil.
std::vector<Instance> default_suite(const RunConfig& config);

/// Instances selected by the config: --in files, a generated pencil when n
/// is set, the default suite otherwise.
std::vector<Instance> instances_for(const RunConfig& config);

/// Runs the ordered check sequence on one instance. Module errors become
/// failed checks; checks that depend on a failed step are skipped.
std::vector<CheckRecord> verify_instance(const Instance& instance,
                                         const RunConfig& config);

/// Verifies every selected instance (concurrently when threads > 1; order
/// of records is fixed) and writes report.json into out_dir when set.
DerivativeReport run_verify(const RunConfig& config);

}  // namespace eigengrad::cli
