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

#include "eigengrad/sylvester.hpp"

namespace eigengrad {

enum class SolverKind { Dense, Iterative };

struct DerivativeOptions {
  SolverKind solver = SolverKind::Dense;
  SylvesterOptions sylvester;
  /// Validity holds when defect <= tol_cond * max(1, |unmasked matrix|_max).
  double tol_cond = 1e-7;
  /// Proceed on a violated validity condition and return the projected answer.
  bool force = false;
};

struct ValidityCheck {
  bool ok = true;
  double defect = 0.0;
  double tolerance = 0.0;
};

/// Dispatches to solve_dense or solve_iterative.
SylvesterSolution solve(const SylvesterProblem& p, const DerivativeOptions& o);

}  // namespace eigengrad
