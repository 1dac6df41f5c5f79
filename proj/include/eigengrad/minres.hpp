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

#include <functional>

#include "eigengrad/linop.hpp"

namespace eigengrad {

struct MinresResult {
  Vector x;
  int iterations = 0;
  double residual_estimate = 0.0;  // |b - K x| as tracked by the recurrence
  bool converged = false;
};

/// Unpreconditioned MINRES for a symmetric, possibly indefinite or singular
/// operator. Stops when the recurrence residual drops below rtol * |b| or an
/// exact invariant subspace is found. On a consistent singular system started
/// inside the range it returns the minimum-norm solution.
MinresResult minres(const std::function<Vector(const Vector&)>& op,
                    const Vector& b, const Vector& x0, double rtol,
                    int maxiter);

}  // namespace eigengrad
