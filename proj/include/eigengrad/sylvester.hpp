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

#include <vector>

#include "eigengrad/eigsolve.hpp"
#include "eigengrad/errors.hpp"
#include "eigengrad/linop.hpp"

namespace eigengrad {

/// A Y - M Y Lambda = B with diagonal Lambda, i.e. k decoupled shifted
/// systems (A - lambda_j M) y_j = b_j. Each shift is singular on the span of
/// its degeneracy group X_g; that span supplies the nullspace data.
struct SylvesterProblem {
  const SymmetricOperator& A;
  const SymmetricOperator& M;
  Vector lambdas;
  Matrix B;
  Matrix X;
  std::vector<std::vector<int>> groups;
};

SylvesterProblem make_problem(const SymmetricOperator& A,
                              const SymmetricOperator& M,
                              const EigenResult& eig, Matrix B);

struct SylvesterOptions {
  /// Relative residual target per column.
  double tol_solv = 1e-10;
  /// Krylov budget per column; non-positive selects 20 n.
  int maxiter = -1;
  /// Largest accepted |X_g^T b| / (|X_g|_F |b|) before NotSolvable.
  double tol_solvable = 1e-8;
};

struct SylvesterSolution {
  Matrix Y;
  Vector residuals;            // relative, after nullspace projection
  std::vector<int> iterations;  // zero for the dense path and zero columns
};

class SolveMaxIterExceeded : public Error {
 public:
  SolveMaxIterExceeded(int column, SylvesterSolution best);

  int column() const noexcept { return column_; }
  const SylvesterSolution& best() const noexcept { return best_; }

 private:
  int column_;
  SylvesterSolution best_;
};

/// Column j of the result is b_j - M X_g (X_g^T b_j) with g the group of j.
/// With X M-orthonormal the output is orthogonal to every X_g.
Matrix project_rhs(const Eigen::Ref<const Matrix>& B,
                   const Eigen::Ref<const Matrix>& X,
                   const SymmetricOperator& M,
                   const std::vector<std::vector<int>>& groups);

/// Dense path. Each shift is deflated to A - lambda M + (M X_g)(M X_g)^T,
/// which is nonsingular when X_g spans the nullspace and whose solution for a
/// solvable right-hand side is automatically M-orthogonal to X_g.
SylvesterSolution solve_dense(const SylvesterProblem& p,
                              const SylvesterOptions& options = {});

/// Matrix-free path: MINRES per column on P^T (A - lambda_j M) P with
/// P = I - X_g X_g^T M, followed by a final application of P.
SylvesterSolution solve_iterative(const SylvesterProblem& p,
                                  const SylvesterOptions& options = {});

}  // namespace eigengrad
