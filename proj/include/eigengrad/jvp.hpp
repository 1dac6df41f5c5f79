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

#include "eigengrad/eigsolve.hpp"
#include "eigengrad/linop.hpp"
#include "eigengrad/options.hpp"

namespace eigengrad {

/// Perturbation direction (A', M') of the pencil.
struct TangentInput {
  OperatorPtr Aprime;
  OperatorPtr Mprime;
};

struct TangentOutput {
  Vector lambda_prime;  // diagonal of Lambda'
  Matrix X_prime;
  double validity_defect = 0.0;
};

/// X^T (A' X - M' X Lambda), the k x k matrix behind both Lambda' and the
/// forward validity condition.
Matrix tangent_coupling(const EigenResult& eig, const TangentInput& t);

/// Max-abs of (D - I) o [X^T (A' X - M' X Lambda)]. Inside a degeneracy group
/// this must vanish for X' to be finite.
ValidityCheck check_forward_validity(const EigenResult& eig,
                                     const TangentInput& t,
                                     double tol_cond = 1e-7);

/// Stronger form: (D - I) o (X^T A' X) and (D - I) o (X^T M' X Lambda) vanish
/// separately. Tangents passing this also satisfy the differentiated
/// normalization inside each group under the zero degenerate-component gauge.
ValidityCheck check_separable_validity(const EigenResult& eig,
                                       const TangentInput& t,
                                       double tol_cond = 1e-7);

/// lambda'_j = x_j^T (A' - lambda_j M') x_j.
Vector eigenvalue_jvp(const EigenResult& eig, const TangentInput& t);

/// X' = -1/2 X [I o (X^T M' X)] - Y' + X [D o (X^T M Y')] where
/// A Y' - M Y' Lambda is the group-projected V' = A' X - M' X Lambda.
/// The degenerate component of each x'_j is zero: x_i^T M x'_j = 0 for i != j
/// in the same group. Throws ValidityViolated unless options.force.
TangentOutput eigenvector_jvp(const SymmetricOperator& A,
                              const SymmetricOperator& M,
                              const EigenResult& eig, const TangentInput& t,
                              const DerivativeOptions& options = {});

/// Forward-mode entry point; validates, then returns (Lambda', X').
TangentOutput jvp(const SymmetricOperator& A, const SymmetricOperator& M,
                  const EigenResult& eig, const TangentInput& t,
                  const DerivativeOptions& options = {});

/// Derivative of the group projector P_g = X_g X_g^T M along (X', M').
Matrix projector_jvp(const SymmetricOperator& M, const SymmetricOperator& Mprime,
                     const EigenResult& eig, const Matrix& X_prime, int group);

}  // namespace eigengrad
