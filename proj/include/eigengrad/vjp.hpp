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

/// Sensitivities of a scalar loss with respect to (Lambda, X).
struct CotangentInput {
  Vector lambda_bar;  // diagonal of Lambda-bar
  Matrix X_bar;
};

/// Raw cotangents of A and M: the pairing <A_bar, A'> + <M_bar, M'> equals
/// <lambda_bar, lambda'> + <X_bar, X'> for every tangent. They are not
/// symmetric in general; see vjp_symmetrized.
struct CotangentOutput {
  Matrix A_bar;
  Matrix M_bar;
  double validity_defect = 0.0;
};

/// Max-abs of (D - I) o (X^T X_bar - X_bar^T X).
ValidityCheck check_backward_validity(const EigenResult& eig,
                                      const CotangentInput& c,
                                      double tol_cond = 1e-7);

/// Reverse mode:
///   A Y_bar - M Y_bar Lambda = X_bar - M X [D o (X^T X_bar)]
///   V_bar = Y_bar - X [I o (X^T M Y_bar)]
///   A_bar = X Lambda_bar X^T - V_bar X^T
///   M_bar = -X Lambda Lambda_bar X^T - 1/2 X [I o (X^T X_bar)] X^T
///           + V_bar Lambda X^T
/// With X_bar == 0 the shifted solves are skipped.
CotangentOutput vjp(const SymmetricOperator& A, const SymmetricOperator& M,
                    const EigenResult& eig, const CotangentInput& c,
                    const DerivativeOptions& options = {});

/// Same as vjp followed by (G + G^T) / 2 on both outputs: the gradient for
/// parameterizations that keep A and M symmetric.
CotangentOutput vjp_symmetrized(const SymmetricOperator& A,
                                const SymmetricOperator& M,
                                const EigenResult& eig, const CotangentInput& c,
                                const DerivativeOptions& options = {});

}  // namespace eigengrad
