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

#include "eigengrad/cli/sampling.hpp"
#include "eigengrad/eigsolve.hpp"
#include "eigengrad/jvp.hpp"
#include "eigengrad/oracle.hpp"
#include "eigengrad/vjp.hpp"

// Scalar measurements shared by the verify harness and the test suites.
namespace eigengrad::cli {

/// |lhs - rhs| / max(|lhs|, |rhs|) for the adjoint pairing
/// <lbar, lambda'> + <X_bar, X'> = <A_bar, A'> + <M_bar, M'>.
double pairing_error(const TangentOutput& forward, const CotangentInput& c,
                     const CotangentOutput& backward, const DenseTangent& t);

/// max-abs(a - b) / max(1, max-abs(b)).
double scaled_max_diff(const Matrix& a, const Matrix& b);

struct FdComparison {
  double eigenvalues = 0.0;   // relative to max |lambda'|
  double eigenvectors = 0.0;  // singleton columns, scaled_max_diff
  double projectors = 0.0;    // every group, scaled_max_diff
  bool has_singletons = false;
  /// Unscaled max error over eigenvectors and projectors, used for the
  /// Richardson ratio. Eigenvalue differences are left out: at step 1e-5
  /// their error sits at the roundoff floor eps |lambda| / h on large pencils.
  double combined = 0.0;
};

/// Compares an analytic jvp against a finite-difference oracle. Degenerate
/// group eigenvalue derivatives are compared after sorting within the group.
FdComparison compare_to_fd(const EigenResult& eig, const SymmetricOperator& M,
                           const TangentInput& t, const TangentOutput& analytic,
                           const oracle::FiniteDifferenceJvp& fd);

/// |A'X + AX' - M'X Lambda - M X' Lambda - M X Lambda'|_F over the sum of the
/// term norms.
double differentiated_equation_residual(const SymmetricOperator& A,
                                        const SymmetricOperator& M,
                                        const EigenResult& eig,
                                        const TangentInput& t,
                                        const TangentOutput& out);

/// max |X^T M' X + X^T M X' + X'^T M X| / max(1, max |X^T M' X|).
double differentiated_normalization_residual(const SymmetricOperator& M,
                                             const EigenResult& eig,
                                             const TangentInput& t,
                                             const TangentOutput& out);

}  // namespace eigengrad::cli
