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
#include "eigengrad/jvp.hpp"
#include "eigengrad/linop.hpp"
#include "eigengrad/vjp.hpp"

// Brute-force references used to certify the scalable derivative paths. Every
// routine here needs the complete spectrum of a dense pencil and is capped in
// size; none of it shares code with the jvp/vjp/sylvester implementations.
namespace eigengrad::oracle {

inline constexpr Index kDefaultCap = 200;

/// All n eigenpairs of A U = M U E with U^T M U = I (hence U U^T = M^-1).
struct FullSpectrum {
  Matrix U;
  Vector E;  // ascending
};

FullSpectrum full_spectrum(const DenseSymmetric& A, const DenseSymmetric& M,
                           Index cap = kDefaultCap);

/// sum over |E_i - lambda| > group_tol of u_i (u_i^T v) / (E_i - lambda).
Vector pseudo_inverse_apply(const FullSpectrum& fs, double lambda,
                            const Vector& v, double group_tol);

struct SeriesOptions {
  /// Spectrum entries within rel * max|lambda_retrieved| of lambda_j are
  /// treated as its degenerate partners and excluded from the sums.
  double group_tol_rel = 1e-8;
  double tol_cond = 1e-7;
};

/// lambda'_j = x_j^T (A' - lambda_j M') x_j and
/// x'_j = -1/2 x_j x_j^T M' x_j
///        - sum_{i not in g(j)} u_i u_i^T (A' - lambda_j M') x_j / (E_i - lambda_j).
/// Throws ValidityViolated when a same-group coupling is nonzero.
TangentOutput jvp_series(const FullSpectrum& fs, const EigenResult& eig,
                         const TangentInput& t, const SeriesOptions& options = {});

/// Pairwise sums of the single-pair backward formulas:
///   A_bar = sum_j lbar_j x_j x_j^T - sum_j s_j x_j^T
///   M_bar = sum_j [-lambda_j lbar_j - 1/2 x_j^T xbar_j] x_j x_j^T
///           + sum_j lambda_j s_j x_j^T
/// with s_j = sum_{i not in g(j)} u_i u_i^T xbar_j / (E_i - lambda_j).
CotangentOutput vjp_series(const FullSpectrum& fs, const EigenResult& eig,
                           const CotangentInput& c,
                           const SeriesOptions& options = {});

/// Central differences of eig_dense along (A', M').
struct FiniteDifferenceJvp {
  double step = 0.0;
  Vector lambda_prime;
  /// Columns for singleton groups; columns of degenerate groups are zero and
  /// flagged false in column_valid.
  Matrix X_prime;
  std::vector<bool> column_valid;
  /// d/dt of X_g X_g^T M for every group, indexed like eig.groups.
  std::vector<Matrix> projector_prime;
};

/// `reference` supplies k, the selection, the groups and the sign gauge.
/// Degenerate groups are compared through their projector; their eigenvalue
/// derivatives are the ascending group values from averaged one-sided
/// differences. Throws Error(ClusterSplit) when the retrieved block is within
/// 10 * step * |tangent| of the rest of the spectrum, Error(GaugeAlignmentFailed)
/// when a singleton eigenvector rotates too far to sign-match.
FiniteDifferenceJvp finite_difference_jvp(const DenseSymmetric& A,
                                          const DenseSymmetric& M,
                                          const EigenResult& reference,
                                          const TangentInput& t,
                                          double step = 1e-5);

}  // namespace eigengrad::oracle
