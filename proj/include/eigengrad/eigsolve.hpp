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
#include <functional>
#include <vector>

#include "eigengrad/errors.hpp"
#include "eigengrad/linop.hpp"

namespace eigengrad {

enum class Which { Smallest, Largest };

/// Two eigenvalues are degenerate when |a - b| <= abs + rel * max_m |lambda_m|.
struct DegeneracyTolerance {
  double rel = 1e-8;
  double abs = 0.0;
};

/// Partition of the retrieved pairs into classes of equal eigenvalue.
struct Degeneracy {
  Matrix D;                             // k x k, entries 0 or 1
  std::vector<std::vector<int>> groups; // each ascending; ordered by first index
  std::vector<int> group_of;            // pair index -> group index
};

/// Chain-merges sorted neighbours within tolerance, so the relation is the
/// transitive closure and D is constant on each group block.
Degeneracy build_degeneracy(const Vector& lambdas, double tol_rel = 1e-8,
                            double tol_abs = 0.0);

/// k eigenpairs of A X = M X Lambda with X^T M X = I.
///
/// Eigenvalues are ascending for both selections. Each column is gauged so
/// that its entry of largest magnitude is positive (lowest index wins ties);
/// inside a degeneracy group the basis is re-orthonormalized by modified
/// Gram-Schmidt in the M inner product before the sign gauge.
struct EigenResult {
  int k = 0;
  Matrix X;
  Vector lambdas;
  Matrix D;
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of;
  Which which = Which::Smallest;
  int iterations = 0;

  Index dim() const { return X.rows(); }
  /// Columns of X belonging to the group that contains pair j.
  Matrix group_block_of(int j) const;
  const std::vector<int>& group_members_of(int j) const {
    return groups[static_cast<std::size_t>(group_of[static_cast<std::size_t>(j)])];
  }
};

EigenResult eig_dense(const DenseSymmetric& A, const DenseSymmetric& M, int k,
                      Which which = Which::Smallest,
                      DegeneracyTolerance degeneracy = {});

/// Applies T to a residual block; must return a block of the same shape.
using Preconditioner = std::function<Matrix(const Matrix&)>;

struct IterativeEigOptions {
  int maxiter = 2000;
  /// Per-pair stopping rule |A x - lambda M x| <= tol (|A x| + |lambda||M x|).
  double tol = 1e-11;
  std::uint64_t seed = 1;
  /// Extra trailing block columns that are iterated but not reported.
  /// Negative selects max(2, k / 2).
  int guard = -1;
  Preconditioner preconditioner;  // identity when empty
  DegeneracyTolerance degeneracy;
};

/// Raised by eig_iterative when maxiter is reached; carries the best iterate.
class EigMaxIterExceeded : public Error {
 public:
  EigMaxIterExceeded(EigenResult best, double residual);

  const EigenResult& best() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }

 private:
  EigenResult best_;
  double residual_;
};

/// Block preconditioned conjugate-direction solver (LOBPCG family) with soft
/// locking and M-orthonormalization of the iterate at every step.
EigenResult eig_iterative(const SymmetricOperator& A, const SpdOperator& M,
                          int k, Which which = Which::Smallest,
                          const IterativeEigOptions& options = {});

/// Sorts, M-orthonormalizes within degeneracy groups, fixes signs and builds
/// the degeneracy data. Shared by both solvers.
EigenResult finalize_eigenpairs(Matrix X, Vector lambdas, Which which,
                                const SymmetricOperator& M,
                                DegeneracyTolerance degeneracy);

/// Cheap |A| estimate from random probes and the supplied block.
double operator_norm_estimate(const SymmetricOperator& A,
                              const Eigen::Ref<const Matrix>& probes,
                              int random_probes = 4);

struct EigenQuality {
  /// |A X - M X Lambda|_F / (|A|_est * |X|_F)
  double residual = 0.0;
  /// max |X^T M X - I|
  double orthonormality = 0.0;
};

EigenQuality assess(const SymmetricOperator& A, const SymmetricOperator& M,
                    const EigenResult& eig);

}  // namespace eigengrad
