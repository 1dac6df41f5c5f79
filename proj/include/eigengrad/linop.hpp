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

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>

namespace eigengrad {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A real symmetric linear map known only through matrix-vector products.
///
/// Implementations must be immutable after construction: apply() may be called
/// concurrently from several threads on distinct vectors.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;

  virtual Index dim() const = 0;
  virtual Vector apply(const Eigen::Ref<const Vector>& v) const = 0;

  /// Applies the operator to every column of an n x m block. The default
  /// implementation is a loop over apply().
  virtual Matrix apply_batch(const Eigen::Ref<const Matrix>& block) const;
};

using OperatorPtr = std::shared_ptr<const SymmetricOperator>;

/// Matrix-free operator backed by a callable. Symmetry is the caller's claim;
/// use check_symmetry() to probe it.
class FunctionOperator final : public SymmetricOperator {
 public:
  using Apply = std::function<Vector(const Eigen::Ref<const Vector>&)>;

  FunctionOperator(Index n, Apply apply);

  Index dim() const override { return n_; }
  Vector apply(const Eigen::Ref<const Vector>& v) const override;

 private:
  Index n_;
  Apply apply_;
};

/// Fully stored symmetric matrix. Construction symmetrizes (B + B^T)/2, so
/// entries()(i, j) == entries()(j, i) holds exactly.
class DenseSymmetric final : public SymmetricOperator {
 public:
  /// Throws Error(NonSquare) or Error(NonFinite).
  static DenseSymmetric make_dense(const Eigen::Ref<const Matrix>& entries);

  Index dim() const override { return entries_.rows(); }
  Vector apply(const Eigen::Ref<const Vector>& v) const override;
  Matrix apply_batch(const Eigen::Ref<const Matrix>& block) const override;

  const Matrix& entries() const noexcept { return entries_; }

 private:
  explicit DenseSymmetric(Matrix entries) : entries_(std::move(entries)) {}

  Matrix entries_;
};

inline DenseSymmetric make_dense(const Eigen::Ref<const Matrix>& entries) {
  return DenseSymmetric::make_dense(entries);
}

std::shared_ptr<const DenseSymmetric> make_dense_ptr(
    const Eigen::Ref<const Matrix>& entries);

/// A symmetric operator whose positive definiteness is attested by the
/// caller. spot_check() probes it with random Rayleigh quotients.
class SpdOperator final : public SymmetricOperator {
 public:
  explicit SpdOperator(OperatorPtr op);

  Index dim() const override { return op_->dim(); }
  Vector apply(const Eigen::Ref<const Vector>& v) const override {
    return op_->apply(v);
  }
  Matrix apply_batch(const Eigen::Ref<const Matrix>& block) const override {
    return op_->apply_batch(block);
  }

  const SymmetricOperator& base() const noexcept { return *op_; }
  const OperatorPtr& shared() const noexcept { return op_; }

  /// True iff <v, Mv> > 0 for `trials` random probes.
  bool spot_check(int trials, std::uint64_t seed = 7) const;

 private:
  OperatorPtr op_;
};

/// Materializes any operator by applying it to the identity.
Matrix to_dense(const SymmetricOperator& op);

/// Largest relative symmetry defect |<u, Av> - <v, Au>| / (|u||v| * opnorm)
/// over `trials` seeded random probe pairs. opnorm is the largest |Av|/|v|
/// seen during probing.
double symmetry_defect(const SymmetricOperator& op, int trials,
                       std::uint64_t seed = 11);

bool check_symmetry(const SymmetricOperator& op, int trials, double tol,
                    std::uint64_t seed = 11);

/// Largest relative linearity defect of apply(a*u + b*v) against
/// a*apply(u) + b*apply(v) over random probes.
double linearity_defect(const SymmetricOperator& op, int trials,
                        std::uint64_t seed = 13);

}  // namespace eigengrad
