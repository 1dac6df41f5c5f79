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

#include "eigengrad/linop.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eigengrad/errors.hpp"

namespace eigengrad {

namespace {

Vector random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace

Matrix SymmetricOperator::apply_batch(
    const Eigen::Ref<const Matrix>& block) const {
  Matrix out(block.rows(), block.cols());
  for (Index j = 0; j < block.cols(); ++j) out.col(j) = apply(block.col(j));
  return out;
}

FunctionOperator::FunctionOperator(Index n, Apply apply)
    : n_(n), apply_(std::move(apply)) {
  if (n <= 0) throw Error(ErrorKind::InvalidArgument, "operator dim must be positive");
}

Vector FunctionOperator::apply(const Eigen::Ref<const Vector>& v) const {
  if (v.size() != n_)
    throw Error(ErrorKind::DimensionMismatch, "operand length mismatch");
  return apply_(v);
}

DenseSymmetric DenseSymmetric::make_dense(
    const Eigen::Ref<const Matrix>& entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw Error(ErrorKind::NonSquare, "dense operator needs a non-empty square array");
  if (!entries.allFinite())
    throw Error(ErrorKind::NonFinite, "dense operator entries must be finite");
  Matrix sym = 0.5 * (entries + entries.transpose());
  return DenseSymmetric(std::move(sym));
}

Vector DenseSymmetric::apply(const Eigen::Ref<const Vector>& v) const {
  if (v.size() != entries_.rows())
    throw Error(ErrorKind::DimensionMismatch, "operand length mismatch");
  return entries_ * v;
}

Matrix DenseSymmetric::apply_batch(const Eigen::Ref<const Matrix>& block) const {
  if (block.rows() != entries_.rows())
    throw Error(ErrorKind::DimensionMismatch, "operand block row mismatch");
  return entries_ * block;
}

std::shared_ptr<const DenseSymmetric> make_dense_ptr(
    const Eigen::Ref<const Matrix>& entries) {
  return std::make_shared<const DenseSymmetric>(DenseSymmetric::make_dense(entries));
}

SpdOperator::SpdOperator(OperatorPtr op) : op_(std::move(op)) {
  if (!op_) throw Error(ErrorKind::InvalidArgument, "null operator");
}

bool SpdOperator::spot_check(int trials, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Vector v = random_vector(dim(), rng);
    if (!(v.dot(apply(v)) > 0.0)) return false;
  }
  return true;
}

Matrix to_dense(const SymmetricOperator& op) {
  return op.apply_batch(Matrix::Identity(op.dim(), op.dim()));
}

double symmetry_defect(const SymmetricOperator& op, int trials,
                       std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  std::mt19937_64 rng(seed);
  const Index n = op.dim();
  double opnorm = 0.0;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vector u = random_vector(n, rng);
    const Vector v = random_vector(n, rng);
    const Vector au = op.apply(u);
    const Vector av = op.apply(v);
    opnorm = std::max({opnorm, au.norm() / u.norm(), av.norm() / v.norm()});
    const double gap = std::abs(u.dot(av) - v.dot(au));
    const double scale = u.norm() * v.norm() * opnorm;
    if (scale > 0.0) worst = std::max(worst, gap / scale);
  }
  return worst;
}

bool check_symmetry(const SymmetricOperator& op, int trials, double tol,
                    std::uint64_t seed) {
  return symmetry_defect(op, trials, seed) <= tol;
}

double linearity_defect(const SymmetricOperator& op, int trials,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Index n = op.dim();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vector u = random_vector(n, rng);
    const Vector v = random_vector(n, rng);
    const double a = normal(rng);
    const double b = normal(rng);
    const Vector au = op.apply(u);
    const Vector av = op.apply(v);
    const Vector lhs = op.apply(a * u + b * v);
    const Vector rhs = a * au + b * av;
    const double scale =
        std::abs(a) * au.norm() + std::abs(b) * av.norm() + 1e-300;
    worst = std::max(worst, (lhs - rhs).norm() / scale);
  }
  return worst;
}

}  // namespace eigengrad
