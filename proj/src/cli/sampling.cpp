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

#include "eigengrad/cli/sampling.hpp"

namespace eigengrad::cli {

namespace {

Matrix gather(const Matrix& X, const std::vector<int>& cols) {
  Matrix out(X.rows(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    out.col(static_cast<Index>(c)) = X.col(cols[c]);
  return out;
}

}  // namespace

Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

Matrix random_orthogonal(Index n, Rng& rng) {
  const Matrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Matrix random_symmetric(Index n, Rng& rng) {
  const Matrix g = random_gaussian(n, n, rng);
  return 0.5 * (g + g.transpose());
}

Matrix random_spd(Index n, Rng& rng) {
  const Matrix q = random_orthogonal(n, rng);
  std::uniform_real_distribution<double> uniform(1.0, 2.0);
  Vector d(n);
  for (Index i = 0; i < n; ++i) d(i) = uniform(rng);
  Matrix m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

Matrix strip_group_coupling(const Matrix& S, const EigenResult& eig,
                            const Matrix& M) {
  Matrix out = S;
  for (const auto& g : eig.groups) {
    if (g.size() < 2) continue;
    const Matrix Xg = gather(eig.X, g);
    const Matrix MXg = M * Xg;
    Matrix C = Xg.transpose() * S * Xg;
    C.diagonal().setZero();
    out -= MXg * C * MXg.transpose();
  }
  return 0.5 * (out + out.transpose());
}

TangentInput DenseTangent::as_input() const {
  return TangentInput{make_dense_ptr(Aprime), make_dense_ptr(Mprime)};
}

DenseTangent random_valid_tangent(const EigenResult& eig, const Matrix& M,
                                  Rng& rng) {
  const Index n = eig.dim();
  DenseTangent t;
  t.Aprime = strip_group_coupling(random_symmetric(n, rng), eig, M);
  t.Mprime = strip_group_coupling(random_symmetric(n, rng), eig, M);
  return t;
}

CotangentInput random_valid_cotangent(const EigenResult& eig, Rng& rng) {
  CotangentInput c;
  c.lambda_bar = random_gaussian(eig.k, 1, rng).col(0);
  c.X_bar = random_gaussian(eig.dim(), eig.k, rng);
  for (const auto& g : eig.groups) {
    if (g.size() < 2) continue;
    const Matrix Xg = gather(eig.X, g);
    const Matrix Xbg = gather(c.X_bar, g);
    const Matrix S = Xg.transpose() * Xbg;
    const Matrix K = 0.5 * (S - S.transpose());
    const Matrix Z = Xg * (Xg.transpose() * Xg).ldlt().solve(Matrix::Identity(Xg.cols(), Xg.cols()));
    const Matrix fixed = Xbg - Z * K;
    for (std::size_t c2 = 0; c2 < g.size(); ++c2)
      c.X_bar.col(g[c2]) = fixed.col(static_cast<Index>(c2));
  }
  return c;
}

}  // namespace eigengrad::cli
