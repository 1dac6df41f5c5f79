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

// Block preconditioned conjugate-direction eigensolver for the pencil (A, M).
//
// Each step runs Rayleigh-Ritz on span[X, W, P] where W holds preconditioned
// residuals of the unconverged columns and P the previous search directions.
// Converged columns stay in X (soft locking) but stop contributing W and P.
// The trial basis is M-orthonormalized through an eigendecomposition of its
// scaled Gram matrix so nearly dependent directions are dropped instead of
// blowing up the projected problem.

#include <algorithm>
#include <cmath>
#include <random>

#include "eigengrad/eigsolve.hpp"

namespace eigengrad {

namespace {

// Returns T with (S T)^T M (S T) ~ I, dropping directions whose scaled Gram
// eigenvalue falls below `drop` times the largest one.
Matrix orthonormalizing_transform(const Matrix& S, const Matrix& MS,
                                  double drop = 1e-13) {
  Matrix G = S.transpose() * MS;
  G = 0.5 * (G + G.transpose()).eval();
  const Index p = G.rows();
  Vector dscale(p);
  for (Index i = 0; i < p; ++i)
    dscale(i) = G(i, i) > 0.0 ? 1.0 / std::sqrt(G(i, i)) : 0.0;
  const Matrix Gs = dscale.asDiagonal() * G * dscale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(Gs);
  const Vector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  std::vector<Index> keep;
  for (Index i = 0; i < p; ++i)
    if (ev(i) > drop * top) keep.push_back(i);
  Matrix T(p, static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const Index i = keep[c];
    T.col(static_cast<Index>(c)) =
        dscale.asDiagonal() * es.eigenvectors().col(i) / std::sqrt(ev(i));
  }
  return T;
}

struct Block {
  Matrix X, AX, MX;
};

// Cholesky re-orthonormalization of a block that is already close to
// M-orthonormal.
void reorthonormalize(Block& b) {
  Matrix G = b.X.transpose() * b.MX;
  G = 0.5 * (G + G.transpose()).eval();
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) return;
  const Matrix Linv_t =
      llt.matrixU().solve(Matrix::Identity(G.rows(), G.cols()));
  b.X = b.X * Linv_t;
  b.AX = b.AX * Linv_t;
  b.MX = b.MX * Linv_t;
}

}  // namespace

EigenResult eig_iterative(const SymmetricOperator& A, const SpdOperator& M,
                          int k, Which which, const IterativeEigOptions& opt) {
  const Index n = A.dim();
  if (M.dim() != n)
    throw Error(ErrorKind::DimensionMismatch, "A and M differ in size");
  if (k < 1 || k >= n)
    throw Error(ErrorKind::InvalidArgument, "need 1 <= k < n");

  const double sgn = which == Which::Smallest ? 1.0 : -1.0;
  const int guard = opt.guard < 0 ? std::max(2, k / 2) : opt.guard;
  const Index m = std::min<Index>(n, k + guard);
  auto applyA = [&](const Matrix& B) -> Matrix { return sgn * A.apply_batch(B); };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  Matrix X0(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) X0(i, j) = normal(rng);

  Block cur;
  Vector theta;
  {
    const Matrix MX0 = M.apply_batch(X0);
    const Matrix T = orthonormalizing_transform(X0, MX0);
    if (T.cols() < m)
      throw Error(ErrorKind::NotPositiveDefinite, "M is singular on the start block");
    cur.X = X0 * T;
    cur.AX = applyA(cur.X);
    cur.MX = M.apply_batch(cur.X);
    Matrix H = cur.X.transpose() * cur.AX;
    H = 0.5 * (H + H.transpose()).eval();
    Matrix G = cur.X.transpose() * cur.MX;
    G = 0.5 * (G + G.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> rr(H, G);
    theta = rr.eigenvalues();
    const Matrix& C = rr.eigenvectors();
    cur.X = cur.X * C;
    cur.AX = cur.AX * C;
    cur.MX = cur.MX * C;
  }

  Matrix P, AP, MP;  // n x m when present; columns line up with X
  auto relative_residuals = [&](const Matrix& R) {
    Vector out(m);
    for (Index j = 0; j < m; ++j) {
      const double denom = cur.AX.col(j).norm() + std::abs(theta(j)) * cur.MX.col(j).norm();
      out(j) = denom > 0.0 ? R.col(j).norm() / denom : R.col(j).norm();
    }
    return out;
  };

  auto result_from = [&](int iterations) {
    Matrix Xk = cur.X.leftCols(k);
    Vector lk = sgn * theta.head(k);
    EigenResult r = finalize_eigenpairs(std::move(Xk), std::move(lk), which, M,
                                        opt.degeneracy);
    r.iterations = iterations;
    return r;
  };

  for (int iter = 0; iter <= opt.maxiter; ++iter) {
    const Matrix R = cur.AX - cur.MX * theta.asDiagonal();
    const Vector res = relative_residuals(R);
    if (res.head(k).maxCoeff() <= opt.tol) return result_from(iter);
    if (iter == opt.maxiter)
      throw EigMaxIterExceeded(result_from(iter), res.head(k).maxCoeff());

    std::vector<Index> active;
    for (Index j = 0; j < m; ++j)
      if (res(j) > opt.tol) active.push_back(j);
    const Index na = static_cast<Index>(active.size());

    Matrix W(n, na);
    for (Index c = 0; c < na; ++c) W.col(c) = R.col(active[static_cast<std::size_t>(c)]);
    if (opt.preconditioner) W = opt.preconditioner(W);
    // Remove the X component in the M inner product before expanding.
    W -= cur.X * (cur.MX.transpose() * W);
    const Matrix AW = applyA(W);
    const Matrix MW = M.apply_batch(W);

    const bool have_p = P.cols() == m;
    const Index np = have_p ? na : 0;
    Matrix S(n, m + na + np), AS(n, m + na + np), MS(n, m + na + np);
    S << cur.X, W, Matrix(n, np);
    AS << cur.AX, AW, Matrix(n, np);
    MS << cur.MX, MW, Matrix(n, np);
    if (have_p) {
      for (Index c = 0; c < na; ++c) {
        const Index j = active[static_cast<std::size_t>(c)];
        S.col(m + na + c) = P.col(j);
        AS.col(m + na + c) = AP.col(j);
        MS.col(m + na + c) = MP.col(j);
      }
    }

    const Matrix T = orthonormalizing_transform(S, MS);
    if (T.cols() < m) {
      // Search space collapsed onto X; nothing further to gain.
      throw EigMaxIterExceeded(result_from(iter), res.head(k).maxCoeff());
    }
    Matrix H = T.transpose() * (S.transpose() * AS) * T;
    H = 0.5 * (H + H.transpose()).eval();
    Matrix G = T.transpose() * (S.transpose() * MS) * T;
    G = 0.5 * (G + G.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> rr(H, G);
    if (rr.info() != Eigen::Success)
      throw Error(ErrorKind::ConvergenceFailure, "Rayleigh-Ritz step failed");

    const Matrix Cm = T * rr.eigenvectors().leftCols(m);
    theta = rr.eigenvalues().head(m);

    const Index tail = S.cols() - m;
    P = S.rightCols(tail) * Cm.bottomRows(tail);
    AP = AS.rightCols(tail) * Cm.bottomRows(tail);
    MP = MS.rightCols(tail) * Cm.bottomRows(tail);
    cur.X = S * Cm;
    cur.AX = AS * Cm;
    cur.MX = MS * Cm;
    reorthonormalize(cur);
  }
  return result_from(opt.maxiter);  // unreachable
}

}  // namespace eigengrad
