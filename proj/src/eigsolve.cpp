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

#include "eigengrad/eigsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace eigengrad {

Degeneracy build_degeneracy(const Vector& lambdas, double tol_rel,
                            double tol_abs) {
  const int k = static_cast<int>(lambdas.size());
  Degeneracy out;
  out.D = Matrix::Zero(k, k);
  out.group_of.assign(static_cast<std::size_t>(k), -1);
  if (k == 0) return out;

  const double tol = tol_abs + tol_rel * lambdas.cwiseAbs().maxCoeff();
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lambdas(a) < lambdas(b); });

  // Chain-merge neighbours in sorted order.
  std::vector<std::vector<int>> chains;
  chains.push_back({order[0]});
  for (std::size_t s = 1; s < order.size(); ++s) {
    if (std::abs(lambdas(order[s]) - lambdas(order[s - 1])) <= tol)
      chains.back().push_back(order[s]);
    else
      chains.push_back({order[s]});
  }
  for (auto& c : chains) std::sort(c.begin(), c.end());
  std::sort(chains.begin(), chains.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  for (std::size_t g = 0; g < chains.size(); ++g) {
    for (int i : chains[g]) {
      out.group_of[static_cast<std::size_t>(i)] = static_cast<int>(g);
      for (int j : chains[g]) out.D(i, j) = 1.0;
    }
  }
  out.groups = std::move(chains);
  return out;
}

Matrix EigenResult::group_block_of(int j) const {
  const auto& members = group_members_of(j);
  Matrix block(X.rows(), static_cast<Index>(members.size()));
  for (std::size_t c = 0; c < members.size(); ++c)
    block.col(static_cast<Index>(c)) = X.col(members[c]);
  return block;
}

EigMaxIterExceeded::EigMaxIterExceeded(EigenResult best, double residual)
    : Error(ErrorKind::MaxIterExceeded,
            "iterative eigensolver hit maxiter with relative residual " +
                std::to_string(residual)),
      best_(std::move(best)),
      residual_(residual) {}

namespace {

void fix_sign(Eigen::Ref<Vector> x) {
  Index best = 0;
  double mag = -1.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > mag) {
      mag = std::abs(x(i));
      best = i;
    }
  }
  if (x(best) < 0.0) x = -x;
}

}  // namespace

EigenResult finalize_eigenpairs(Matrix X, Vector lambdas, Which which,
                                const SymmetricOperator& M,
                                DegeneracyTolerance degeneracy) {
  const Index k = lambdas.size();
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return lambdas(a) < lambdas(b); });

  EigenResult r;
  r.k = static_cast<int>(k);
  r.which = which;
  r.X.resize(X.rows(), k);
  r.lambdas.resize(k);
  for (Index c = 0; c < k; ++c) {
    r.X.col(c) = X.col(order[static_cast<std::size_t>(c)]);
    r.lambdas(c) = lambdas(order[static_cast<std::size_t>(c)]);
  }

  Degeneracy deg = build_degeneracy(r.lambdas, degeneracy.rel, degeneracy.abs);
  r.D = std::move(deg.D);
  r.groups = std::move(deg.groups);
  r.group_of = std::move(deg.group_of);

  // Modified Gram-Schmidt in the M inner product, one group at a time.
  for (const auto& group : r.groups) {
    for (std::size_t a = 0; a < group.size(); ++a) {
      auto xa = r.X.col(group[a]);
      for (std::size_t b = 0; b < a; ++b) {
        const auto xb = r.X.col(group[b]);
        xa -= xb.dot(M.apply(xa)) * xb;
      }
      xa /= std::sqrt(xa.dot(M.apply(xa)));
    }
  }
  for (Index c = 0; c < k; ++c) fix_sign(r.X.col(c));
  return r;
}

EigenResult eig_dense(const DenseSymmetric& A, const DenseSymmetric& M, int k,
                      Which which, DegeneracyTolerance degeneracy) {
  const Index n = A.dim();
  if (M.dim() != n)
    throw Error(ErrorKind::DimensionMismatch, "A and M differ in size");
  // The dense path can return the whole spectrum, so k = n is allowed here.
  if (k < 1 || k > n)
    throw Error(ErrorKind::InvalidArgument, "need 1 <= k <= n");

  Eigen::LLT<Matrix> llt(M.entries());
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "Cholesky of M failed");
  const auto L = llt.matrixL();
  // C = L^-1 A L^-T is symmetric with the pencil's eigenvalues.
  Matrix C = L.solve(A.entries());
  C = L.solve(C.transpose()).eval();
  C = 0.5 * (C + C.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(C);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "dense symmetric QR iteration failed");

  const Index first = which == Which::Smallest ? 0 : n - k;
  Matrix W = es.eigenvectors().middleCols(first, k);
  Matrix X = llt.matrixU().solve(W);
  Vector lambdas = es.eigenvalues().segment(first, k);
  return finalize_eigenpairs(std::move(X), std::move(lambdas), which, M,
                             degeneracy);
}

double operator_norm_estimate(const SymmetricOperator& A,
                              const Eigen::Ref<const Matrix>& probes,
                              int random_probes) {
  double est = 0.0;
  if (probes.cols() > 0) {
    const Matrix ap = A.apply_batch(probes);
    for (Index j = 0; j < probes.cols(); ++j) {
      const double nv = probes.col(j).norm();
      if (nv > 0.0) est = std::max(est, ap.col(j).norm() / nv);
    }
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  for (int t = 0; t < random_probes; ++t) {
    Vector v(A.dim());
    for (Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
    est = std::max(est, A.apply(v).norm() / v.norm());
  }
  return est;
}

EigenQuality assess(const SymmetricOperator& A, const SymmetricOperator& M,
                    const EigenResult& eig) {
  const Matrix ax = A.apply_batch(eig.X);
  const Matrix mx = M.apply_batch(eig.X);
  const Matrix resid = ax - mx * eig.lambdas.asDiagonal();
  const double scale =
      std::max(operator_norm_estimate(A, eig.X), 1e-300) * eig.X.norm();
  EigenQuality q;
  q.residual = resid.norm() / scale;
  q.orthonormality =
      (eig.X.transpose() * mx - Matrix::Identity(eig.k, eig.k)).cwiseAbs().maxCoeff();
  return q;
}

}  // namespace eigengrad
