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

#include "eigengrad/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace eigengrad::oracle {

namespace {

Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solve_pencil(const Matrix& A,
                                                              const Matrix& M) {
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::NotPositiveDefinite, "oracle: M is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(A, M);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "oracle: dense pencil solve failed");
  return es;
}

double group_tolerance(const EigenResult& eig, const SeriesOptions& o) {
  return o.group_tol_rel * eig.lambdas.cwiseAbs().maxCoeff();
}

// Same-group couplings x_i^T K_j x_j, evaluated pair by pair.
double max_group_coupling(const EigenResult& eig, const Matrix& coupling) {
  double worst = 0.0;
  for (const auto& g : eig.groups)
    for (int i : g)
      for (int j : g)
        if (i != j) worst = std::max(worst, std::abs(coupling(i, j)));
  return worst;
}

}  // namespace

FullSpectrum full_spectrum(const DenseSymmetric& A, const DenseSymmetric& M,
                           Index cap) {
  if (A.dim() != M.dim())
    throw Error(ErrorKind::DimensionMismatch, "oracle: A and M differ in size");
  if (A.dim() > cap)
    throw Error(ErrorKind::InvalidArgument, "oracle: dimension exceeds the dense cap");
  const auto es = solve_pencil(A.entries(), M.entries());
  return FullSpectrum{es.eigenvectors(), es.eigenvalues()};
}

Vector pseudo_inverse_apply(const FullSpectrum& fs, double lambda,
                            const Vector& v, double group_tol) {
  Vector out = Vector::Zero(fs.U.rows());
  for (Index i = 0; i < fs.E.size(); ++i) {
    const double gap = fs.E(i) - lambda;
    if (std::abs(gap) <= group_tol) continue;
    out += fs.U.col(i) * (fs.U.col(i).dot(v) / gap);
  }
  return out;
}

TangentOutput jvp_series(const FullSpectrum& fs, const EigenResult& eig,
                         const TangentInput& t, const SeriesOptions& options) {
  const Index n = eig.dim();
  const int k = eig.k;
  const Matrix Ap = to_dense(*t.Aprime);
  const Matrix Mp = to_dense(*t.Mprime);
  const double gtol = group_tolerance(eig, options);

  Matrix coupling(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      coupling(i, j) = eig.X.col(i).dot((Ap - eig.lambdas(j) * Mp) * eig.X.col(j));
  const double defect = max_group_coupling(eig, coupling);
  const double tol = options.tol_cond * std::max(1.0, coupling.cwiseAbs().maxCoeff());
  if (defect > tol) throw ValidityViolated("forward (series)", defect, tol);

  TangentOutput out;
  out.validity_defect = defect;
  out.lambda_prime.resize(k);
  out.X_prime = Matrix::Zero(n, k);
  for (int j = 0; j < k; ++j) {
    const Vector xj = eig.X.col(j);
    const double lam = eig.lambdas(j);
    const Vector kx = (Ap - lam * Mp) * xj;
    out.lambda_prime(j) = xj.dot(kx);
    Vector xp = -0.5 * xj * xj.dot(Mp * xj);
    for (Index i = 0; i < n; ++i) {
      const double gap = fs.E(i) - lam;
      if (std::abs(gap) <= gtol) continue;
      xp -= fs.U.col(i) * (fs.U.col(i).dot(kx) / gap);
    }
    out.X_prime.col(j) = xp;
  }
  return out;
}

CotangentOutput vjp_series(const FullSpectrum& fs, const EigenResult& eig,
                           const CotangentInput& c, const SeriesOptions& options) {
  const Index n = eig.dim();
  const int k = eig.k;
  const double gtol = group_tolerance(eig, options);

  Matrix xtxb(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) xtxb(i, j) = eig.X.col(i).dot(c.X_bar.col(j));
  double defect = 0.0;
  for (const auto& g : eig.groups)
    for (int i : g)
      for (int j : g)
        if (i != j) defect = std::max(defect, std::abs(xtxb(i, j) - xtxb(j, i)));
  const double tol = options.tol_cond * std::max(1.0, xtxb.cwiseAbs().maxCoeff());
  if (defect > tol) throw ValidityViolated("backward (series)", defect, tol);

  CotangentOutput out;
  out.validity_defect = defect;
  out.A_bar = Matrix::Zero(n, n);
  out.M_bar = Matrix::Zero(n, n);
  for (int j = 0; j < k; ++j) {
    const Vector xj = eig.X.col(j);
    const Vector xbj = c.X_bar.col(j);
    const double lam = eig.lambdas(j);
    const double lbar = c.lambda_bar(j);

    Vector s = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      const double gap = fs.E(i) - lam;
      if (std::abs(gap) <= gtol) continue;
      s += fs.U.col(i) * (fs.U.col(i).dot(xbj) / gap);
    }
    const Matrix xxt = xj * xj.transpose();
    out.A_bar += lbar * xxt - s * xj.transpose();
    out.M_bar += (-lam * lbar - 0.5 * xj.dot(xbj)) * xxt + lam * s * xj.transpose();
  }
  return out;
}

FiniteDifferenceJvp finite_difference_jvp(const DenseSymmetric& A,
                                          const DenseSymmetric& M,
                                          const EigenResult& reference,
                                          const TangentInput& t, double step) {
  const Index n = A.dim();
  const int k = reference.k;
  const Matrix Ap = to_dense(*t.Aprime);
  const Matrix Mp = to_dense(*t.Mprime);

  // Separation guards: the retrieved block against the rest of the spectrum,
  // and distinct retrieved groups against each other.
  const auto es0 = solve_pencil(A.entries(), M.entries());
  const Vector& E = es0.eigenvalues();
  // First-order bound on how far any eigenvalue moves per unit step.
  auto spectral = [](const Matrix& S) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(S, Eigen::EigenvaluesOnly)
        .eigenvalues().cwiseAbs().maxCoeff();
  };
  const double m_min = Eigen::SelfAdjointEigenSolver<Matrix>(M.entries(), Eigen::EigenvaluesOnly)
                           .eigenvalues()(0);
  const double pert = (spectral(Ap) + E.cwiseAbs().maxCoeff() * spectral(Mp)) / m_min;
  const double guard = 10.0 * step * pert;
  if (k < n) {
    const bool smallest = reference.which == Which::Smallest;
    const double inner = smallest ? E(k - 1) : E(n - k);
    const double outer = smallest ? E(k) : E(n - k - 1);
    if (std::abs(outer - inner) <= guard)
      throw Error(ErrorKind::ClusterSplit, "retrieved block touches the rest of the spectrum");
  }
  for (std::size_t g = 1; g < reference.groups.size(); ++g) {
    const double a = reference.lambdas(reference.groups[g - 1].back());
    const double b = reference.lambdas(reference.groups[g].front());
    if (std::abs(b - a) <= guard)
      throw Error(ErrorKind::ClusterSplit, "distinct groups closer than the step allows");
  }

  auto perturbed = [&](double h) {
    return eig_dense(make_dense(A.entries() + h * Ap), make_dense(M.entries() + h * Mp),
                     k, reference.which);
  };
  const EigenResult e0 = eig_dense(A, M, k, reference.which);
  const EigenResult ep = perturbed(step);
  const EigenResult em = perturbed(-step);

  FiniteDifferenceJvp fd;
  fd.step = step;
  fd.lambda_prime.resize(k);
  fd.X_prime = Matrix::Zero(n, k);
  fd.column_valid.assign(static_cast<std::size_t>(k), false);

  const Matrix& M0 = M.entries();
  for (const auto& g : reference.groups) {
    const std::size_t size = g.size();
    if (size == 1) {
      const int j = g.front();
      fd.lambda_prime(j) = (ep.lambdas(j) - em.lambdas(j)) / (2.0 * step);
      const Vector xr = reference.X.col(j);
      const double op = xr.dot(M0 * ep.X.col(j));
      const double om = xr.dot(M0 * em.X.col(j));
      if (std::abs(op) < 0.5 || std::abs(om) < 0.5)
        throw Error(ErrorKind::GaugeAlignmentFailed, "eigenvector rotated beyond sign matching");
      const Vector xp = (op < 0 ? -1.0 : 1.0) * ep.X.col(j);
      const Vector xm = (om < 0 ? -1.0 : 1.0) * em.X.col(j);
      fd.X_prime.col(j) = (xp - xm) / (2.0 * step);
      fd.column_valid[static_cast<std::size_t>(j)] = true;
    } else {
      // Ascending branch m is (m)-th at +h and (size-1-m)-th at -h.
      for (std::size_t m = 0; m < size; ++m) {
        const int up = g[m];
        const int down = g[size - 1 - m];
        fd.lambda_prime(up) = ((ep.lambdas(up) - e0.lambdas(up)) +
                               (e0.lambdas(down) - em.lambdas(down))) /
                              (2.0 * step);
      }
    }
  }

  for (const auto& g : reference.groups) {
    auto projector = [&](const EigenResult& e, double h) {
      Matrix Xg(n, static_cast<Index>(g.size()));
      for (std::size_t c = 0; c < g.size(); ++c) Xg.col(static_cast<Index>(c)) = e.X.col(g[c]);
      return Matrix(Xg * Xg.transpose() * (M0 + h * Mp));
    };
    fd.projector_prime.push_back((projector(ep, step) - projector(em, -step)) / (2.0 * step));
  }
  return fd;
}

}  // namespace eigengrad::oracle
