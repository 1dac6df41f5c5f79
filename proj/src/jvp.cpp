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

#include "eigengrad/jvp.hpp"

#include <algorithm>
#include <cmath>

namespace eigengrad {

SylvesterSolution solve(const SylvesterProblem& p, const DerivativeOptions& o) {
  return o.solver == SolverKind::Dense ? solve_dense(p, o.sylvester)
                                       : solve_iterative(p, o.sylvester);
}

namespace {

void check_dims(const EigenResult& eig, const TangentInput& t) {
  if (!t.Aprime || !t.Mprime)
    throw Error(ErrorKind::InvalidArgument, "tangent operators must be set");
  if (t.Aprime->dim() != eig.dim() || t.Mprime->dim() != eig.dim())
    throw Error(ErrorKind::DimensionMismatch, "tangent size differs from the pencil");
}

ValidityCheck masked_check(const Matrix& full, const Matrix& D, double tol_cond) {
  const Index k = D.rows();
  const Matrix mask = D - Matrix::Identity(k, k);
  ValidityCheck c;
  c.defect = mask.cwiseProduct(full).cwiseAbs().maxCoeff();
  c.tolerance = tol_cond * std::max(1.0, full.cwiseAbs().maxCoeff());
  c.ok = c.defect <= c.tolerance;
  return c;
}

}  // namespace

Matrix tangent_coupling(const EigenResult& eig, const TangentInput& t) {
  check_dims(eig, t);
  const Matrix v = t.Aprime->apply_batch(eig.X) -
                   t.Mprime->apply_batch(eig.X) * eig.lambdas.asDiagonal();
  return eig.X.transpose() * v;
}

ValidityCheck check_forward_validity(const EigenResult& eig,
                                     const TangentInput& t, double tol_cond) {
  return masked_check(tangent_coupling(eig, t), eig.D, tol_cond);
}

ValidityCheck check_separable_validity(const EigenResult& eig,
                                       const TangentInput& t,
                                       double tol_cond) {
  check_dims(eig, t);
  const Matrix xa = eig.X.transpose() * t.Aprime->apply_batch(eig.X);
  const Matrix xm = eig.X.transpose() * t.Mprime->apply_batch(eig.X) *
                    eig.lambdas.asDiagonal();
  const ValidityCheck a = masked_check(xa, eig.D, tol_cond);
  const ValidityCheck m = masked_check(xm, eig.D, tol_cond);
  ValidityCheck c;
  c.defect = std::max(a.defect, m.defect);
  c.tolerance = std::min(a.tolerance, m.tolerance);
  c.ok = a.ok && m.ok;
  return c;
}

Vector eigenvalue_jvp(const EigenResult& eig, const TangentInput& t) {
  return tangent_coupling(eig, t).diagonal();
}

TangentOutput eigenvector_jvp(const SymmetricOperator& A,
                              const SymmetricOperator& M,
                              const EigenResult& eig, const TangentInput& t,
                              const DerivativeOptions& options) {
  check_dims(eig, t);
  if (A.dim() != eig.dim() || M.dim() != eig.dim())
    throw Error(ErrorKind::DimensionMismatch, "pencil size differs from eigenpairs");

  const Matrix& X = eig.X;
  const Matrix mpx = t.Mprime->apply_batch(X);
  const Matrix vprime = t.Aprime->apply_batch(X) - mpx * eig.lambdas.asDiagonal();
  const Matrix coupling = X.transpose() * vprime;

  TangentOutput out;
  const ValidityCheck validity = masked_check(coupling, eig.D, options.tol_cond);
  out.validity_defect = validity.defect;
  if (!validity.ok && !options.force)
    throw ValidityViolated("forward", validity.defect, validity.tolerance);

  out.lambda_prime = coupling.diagonal();

  Matrix rhs = project_rhs(vprime, X, M, eig.groups);
  const SylvesterSolution ys = solve(make_problem(A, M, eig, std::move(rhs)), options);
  const Matrix& Y = ys.Y;

  const Vector half_mdiag = 0.5 * (X.transpose() * mpx).diagonal();
  const Matrix xmy = X.transpose() * M.apply_batch(Y);
  out.X_prime = -X * half_mdiag.asDiagonal();
  out.X_prime -= Y;
  out.X_prime += X * eig.D.cwiseProduct(xmy);
  return out;
}

TangentOutput jvp(const SymmetricOperator& A, const SymmetricOperator& M,
                  const EigenResult& eig, const TangentInput& t,
                  const DerivativeOptions& options) {
  return eigenvector_jvp(A, M, eig, t, options);
}

Matrix projector_jvp(const SymmetricOperator& M, const SymmetricOperator& Mprime,
                     const EigenResult& eig, const Matrix& X_prime, int group) {
  const auto& members = eig.groups.at(static_cast<std::size_t>(group));
  const Index n = eig.dim();
  Matrix Xg(n, static_cast<Index>(members.size()));
  Matrix Xg_prime(n, Xg.cols());
  for (std::size_t c = 0; c < members.size(); ++c) {
    Xg.col(static_cast<Index>(c)) = eig.X.col(members[c]);
    Xg_prime.col(static_cast<Index>(c)) = X_prime.col(members[c]);
  }
  // (X_g X_g^T M)' = X_g' X_g^T M + X_g X_g'^T M + X_g X_g^T M'
  const Matrix MXg = M.apply_batch(Xg);
  const Matrix MpXg = Mprime.apply_batch(Xg);
  return Xg_prime * MXg.transpose() + Xg * (M.apply_batch(Xg_prime)).transpose() +
         Xg * MpXg.transpose();
}

}  // namespace eigengrad
