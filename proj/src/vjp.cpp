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

#include "eigengrad/vjp.hpp"

#include <algorithm>

namespace eigengrad {

namespace {

void check_dims(const EigenResult& eig, const CotangentInput& c) {
  if (c.lambda_bar.size() != eig.k || c.X_bar.rows() != eig.dim() ||
      c.X_bar.cols() != eig.k)
    throw Error(ErrorKind::DimensionMismatch, "cotangent shape differs from eigenpairs");
  if (!c.lambda_bar.allFinite() || !c.X_bar.allFinite())
    throw Error(ErrorKind::NonFinite, "cotangent entries must be finite");
}

}  // namespace

ValidityCheck check_backward_validity(const EigenResult& eig,
                                      const CotangentInput& c,
                                      double tol_cond) {
  check_dims(eig, c);
  const Matrix xtxb = eig.X.transpose() * c.X_bar;
  const Matrix antisym = xtxb - xtxb.transpose();
  const Matrix mask = eig.D - Matrix::Identity(eig.k, eig.k);
  ValidityCheck v;
  v.defect = mask.cwiseProduct(antisym).cwiseAbs().maxCoeff();
  v.tolerance = tol_cond * std::max(1.0, xtxb.cwiseAbs().maxCoeff());
  v.ok = v.defect <= v.tolerance;
  return v;
}

CotangentOutput vjp(const SymmetricOperator& A, const SymmetricOperator& M,
                    const EigenResult& eig, const CotangentInput& c,
                    const DerivativeOptions& options) {
  check_dims(eig, c);
  if (A.dim() != eig.dim() || M.dim() != eig.dim())
    throw Error(ErrorKind::DimensionMismatch, "pencil size differs from eigenpairs");

  CotangentOutput out;
  const ValidityCheck validity = check_backward_validity(eig, c, options.tol_cond);
  out.validity_defect = validity.defect;
  if (!validity.ok && !options.force)
    throw ValidityViolated("backward", validity.defect, validity.tolerance);

  const Matrix& X = eig.X;
  const Vector& lam = eig.lambdas;
  const Vector& lbar = c.lambda_bar;

  out.A_bar = X * lbar.asDiagonal() * X.transpose();
  out.M_bar = -X * lam.cwiseProduct(lbar).asDiagonal() * X.transpose();
  if (c.X_bar.isZero(0.0)) return out;

  // The group projection is X_bar - M X [D o (X^T X_bar)].
  Matrix rhs = project_rhs(c.X_bar, X, M, eig.groups);
  const SylvesterSolution ys = solve(make_problem(A, M, eig, std::move(rhs)), options);
  const Matrix& Ybar = ys.Y;

  const Vector ybar_par = (X.transpose() * M.apply_batch(Ybar)).diagonal();
  const Matrix Vbar = Ybar - X * ybar_par.asDiagonal();
  const Vector xbar_par = (X.transpose() * c.X_bar).diagonal();

  out.A_bar -= Vbar * X.transpose();
  out.M_bar -= 0.5 * X * xbar_par.asDiagonal() * X.transpose();
  out.M_bar += Vbar * lam.asDiagonal() * X.transpose();
  return out;
}

CotangentOutput vjp_symmetrized(const SymmetricOperator& A,
                                const SymmetricOperator& M,
                                const EigenResult& eig, const CotangentInput& c,
                                const DerivativeOptions& options) {
  CotangentOutput out = vjp(A, M, eig, c, options);
  out.A_bar = 0.5 * (out.A_bar + out.A_bar.transpose()).eval();
  out.M_bar = 0.5 * (out.M_bar + out.M_bar.transpose()).eval();
  return out;
}

}  // namespace eigengrad
