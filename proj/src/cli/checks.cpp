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

#include "eigengrad/cli/checks.hpp"

#include <algorithm>
#include <cmath>

namespace eigengrad::cli {

double pairing_error(const TangentOutput& forward, const CotangentInput& c,
                     const CotangentOutput& backward, const DenseTangent& t) {
  const double lhs = c.lambda_bar.dot(forward.lambda_prime) +
                     c.X_bar.cwiseProduct(forward.X_prime).sum();
  const double rhs = backward.A_bar.cwiseProduct(t.Aprime).sum() +
                     backward.M_bar.cwiseProduct(t.Mprime).sum();
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

double scaled_max_diff(const Matrix& a, const Matrix& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

FdComparison compare_to_fd(const EigenResult& eig, const SymmetricOperator& M,
                           const TangentInput& t, const TangentOutput& analytic,
                           const oracle::FiniteDifferenceJvp& fd) {
  FdComparison cmp;
  double lam_abs = 0.0;
  for (const auto& g : eig.groups) {
    std::vector<double> an, nu;
    for (int j : g) {
      an.push_back(analytic.lambda_prime(j));
      nu.push_back(fd.lambda_prime(j));
    }
    std::sort(an.begin(), an.end());
    std::sort(nu.begin(), nu.end());
    for (std::size_t m = 0; m < an.size(); ++m) lam_abs = std::max(lam_abs, std::abs(an[m] - nu[m]));
  }
  const double lam_scale = std::max(analytic.lambda_prime.cwiseAbs().maxCoeff(), 1e-300);
  cmp.eigenvalues = lam_abs / lam_scale;

  double vec_abs = 0.0, vec_scale = 1.0;
  for (int j = 0; j < eig.k; ++j) {
    if (!fd.column_valid[static_cast<std::size_t>(j)]) continue;
    cmp.has_singletons = true;
    vec_abs = std::max(vec_abs, (analytic.X_prime.col(j) - fd.X_prime.col(j)).cwiseAbs().maxCoeff());
    vec_scale = std::max(vec_scale, analytic.X_prime.col(j).cwiseAbs().maxCoeff());
  }
  cmp.eigenvectors = vec_abs / vec_scale;
  cmp.combined = vec_abs;

  for (std::size_t g = 0; g < eig.groups.size(); ++g) {
    const Matrix p = projector_jvp(M, *t.Mprime, eig, analytic.X_prime, static_cast<int>(g));
    cmp.projectors = std::max(cmp.projectors, scaled_max_diff(fd.projector_prime[g], p));
    cmp.combined = std::max(cmp.combined, (fd.projector_prime[g] - p).cwiseAbs().maxCoeff());
  }
  return cmp;
}

double differentiated_equation_residual(const SymmetricOperator& A,
                                        const SymmetricOperator& M,
                                        const EigenResult& eig,
                                        const TangentInput& t,
                                        const TangentOutput& out) {
  const Matrix& X = eig.X;
  const auto lam = eig.lambdas.asDiagonal();
  const Matrix t1 = t.Aprime->apply_batch(X);
  const Matrix t2 = A.apply_batch(out.X_prime);
  const Matrix t3 = t.Mprime->apply_batch(X) * lam;
  const Matrix t4 = M.apply_batch(out.X_prime) * lam;
  const Matrix t5 = M.apply_batch(X) * out.lambda_prime.asDiagonal();
  const double scale = t1.norm() + t2.norm() + t3.norm() + t4.norm() + t5.norm();
  return (t1 + t2 - t3 - t4 - t5).norm() / std::max(scale, 1e-300);
}

double differentiated_normalization_residual(const SymmetricOperator& M,
                                             const EigenResult& eig,
                                             const TangentInput& t,
                                             const TangentOutput& out) {
  const Matrix& X = eig.X;
  const Matrix xmpx = X.transpose() * t.Mprime->apply_batch(X);
  const Matrix xmxp = X.transpose() * M.apply_batch(out.X_prime);
  const Matrix total = xmpx + xmxp + xmxp.transpose();
  return total.cwiseAbs().maxCoeff() / std::max(1.0, xmpx.cwiseAbs().maxCoeff());
}

}  // namespace eigengrad::cli
