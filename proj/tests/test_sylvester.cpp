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

#include <doctest.h>

#include "eigengrad/cli/generate.hpp"
#include "eigengrad/cli/sampling.hpp"
#include "eigengrad/oracle.hpp"
#include "eigengrad/sylvester.hpp"
#include "helpers.hpp"

using namespace eigengrad;
using namespace testing;

namespace {

SylvesterProblem diag_problem(const DenseSymmetric& A, const DenseSymmetric& M, double lambda,
                              const Matrix& X, std::vector<int> group, const Vector& b) {
  return SylvesterProblem{A, M, Vector::Constant(1, lambda), b, X, {std::move(group)}};
}

using Solver = SylvesterSolution (*)(const SylvesterProblem&, const SylvesterOptions&);

}  // namespace

TEST_CASE("shift solves on diagonal pencils") {
  const DenseSymmetric I3 = make_dense(Matrix::Identity(3, 3));
  for (Solver s : {&solve_dense, &solve_iterative}) {
    const DenseSymmetric A = make_dense(diag({1, 2, 3}));
    const SylvesterSolution a = s(diag_problem(A, I3, 1.0, unit(3, 0), {0}, unit(3, 1)), {});
    CHECK(max_abs(a.Y - unit(3, 1)) <= 1e-12);

    // The degenerate pair spans e1, e2; column 0 of the problem uses the group.
    const DenseSymmetric B = make_dense(diag({2, 2, 5}));
    SylvesterProblem p{B, I3, Vector::Constant(2, 2.0), Matrix::Zero(3, 2), Matrix::Identity(3, 2),
                       {{0, 1}}};
    p.B.col(0) = unit(3, 2);
    const SylvesterSolution b = s(p, {});
    CHECK(max_abs(b.Y.col(0) - unit(3, 2) / 3.0) <= 1e-12);
    CHECK(std::abs(b.Y(0, 0)) <= 1e-14);
    CHECK(std::abs(b.Y(1, 0)) <= 1e-14);

    p.B.col(0) = unit(3, 0);
    try {
      s(p, {});
      FAIL("expected NotSolvable");
    } catch (const NotSolvable& e) {
      CHECK(e.kind() == ErrorKind::NotSolvable);
      CHECK(e.column() == 0);
      CHECK(e.defect() > 0.5);
    }
  }
}

TEST_CASE("zero right-hand side gives zero with no iterations") {
  const DenseSymmetric A = make_dense(diag({1, 2, 3}));
  const DenseSymmetric I3 = make_dense(Matrix::Identity(3, 3));
  const SylvesterSolution s =
      solve_iterative(diag_problem(A, I3, 1.0, unit(3, 0), {0}, Vector::Zero(3)), {});
  CHECK(s.Y.isZero(0.0));
  CHECK(s.iterations[0] == 0);
}

TEST_CASE("project_rhs examples") {
  const auto I3 = op(Matrix::Identity(3, 3));
  CHECK(project_rhs(unit(3, 0), unit(3, 0), *I3, {{0}}).isZero(0.0));
  CHECK(project_rhs(unit(3, 1), unit(3, 0), *I3, {{0}}) == unit(3, 1));
  const Matrix b = unit(3, 0) + unit(3, 2);
  Matrix B(3, 2);
  B << b, b;
  const Matrix P = project_rhs(B, Matrix::Identity(3, 2), *I3, {{0, 1}});
  CHECK(P.col(0) == unit(3, 2));
}

TEST_CASE("dense and iterative agree and match the series on random pencils") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cli::GenerateConfig g;
    g.n = 30;
    g.spectrum = cli::parse_degeneracy(seed % 2 ? "1x2" : "");
    g.seed = seed;
    const cli::Pencil pencil = cli::generate_pencil(g);
    const EigenResult eig = eig_dense(pencil.A, pencil.M, 4);
    cli::Rng rng(seed + 100);
    const Matrix B = project_rhs(cli::random_gaussian(30, 4, rng), eig.X, pencil.M, eig.groups);
    const SylvesterProblem p = make_problem(pencil.A, pencil.M, eig, B);
    const SylvesterSolution d = solve_dense(p);
    const SylvesterSolution it = solve_iterative(p);
    CHECK(max_abs(d.Y - it.Y) / max_abs(d.Y) <= 1e-9);
    for (Index j = 0; j < 4; ++j) CHECK(it.residuals(j) <= 1e-10);

    // Gauge: orthogonal to the shift's group in the M inner product.
    for (int j = 0; j < 4; ++j)
      CHECK(max_abs(eig.group_block_of(j).transpose() * pencil.M.apply(d.Y.col(j))) <= 1e-10);

    // Series: sum over i outside g(lambda_j) of u_i u_i^T b / (E_i - lambda_j).
    const oracle::FullSpectrum fs = oracle::full_spectrum(pencil.A, pencil.M);
    for (int j = 0; j < 4; ++j) {
      const Vector ref = oracle::pseudo_inverse_apply(fs, eig.lambdas(j), B.col(j), 1e-6);
      CHECK(max_abs(d.Y.col(j) - ref) / std::max(1.0, max_abs(ref)) <= 1e-10);
    }

    // Linearity in B.
    const Matrix B2 = project_rhs(cli::random_gaussian(30, 4, rng), eig.X, pencil.M, eig.groups);
    const SylvesterSolution d2 = solve_dense(make_problem(pencil.A, pencil.M, eig, B2));
    const SylvesterSolution d12 =
        solve_dense(make_problem(pencil.A, pencil.M, eig, 2.0 * B - 3.0 * B2));
    CHECK(max_abs(d12.Y - (2.0 * d.Y - 3.0 * d2.Y)) <= 1e-9 * max_abs(d12.Y));
  }
}

TEST_CASE("iterative solve on n = 100 reaches tol_solv") {
  cli::GenerateConfig g;
  g.n = 100;
  g.seed = 4;
  const cli::Pencil pencil = cli::generate_pencil(g);
  const EigenResult eig = eig_dense(pencil.A, pencil.M, 3);
  cli::Rng rng(1);
  const Matrix B = project_rhs(cli::random_gaussian(100, 3, rng), eig.X, pencil.M, eig.groups);
  const SylvesterSolution s = solve_iterative(make_problem(pencil.A, pencil.M, eig, B));
  for (Index j = 0; j < 3; ++j) CHECK(s.residuals(j) <= 1e-10);
}

TEST_CASE("iterative solve reports MaxIterExceeded with the best iterate") {
  cli::GenerateConfig g;
  g.n = 60;
  g.seed = 2;
  const cli::Pencil pencil = cli::generate_pencil(g);
  const EigenResult eig = eig_dense(pencil.A, pencil.M, 2);
  cli::Rng rng(1);
  const Matrix B = project_rhs(cli::random_gaussian(60, 2, rng), eig.X, pencil.M, eig.groups);
  SylvesterOptions o;
  o.maxiter = 2;
  try {
    solve_iterative(make_problem(pencil.A, pencil.M, eig, B), o);
    FAIL("expected MaxIterExceeded");
  } catch (const SolveMaxIterExceeded& e) {
    CHECK(e.kind() == ErrorKind::MaxIterExceeded);
    CHECK(e.best().Y.cols() == 2);
  }
}
