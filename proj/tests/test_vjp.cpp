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

#include "eigengrad/cli/checks.hpp"
#include "eigengrad/cli/generate.hpp"
#include "eigengrad/cli/sampling.hpp"
#include "eigengrad/vjp.hpp"
#include "helpers.hpp"

using namespace eigengrad;
using namespace testing;

namespace {

struct Fixture {
  DenseSymmetric A;
  DenseSymmetric M;
  EigenResult eig;
};

Fixture random_fixture(int n, int k, const char* spec, std::uint64_t seed) {
  cli::GenerateConfig g;
  g.n = n;
  g.spectrum = cli::parse_degeneracy(spec);
  g.seed = seed;
  cli::Pencil p = cli::generate_pencil(g);
  EigenResult eig = eig_dense(p.A, p.M, k);
  return {std::move(p.A), std::move(p.M), std::move(eig)};
}

Fixture diag_fixture(std::initializer_list<double> a, int k) {
  DenseSymmetric A = make_dense(diag(a));
  DenseSymmetric M = make_dense(Matrix::Identity(A.dim(), A.dim()));
  EigenResult eig = eig_dense(A, M, k);
  return {std::move(A), std::move(M), std::move(eig)};
}

}  // namespace

TEST_CASE("backward validity examples") {
  const Fixture nd = diag_fixture({1, 2, 3}, 2);
  cli::Rng rng(1);
  CHECK(check_backward_validity(nd.eig, {Vector::Ones(2), cli::random_gaussian(3, 2, rng)}).defect ==
        0.0);

  const Fixture dg = diag_fixture({2, 2, 5}, 2);
  Matrix S(2, 2);
  S << 1, 2, 2, 3;
  CHECK(check_backward_validity(dg.eig, {Vector::Zero(2), dg.eig.X * S}).defect <= 1e-15);

  Matrix Xbar = Matrix::Zero(3, 2);
  Xbar.col(1) = dg.eig.X.col(0);
  const ValidityCheck bad = check_backward_validity(dg.eig, {Vector::Zero(2), Xbar});
  CHECK_FALSE(bad.ok);
  CHECK(bad.defect == doctest::Approx(1.0));
}

TEST_CASE("eigenvalue-only cotangent on a diagonal pencil") {
  const Fixture f = diag_fixture({1, 2, 3}, 1);
  const CotangentOutput out = vjp(f.A, f.M, f.eig, {Vector::Ones(1), Matrix::Zero(3, 1)});
  const Matrix e11 = unit(3, 0) * unit(3, 0).transpose();
  CHECK(max_abs(out.A_bar - e11) <= 1e-15);
  CHECK(max_abs(out.M_bar + e11) <= 1e-15);
  const CotangentOutput sym = vjp_symmetrized(f.A, f.M, f.eig, {Vector::Ones(1), Matrix::Zero(3, 1)});
  CHECK(max_abs(sym.A_bar - out.A_bar) == 0.0);
  CHECK(max_abs(sym.M_bar - out.M_bar) == 0.0);

  const CotangentOutput zero = vjp(f.A, f.M, f.eig, {Vector::Zero(1), Matrix::Zero(3, 1)});
  CHECK(zero.A_bar.isZero(0.0));
  CHECK(zero.M_bar.isZero(0.0));
}

TEST_CASE("invalid cotangents are rejected unless forced") {
  const Fixture dg = diag_fixture({2, 2, 5}, 2);
  Matrix Xbar = Matrix::Zero(3, 2);
  Xbar.col(1) = dg.eig.X.col(0);
  try {
    vjp(dg.A, dg.M, dg.eig, {Vector::Zero(2), Xbar});
    FAIL("expected ValidityViolated");
  } catch (const ValidityViolated& e) {
    CHECK(e.defect() >= 0.5);
  }
  DerivativeOptions o;
  o.force = true;
  CHECK(vjp(dg.A, dg.M, dg.eig, {Vector::Zero(2), Xbar}, o).A_bar.allFinite());
}

TEST_CASE("adjoint pairing, fast path, linearity and symmetrization") {
  const char* specs[] = {"", "2x2", "1x3,4x1"};
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    const Fixture f = random_fixture(9, 4, specs[seed % 3], seed);
    cli::Rng rng(seed + 31);
    for (SolverKind s : {SolverKind::Dense, SolverKind::Iterative}) {
      DerivativeOptions o;
      o.solver = s;
      for (int draw = 0; draw < 20; ++draw) {
        const cli::DenseTangent t = cli::random_valid_tangent(f.eig, f.M.entries(), rng);
        const CotangentInput c = cli::random_valid_cotangent(f.eig, rng);
        REQUIRE(check_backward_validity(f.eig, c).defect <= 1e-10);
        const TangentOutput fwd = jvp(f.A, f.M, f.eig, t.as_input(), o);
        CHECK(cli::pairing_error(fwd, c, vjp(f.A, f.M, f.eig, c, o), t) <= 1e-8);
        CHECK(cli::pairing_error(fwd, c, vjp_symmetrized(f.A, f.M, f.eig, c, o), t) <= 1e-8);
      }
    }

    // Eigenvalue-only cotangents: A_bar = X Lbar X^T, and the fast path equals
    // the general path taken with a vanishing X_bar.
    const Vector lbar = cli::random_gaussian(4, 1, rng);
    const CotangentOutput fast = vjp(f.A, f.M, f.eig, {lbar, Matrix::Zero(9, 4)});
    CHECK(max_abs(fast.A_bar - f.eig.X * lbar.asDiagonal() * f.eig.X.transpose()) <= 1e-14);
    const CotangentOutput general = vjp(f.A, f.M, f.eig, {lbar, Matrix::Constant(9, 4, 1e-300)});
    CHECK(max_abs(general.A_bar - fast.A_bar) <= 1e-13);
    CHECK(max_abs(general.M_bar - fast.M_bar) <= 1e-13);

    // Linearity in the cotangent.
    const CotangentInput c1 = cli::random_valid_cotangent(f.eig, rng);
    const CotangentInput c2 = cli::random_valid_cotangent(f.eig, rng);
    const CotangentInput c12{2.0 * c1.lambda_bar + c2.lambda_bar, 2.0 * c1.X_bar + c2.X_bar};
    const CotangentOutput r1 = vjp(f.A, f.M, f.eig, c1), r2 = vjp(f.A, f.M, f.eig, c2);
    const CotangentOutput r12 = vjp(f.A, f.M, f.eig, c12);
    CHECK(max_abs(r12.A_bar - 2.0 * r1.A_bar - r2.A_bar) <= 1e-10 * max_abs(r12.A_bar));
    CHECK(max_abs(r12.M_bar - 2.0 * r1.M_bar - r2.M_bar) <= 1e-10 * max_abs(r12.M_bar));
  }
}

TEST_CASE("the positive X Lambda Lbar X^T term in M_bar breaks the pairing") {
  // The mass-matrix gradient contains -X Lambda Lbar X^T. Flipping the sign of
  // that term must be caught by the adjoint identity.
  const Fixture f = random_fixture(8, 3, "", 11);
  cli::Rng rng(4);
  double worst_flipped = 0.0, worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const cli::DenseTangent t = cli::random_valid_tangent(f.eig, f.M.entries(), rng);
    const CotangentInput c = cli::random_valid_cotangent(f.eig, rng);
    const TangentOutput fwd = jvp(f.A, f.M, f.eig, t.as_input());
    CotangentOutput back = vjp(f.A, f.M, f.eig, c);
    worst = std::max(worst, cli::pairing_error(fwd, c, back, t));
    back.M_bar += 2.0 * f.eig.X * (f.eig.lambdas.cwiseProduct(c.lambda_bar)).asDiagonal() *
                  f.eig.X.transpose();
    worst_flipped = std::max(worst_flipped, cli::pairing_error(fwd, c, back, t));
  }
  CHECK(worst <= 1e-8);
  CHECK(worst_flipped >= 1e-2);
}
