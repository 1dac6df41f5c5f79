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
#include "eigengrad/oracle.hpp"
#include "helpers.hpp"

using namespace eigengrad;
using namespace testing;

namespace {

DenseSymmetric identity(Index n) { return make_dense(Matrix::Identity(n, n)); }

}  // namespace

TEST_CASE("full_spectrum examples and invariants") {
  const oracle::FullSpectrum d = oracle::full_spectrum(make_dense(diag({1, 2, 3})), identity(3));
  CHECK(max_abs(d.E - Vector::LinSpaced(3, 1, 3)) <= 1e-14);
  CHECK(max_abs(d.U.cwiseAbs() - Matrix::Identity(3, 3)) <= 1e-14);

  const oracle::FullSpectrum g =
      oracle::full_spectrum(make_dense(diag({2, 6})), make_dense(diag({1, 4})));
  CHECK(g.E(0) == doctest::Approx(1.5));
  CHECK(g.E(1) == doctest::Approx(2.0));
  CHECK(max_abs(g.U.col(0).cwiseAbs() - Vector::Unit(2, 1) / 2) <= 1e-14);

  cli::Rng rng(8);
  const Matrix M = cli::random_spd(8, rng);
  const oracle::FullSpectrum r =
      oracle::full_spectrum(make_dense(cli::random_symmetric(8, rng)), make_dense(M));
  CHECK(max_abs(r.U.transpose() * M * r.U - Matrix::Identity(8, 8)) <= 1e-10);
  CHECK(max_abs(r.U * r.U.transpose() - M.inverse()) <= 1e-10);
}

TEST_CASE("full_spectrum enforces the size cap") {
  try {
    oracle::full_spectrum(identity(5), identity(5), 4);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
}

TEST_CASE("pseudo_inverse_apply") {
  const oracle::FullSpectrum d = oracle::full_spectrum(make_dense(diag({1, 2, 3})), identity(3));
  CHECK(max_abs(oracle::pseudo_inverse_apply(d, 1.0, unit(3, 1), 1e-8) - unit(3, 1)) <= 1e-14);
  CHECK(max_abs(oracle::pseudo_inverse_apply(d, 1.0, unit(3, 0), 1e-8)) == 0.0);

  cli::Rng rng(3);
  const Matrix A = cli::random_symmetric(7, rng), M = cli::random_spd(7, rng);
  const oracle::FullSpectrum r = oracle::full_spectrum(make_dense(A), make_dense(M));
  const double lam = r.E(2);
  const Vector v1 = cli::random_gaussian(7, 1, rng), v2 = cli::random_gaussian(7, 1, rng);
  const Vector lin = oracle::pseudo_inverse_apply(r, lam, 3.0 * v1 - v2, 1e-8) -
                     3.0 * oracle::pseudo_inverse_apply(r, lam, v1, 1e-8) +
                     oracle::pseudo_inverse_apply(r, lam, v2, 1e-8);
  CHECK(max_abs(lin) <= 1e-10);

  // Identity on the M-orthogonal complement of the eigenspace.
  const Vector x = r.U.col(2);
  Vector w = cli::random_gaussian(7, 1, rng);
  w -= x * (x.dot(M * w));
  const Vector back = oracle::pseudo_inverse_apply(r, lam, (A - lam * M) * w, 1e-8);
  CHECK(max_abs(back - w) <= 1e-10 * max_abs(w));
}

TEST_CASE("series oracles reproduce the hand examples") {
  const DenseSymmetric A = make_dense(diag({1, 2, 3}));
  const EigenResult e = eig_dense(A, identity(3), 2);
  const oracle::FullSpectrum fs = oracle::full_spectrum(A, identity(3));
  const Matrix Z = Matrix::Zero(3, 3);
  const TangentOutput off = oracle::jvp_series(fs, e, {op(sym_pair(3, 0, 1)), op(Z)});
  CHECK(max_abs(off.X_prime.col(0) + unit(3, 1)) <= 1e-14);
  CHECK(max_abs(off.X_prime.col(1) - unit(3, 0)) <= 1e-14);
  CHECK(max_abs(oracle::jvp_series(fs, e, {op(Matrix::Identity(3, 3)), op(Z)}).lambda_prime -
                Vector::Ones(2)) <= 1e-14);

  const DenseSymmetric D = make_dense(diag({2, 2, 5}));
  const EigenResult ed = eig_dense(D, identity(3), 2);
  const oracle::FullSpectrum fd = oracle::full_spectrum(D, identity(3));
  CHECK(max_abs(oracle::jvp_series(fd, ed, {op(diag({3, 7, 0})), op(Z)}).X_prime) <= 1e-14);
  try {
    oracle::jvp_series(fd, ed, {op(sym_pair(3, 0, 1)), op(Z)});
    FAIL("expected ValidityViolated");
  } catch (const ValidityViolated&) {
  }

  const EigenResult e1 = eig_dense(A, identity(3), 1);
  const CotangentOutput b = oracle::vjp_series(fs, e1, {Vector::Ones(1), Matrix::Zero(3, 1)});
  CHECK(max_abs(b.A_bar - unit(3, 0) * unit(3, 0).transpose()) <= 1e-14);
}

TEST_CASE("series oracles agree with the modules and with each other") {
  const char* specs[] = {"", "2x2,5x1", "1x3,4x1"};
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    cli::GenerateConfig g;
    g.n = 12;
    g.spectrum = cli::parse_degeneracy(specs[seed % 3]);
    g.seed = seed;
    const cli::Pencil p = cli::generate_pencil(g);
    const EigenResult e = eig_dense(p.A, p.M, 4);
    const oracle::FullSpectrum fs = oracle::full_spectrum(p.A, p.M);
    cli::Rng rng(seed);
    const cli::DenseTangent t = cli::random_valid_tangent(e, p.M.entries(), rng);
    const CotangentInput c = cli::random_valid_cotangent(e, rng);

    const TangentOutput js = oracle::jvp_series(fs, e, t.as_input());
    const TangentOutput jm = jvp(p.A, p.M, e, t.as_input());
    CHECK(cli::scaled_max_diff(jm.X_prime, js.X_prime) <= 1e-8);
    CHECK(cli::scaled_max_diff(jm.lambda_prime, js.lambda_prime) <= 1e-8);

    const CotangentOutput vs = oracle::vjp_series(fs, e, c);
    const CotangentOutput vm = vjp(p.A, p.M, e, c);
    CHECK(cli::scaled_max_diff(vm.A_bar, vs.A_bar) <= 1e-9);
    CHECK(cli::scaled_max_diff(vm.M_bar, vs.M_bar) <= 1e-9);

    CHECK(cli::pairing_error(js, c, vs, t) <= 1e-8);
  }
}

TEST_CASE("finite differences") {
  const DenseSymmetric A = make_dense(diag({1, 2, 3}));
  const EigenResult e = eig_dense(A, identity(3), 2);
  const Matrix Z = Matrix::Zero(3, 3);
  const auto lin = oracle::finite_difference_jvp(A, identity(3), e,
                                                 {op(Matrix::Identity(3, 3)), op(Z)}, 1e-5);
  CHECK(max_abs(lin.lambda_prime - Vector::Ones(2)) <= 1e-9);

  const TangentInput off{op(sym_pair(3, 0, 1)), op(Z)};
  const auto fd = oracle::finite_difference_jvp(A, identity(3), e, off, 1e-5);
  const TangentOutput an = jvp(A, identity(3), e, off);
  CHECK(max_abs(fd.X_prime - an.X_prime) <= 1e-6);

  // Degenerate group with a valid tangent: projector mode.
  cli::GenerateConfig g;
  g.n = 6;
  g.spectrum = cli::parse_degeneracy("2x2,5x1");
  g.seed = 3;
  const cli::Pencil p = cli::generate_pencil(g);
  const EigenResult ed = eig_dense(p.A, p.M, 3);
  cli::Rng rng(1);
  const cli::DenseTangent t = cli::random_valid_tangent(ed, p.M.entries(), rng);
  const auto fdd = oracle::finite_difference_jvp(p.A, p.M, ed, t.as_input(), 1e-5);
  CHECK_FALSE(fdd.column_valid[0]);
  CHECK(fdd.column_valid[2]);
  const cli::FdComparison cmp =
      cli::compare_to_fd(ed, p.M, t.as_input(), jvp(p.A, p.M, ed, t.as_input()), fdd);
  CHECK(cmp.projectors <= 1e-6);
  CHECK(cmp.eigenvalues <= 1e-7);
}

TEST_CASE("finite differences refuse a split cluster") {
  // k = 1 retrieves one member of a degenerate pair.
  const DenseSymmetric A = make_dense(diag({2, 2, 5}));
  const EigenResult e = eig_dense(A, identity(3), 1);
  try {
    oracle::finite_difference_jvp(A, identity(3), e,
                                  {op(diag({1, 0, 0})), op(Matrix::Zero(3, 3))}, 1e-5);
    FAIL("expected ClusterSplit");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::ClusterSplit);
  }
}
