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

#include <random>

#include "eigengrad/errors.hpp"
#include "eigengrad/linop.hpp"
#include "helpers.hpp"

using namespace eigengrad;
using namespace testing;

TEST_CASE("make_dense applies the stored matrix") {
  const DenseSymmetric d = make_dense(diag({1, 2}));
  CHECK(d.apply(Vector::Unit(2, 0)) == Vector::Unit(2, 0));

  Matrix p(2, 2);
  p << 0, 1, 1, 0;
  CHECK(make_dense(p).apply(Vector::Unit(2, 0)) == Vector::Unit(2, 1));
}

TEST_CASE("make_dense symmetrizes") {
  Matrix b(2, 2);
  b << 1, 2, 0, 1;
  Matrix want(2, 2);
  want << 1, 1, 1, 1;
  CHECK(make_dense(b).entries() == want);
}

TEST_CASE("make_dense rejects bad input") {
  try {
    make_dense(Matrix::Zero(2, 3));
    FAIL("expected NonSquare");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSquare);
  }
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    make_dense(m);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
}

TEST_CASE("check_symmetry examples") {
  CHECK(check_symmetry(make_dense(diag({1, 2})), 10, 1e-12));
  Matrix skew(2, 2);
  skew << 1, 1, 0, 1;
  const FunctionOperator raw(2, [skew](const Eigen::Ref<const Vector>& v) -> Vector {
    return skew * v;
  });
  CHECK_FALSE(check_symmetry(raw, 10, 1e-12));
  CHECK(check_symmetry(make_dense(Matrix::Identity(4, 4)), 1, 1e-12));
}

TEST_CASE("random dense operators are symmetric and linear") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial;
    Matrix b(n, n);
    for (Index i = 0; i < b.size(); ++i) b.data()[i] = g(rng);
    const DenseSymmetric d = make_dense(b);
    CHECK(symmetry_defect(d, 10) <= 1e-12);
    CHECK(linearity_defect(d, 10) <= 1e-12);
  }
}

TEST_CASE("apply_batch matches columnwise apply") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Matrix b(7, 7), block(7, 4);
  for (Index i = 0; i < b.size(); ++i) b.data()[i] = g(rng);
  for (Index i = 0; i < block.size(); ++i) block.data()[i] = g(rng);
  const DenseSymmetric d = make_dense(b);
  const FunctionOperator f(7, [&d](const Eigen::Ref<const Vector>& v) { return d.apply(v); });
  const Matrix fb = f.apply_batch(block);
  for (Index j = 0; j < block.cols(); ++j) CHECK(fb.col(j) == f.apply(block.col(j)));
  CHECK((d.apply_batch(block) - fb).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("make_dense is idempotent") {
  Matrix b(3, 3);
  b << 1, 2, 3, 4, 5, 6, 7, 8, 10;
  const DenseSymmetric once = make_dense(b);
  CHECK(make_dense(once.entries()).entries() == once.entries());
}

TEST_CASE("SpdOperator spot check") {
  CHECK(SpdOperator(op(diag({1, 2, 3}))).spot_check(10));
  CHECK_FALSE(SpdOperator(op(diag({1, -2, 3}))).spot_check(50));
}

TEST_CASE("to_dense round trip") {
  const Matrix a = diag({4, 5, 6}) + sym_pair(3, 0, 2);
  CHECK(to_dense(make_dense(a)) == a);
}
