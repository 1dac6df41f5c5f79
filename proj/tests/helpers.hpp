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

#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <memory>

#include "eigengrad/linop.hpp"

namespace testing {

using eigengrad::Matrix;
using eigengrad::Vector;

inline Matrix diag(std::initializer_list<double> values) {
  Vector v(static_cast<eigengrad::Index>(values.size()));
  eigengrad::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.asDiagonal();
}

inline Matrix unit(eigengrad::Index n, eigengrad::Index i) {
  return Matrix::Identity(n, n).col(i);
}

/// e_i e_j^T + e_j e_i^T
inline Matrix sym_pair(eigengrad::Index n, eigengrad::Index i, eigengrad::Index j) {
  Matrix S = Matrix::Zero(n, n);
  S(i, j) += 1.0;
  S(j, i) += 1.0;
  return S;
}

inline eigengrad::OperatorPtr op(const Matrix& m) { return eigengrad::make_dense_ptr(m); }

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing
