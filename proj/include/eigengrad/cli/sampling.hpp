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

#include <random>

#include "eigengrad/eigsolve.hpp"
#include "eigengrad/jvp.hpp"
#include "eigengrad/vjp.hpp"

namespace eigengrad::cli {

using Rng = std::mt19937_64;

Matrix random_gaussian(Index rows, Index cols, Rng& rng);
/// Haar-distributed orthogonal matrix (QR of a Gaussian with sign fix).
Matrix random_orthogonal(Index n, Rng& rng);
Matrix random_symmetric(Index n, Rng& rng);
/// Q diag(uniform[1, 2]) Q^T.
Matrix random_spd(Index n, Rng& rng);

/// Removes the off-diagonal part of every degeneracy-group block of
/// X^T S X while keeping S symmetric:
/// S <- S - M X_g (C - diag C) X_g^T M with C = X_g^T S X_g.
Matrix strip_group_coupling(const Matrix& S, const EigenResult& eig,
                            const Matrix& M);

/// Dense symmetric (A', M') with both group couplings stripped, so
/// (D - I) o (X^T A' X) and (D - I) o (X^T M' X Lambda) vanish.
struct DenseTangent {
  Matrix Aprime;
  Matrix Mprime;
  TangentInput as_input() const;
};

DenseTangent random_valid_tangent(const EigenResult& eig, const Matrix& M,
                                  Rng& rng);

/// Gaussian X_bar whose group blocks of X^T X_bar are symmetrized by
/// subtracting X_g (X_g^T X_g)^-1 K with K the antisymmetric part.
CotangentInput random_valid_cotangent(const EigenResult& eig, Rng& rng);

}  // namespace eigengrad::cli
