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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eigengrad/linop.hpp"

namespace eigengrad::cli {

/// One `<value>x<multiplicity>` item of a degeneracy spec such as "2x2,5x1".
struct SpectrumEntry {
  double value = 0.0;
  int multiplicity = 1;
};

/// Throws Error(InvalidSpec) on malformed input.
std::vector<SpectrumEntry> parse_degeneracy(std::string_view text);

enum class MassKind { Identity, RandomSpd };

struct GenerateConfig {
  int n = 6;
  std::vector<SpectrumEntry> spectrum;
  MassKind mass = MassKind::RandomSpd;
  std::uint64_t seed = 42;
};

/// A pencil whose generalized eigenvalues are known by construction.
struct Pencil {
  DenseSymmetric A;
  DenseSymmetric M;
  Vector spectrum;  // ascending
};

/// M = Q_M diag(uniform[1, 2]) Q_M^T (or I) with Cholesky factor L, and
/// A = L Q diag(spectrum) Q^T L^T, so L^-1 A L^-T has exactly the requested
/// eigenvalues. Slots not covered by the spec are filled with distinct values
/// above its maximum, at gaps in [1, 1.5). Throws Error(InvalidSpec) when
/// multiplicities exceed n.
Pencil generate_pencil(const GenerateConfig& config);

/// Writes A.mat and M.mat into `dir` (created if absent).
void write_pencil(const std::filesystem::path& dir, const Pencil& pencil);

/// Reads A.mat and M.mat from `dir`.
std::pair<DenseSymmetric, DenseSymmetric> read_pencil(
    const std::filesystem::path& dir);

}  // namespace eigengrad::cli
