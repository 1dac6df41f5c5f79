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

#include <filesystem>
#include <iosfwd>

#include "eigengrad/linop.hpp"

namespace eigengrad {

// `symmat` text format: a header line `symmat <n>` followed by n rows of n
// whitespace-separated decimal floats. Readers symmetrize.

DenseSymmetric read_symmat(std::istream& in);
DenseSymmetric read_symmat(const std::filesystem::path& path);

/// Writes with 17 significant digits so a read round-trips bit-exactly.
void write_symmat(std::ostream& out, const DenseSymmetric& m);
void write_symmat(const std::filesystem::path& path, const DenseSymmetric& m);

}  // namespace eigengrad
