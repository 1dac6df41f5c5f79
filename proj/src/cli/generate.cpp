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

#include "eigengrad/cli/generate.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>

#include "eigengrad/cli/sampling.hpp"
#include "eigengrad/errors.hpp"
#include "eigengrad/matrix_io.hpp"

namespace eigengrad::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

SpectrumEntry parse_entry(std::string_view item) {
  item = trim(item);
  const auto x = item.rfind('x');
  if (x == std::string_view::npos || x == 0 || x + 1 == item.size())
    throw Error(ErrorKind::InvalidSpec, "degeneracy item must read <value>x<count>: '" +
                                            std::string(item) + "'");
  SpectrumEntry e;
  const std::string_view v = item.substr(0, x);
  const std::string_view m = item.substr(x + 1);
  auto [p1, ec1] = std::from_chars(v.data(), v.data() + v.size(), e.value);
  auto [p2, ec2] = std::from_chars(m.data(), m.data() + m.size(), e.multiplicity);
  if (ec1 != std::errc() || p1 != v.data() + v.size() || ec2 != std::errc() ||
      p2 != m.data() + m.size() || e.multiplicity < 1 || !std::isfinite(e.value))
    throw Error(ErrorKind::InvalidSpec, "bad degeneracy item '" + std::string(item) + "'");
  return e;
}

}  // namespace

std::vector<SpectrumEntry> parse_degeneracy(std::string_view text) {
  std::vector<SpectrumEntry> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_entry(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Pencil generate_pencil(const GenerateConfig& config) {
  const int n = config.n;
  if (n < 2) throw Error(ErrorKind::InvalidSpec, "n must be at least 2");
  int listed = 0;
  for (const auto& e : config.spectrum) listed += e.multiplicity;
  if (listed > n)
    throw Error(ErrorKind::InvalidSpec, "multiplicities sum to " + std::to_string(listed) +
                                            " > n = " + std::to_string(n));

  Rng rng(config.seed);
  const Matrix Mfull = config.mass == MassKind::Identity ? Matrix(Matrix::Identity(n, n))
                                                         : random_spd(n, rng);
  const Matrix Q = random_orthogonal(n, rng);

  std::vector<double> values;
  for (const auto& e : config.spectrum)
    values.insert(values.end(), static_cast<std::size_t>(e.multiplicity), e.value);
  double top = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  std::uniform_real_distribution<double> gap(1.0, 1.5);
  while (static_cast<int>(values.size()) < n) {
    top += gap(rng);
    values.push_back(top);
  }
  std::sort(values.begin(), values.end());
  const Vector spectrum = Eigen::Map<const Vector>(values.data(), n);

  const Matrix L = Mfull.llt().matrixL();
  const Matrix core = Q * spectrum.asDiagonal() * Q.transpose();
  const Matrix A = L * core * L.transpose();
  return Pencil{make_dense(A), make_dense(Mfull), spectrum};
}

void write_pencil(const std::filesystem::path& dir, const Pencil& pencil) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string());
  write_symmat(dir / "A.mat", pencil.A);
  write_symmat(dir / "M.mat", pencil.M);
}

std::pair<DenseSymmetric, DenseSymmetric> read_pencil(
    const std::filesystem::path& dir) {
  return {read_symmat(dir / "A.mat"), read_symmat(dir / "M.mat")};
}

}  // namespace eigengrad::cli
