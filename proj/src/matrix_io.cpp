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

#include "eigengrad/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "eigengrad/errors.hpp"

namespace eigengrad {

namespace {

double parse_double(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw Error(ErrorKind::IoError, "symmat: bad number '" + token + "'");
  return value;
}

}  // namespace

DenseSymmetric read_symmat(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::IoError, "symmat: missing header");
  std::istringstream header(line);
  std::string magic;
  long long n = 0;
  header >> magic >> n;
  if (magic != "symmat" || !header || n <= 0)
    throw Error(ErrorKind::IoError, "symmat: header must read 'symmat <n>'");

  Matrix entries(n, n);
  for (long long i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw Error(ErrorKind::IoError, "symmat: truncated at row " + std::to_string(i));
    std::istringstream row(line);
    std::string token;
    long long j = 0;
    while (row >> token) {
      if (j >= n)
        throw Error(ErrorKind::NonSquare, "symmat: row " + std::to_string(i) + " too long");
      entries(i, j++) = parse_double(token);
    }
    if (j != n)
      throw Error(ErrorKind::NonSquare, "symmat: row " + std::to_string(i) + " too short");
  }
  return DenseSymmetric::make_dense(entries);
}

DenseSymmetric read_symmat(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return read_symmat(in);
}

void write_symmat(std::ostream& out, const DenseSymmetric& m) {
  const Matrix& a = m.entries();
  out << "symmat " << a.rows() << '\n';
  char buf[32];
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
      if (j) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

void write_symmat(const std::filesystem::path& path, const DenseSymmetric& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  write_symmat(out, m);
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace eigengrad
