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

#include <stdexcept>
#include <string>
#include <string_view>

namespace eigengrad {

enum class ErrorKind {
  NonSquare,
  NonFinite,
  DimensionMismatch,
  InvalidArgument,
  NotPositiveDefinite,
  ConvergenceFailure,
  MaxIterExceeded,
  NotSolvable,
  ValidityViolated,
  GaugeAlignmentFailed,
  ClusterSplit,
  IoError,
  InvalidSpec,
};

std::string_view to_string(ErrorKind kind);

/// Base class for every error raised by the library. The kind is stable and
/// can be switched on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A right-hand side has a component inside the nullspace of A - lambda*M.
class NotSolvable : public Error {
 public:
  NotSolvable(int column, double defect);

  int column() const noexcept { return column_; }
  double defect() const noexcept { return defect_; }

 private:
  int column_;
  double defect_;
};

/// A degenerate-group validity condition failed; derivatives would be
/// infinite along the supplied direction.
class ValidityViolated : public Error {
 public:
  ValidityViolated(std::string_view which, double defect, double tolerance);

  double defect() const noexcept { return defect_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  double defect_;
  double tolerance_;
};

}  // namespace eigengrad
