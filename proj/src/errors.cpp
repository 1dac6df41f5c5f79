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

#include "eigengrad/errors.hpp"

#include <sstream>

namespace eigengrad {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorKind::NotSolvable: return "NotSolvable";
    case ErrorKind::ValidityViolated: return "ValidityViolated";
    case ErrorKind::GaugeAlignmentFailed: return "GaugeAlignmentFailed";
    case ErrorKind::ClusterSplit: return "ClusterSplit";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

namespace {

std::string not_solvable_message(int column, double defect) {
  std::ostringstream os;
  os << "right-hand side column " << column
     << " is not orthogonal to the shift nullspace (defect " << defect << ")";
  return os.str();
}

std::string validity_message(std::string_view which, double defect,
                             double tolerance) {
  std::ostringstream os;
  os << which << " validity condition violated: defect " << defect
     << " exceeds " << tolerance;
  return os.str();
}

}  // namespace

NotSolvable::NotSolvable(int column, double defect)
    : Error(ErrorKind::NotSolvable, not_solvable_message(column, defect)),
      column_(column),
      defect_(defect) {}

ValidityViolated::ValidityViolated(std::string_view which, double defect,
                                   double tolerance)
    : Error(ErrorKind::ValidityViolated,
            validity_message(which, defect, tolerance)),
      defect_(defect),
      tolerance_(tolerance) {}

}  // namespace eigengrad
