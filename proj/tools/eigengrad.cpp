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

// Command-line front end: generate pencils, run jvp/vjp, verify.
//
// Exit codes: 0 success or all checks passed, 1 a check or validity
// condition failed, 2 configuration or IO error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "eigengrad/cli/generate.hpp"
#include "eigengrad/cli/verify.hpp"
#include "eigengrad/errors.hpp"
#include "eigengrad/jvp.hpp"
#include "eigengrad/matrix_io.hpp"
#include "eigengrad/vjp.hpp"

namespace fs = std::filesystem;
using namespace eigengrad;
using namespace eigengrad::cli;
using nlohmann::ordered_json;

namespace {

struct Flags {
  int n = 0;
  int k = 3;
  std::string which = "smallest";
  std::uint64_t seed = 42;
  std::string degeneracy;
  std::string solver = "dense";
  std::string mass = "spd";
  Tolerances tol;
  std::string out;
  std::string in;
  std::string tangent_a;
  std::string tangent_m;
  std::string cotangent;
  int threads = 1;
  bool symmetrize = false;
  bool force = false;
};

ordered_json to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json to_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const nlohmann::json& j, Index rows, Index cols, const char* what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw Error(ErrorKind::IoError, std::string(what) + " has the wrong number of rows");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw Error(ErrorKind::IoError, std::string(what) + " has the wrong number of columns");
    for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Which parse_which(const std::string& s) {
  return s == "largest" ? Which::Largest : Which::Smallest;
}

SolverKind parse_solver(const std::string& s) {
  return s == "iterative" ? SolverKind::Iterative : SolverKind::Dense;
}

MassKind parse_mass(const std::string& s) {
  return s == "identity" ? MassKind::Identity : MassKind::RandomSpd;
}

std::pair<DenseSymmetric, DenseSymmetric> load_pencil(const Flags& f) {
  if (!f.in.empty()) return read_pencil(f.in);
  if (f.n < 2) throw Error(ErrorKind::InvalidSpec, "either --in or --n is required");
  GenerateConfig g;
  g.n = f.n;
  g.spectrum = parse_degeneracy(f.degeneracy);
  g.mass = parse_mass(f.mass);
  g.seed = f.seed;
  Pencil p = generate_pencil(g);
  return {std::move(p.A), std::move(p.M)};
}

void check_k(int k, Index n) {
  if (k < 1 || k >= n)
    throw Error(ErrorKind::InvalidSpec, "k must satisfy 1 <= k < n");
}

EigenResult solve_primal(const Flags& f, const DenseSymmetric& A, const DenseSymmetric& M) {
  check_k(f.k, A.dim());
  if (parse_solver(f.solver) == SolverKind::Dense)
    return eig_dense(A, M, f.k, parse_which(f.which));
  IterativeEigOptions o;
  o.seed = f.seed;
  return eig_iterative(A, SpdOperator(std::make_shared<const DenseSymmetric>(M)), f.k,
                       parse_which(f.which), o);
}

DerivativeOptions derivative_options(const Flags& f) {
  DerivativeOptions o;
  o.solver = parse_solver(f.solver);
  o.sylvester.tol_solv = f.tol.tol_solv;
  o.tol_cond = f.tol.tol_cond;
  o.force = f.force;
  return o;
}

ordered_json eig_json(const EigenResult& eig) {
  ordered_json j;
  j["lambdas"] = to_json(eig.lambdas);
  j["X"] = to_json(eig.X);
  ordered_json groups = ordered_json::array();
  for (const auto& g : eig.groups) groups.push_back(g);
  j["groups"] = groups;
  return j;
}

void emit(const Flags& f, const char* file, const ordered_json& j) {
  if (f.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::error_code ec;
  fs::create_directories(f.out, ec);
  std::ofstream os(fs::path(f.out) / file);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + (fs::path(f.out) / file).string());
  os << j.dump(2) << '\n';
}

int run_generate(const Flags& f) {
  if (f.out.empty()) throw Error(ErrorKind::InvalidSpec, "generate needs --out");
  GenerateConfig g;
  g.n = f.n == 0 ? 6 : f.n;
  g.spectrum = parse_degeneracy(f.degeneracy);
  g.mass = parse_mass(f.mass);
  g.seed = f.seed;
  write_pencil(f.out, generate_pencil(g));
  return 0;
}

int run_jvp(const Flags& f) {
  auto [A, M] = load_pencil(f);
  const Index n = A.dim();
  const EigenResult eig = solve_primal(f, A, M);
  auto zero = std::make_shared<const DenseSymmetric>(make_dense(Matrix::Zero(n, n)));
  TangentInput t{zero, zero};
  if (!f.tangent_a.empty()) t.Aprime = std::make_shared<const DenseSymmetric>(read_symmat(f.tangent_a));
  if (!f.tangent_m.empty()) t.Mprime = std::make_shared<const DenseSymmetric>(read_symmat(f.tangent_m));
  if (t.Aprime->dim() != n || t.Mprime->dim() != n)
    throw Error(ErrorKind::DimensionMismatch, "tangent size does not match the pencil");

  const ValidityCheck v = check_forward_validity(eig, t, f.tol.tol_cond);
  ordered_json j;
  j["eig"] = eig_json(eig);
  j["validity"] = {{"ok", v.ok}, {"defect", v.defect}, {"tolerance", v.tolerance}};
  if (!v.ok && !f.force) {
    std::cerr << "eigengrad: tangent violates the degenerate validity condition (defect "
              << v.defect << ")\n";
    emit(f, "jvp.json", j);
    return 1;
  }
  const TangentOutput out = jvp(A, M, eig, t, derivative_options(f));
  j["lambda_prime"] = to_json(out.lambda_prime);
  j["X_prime"] = to_json(out.X_prime);
  emit(f, "jvp.json", j);
  return 0;
}

int run_vjp(const Flags& f) {
  auto [A, M] = load_pencil(f);
  const EigenResult eig = solve_primal(f, A, M);
  CotangentInput c{Vector::Zero(eig.k), Matrix::Zero(A.dim(), eig.k)};
  if (!f.cotangent.empty()) {
    std::ifstream is(f.cotangent);
    if (!is) throw Error(ErrorKind::IoError, "cannot open " + f.cotangent);
    nlohmann::json j;
    try {
      is >> j;
      if (j.contains("lambda_bar"))
        c.lambda_bar = matrix_from_json(nlohmann::json::array({j["lambda_bar"]}), 1, eig.k,
                                        "lambda_bar").row(0).transpose();
      if (j.contains("X_bar")) c.X_bar = matrix_from_json(j["X_bar"], A.dim(), eig.k, "X_bar");
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::IoError, std::string("bad cotangent file: ") + e.what());
    }
  }
  const ValidityCheck v = check_backward_validity(eig, c, f.tol.tol_cond);
  ordered_json j;
  j["eig"] = eig_json(eig);
  j["validity"] = {{"ok", v.ok}, {"defect", v.defect}, {"tolerance", v.tolerance}};
  if (!v.ok && !f.force) {
    std::cerr << "eigengrad: cotangent violates the degenerate validity condition (defect "
              << v.defect << ")\n";
    emit(f, "vjp.json", j);
    return 1;
  }
  const DerivativeOptions o = derivative_options(f);
  const CotangentOutput out = f.symmetrize ? vjp_symmetrized(A, M, eig, c, o) : vjp(A, M, eig, c, o);
  j["A_bar"] = to_json(out.A_bar);
  j["M_bar"] = to_json(out.M_bar);
  emit(f, "vjp.json", j);
  return 0;
}

int run_verify_command(const Flags& f) {
  RunConfig rc;
  if (f.n > 0) rc.n = f.n;
  rc.k = f.k;
  rc.which = parse_which(f.which);
  rc.seed = f.seed;
  rc.degeneracy = f.degeneracy;
  rc.mass = parse_mass(f.mass);
  rc.solver = parse_solver(f.solver);
  rc.tol = f.tol;
  if (!f.in.empty()) rc.in_dir = f.in;
  if (!f.out.empty()) rc.out_dir = f.out;
  if (!f.tangent_a.empty()) rc.tangent_a = f.tangent_a;
  if (!f.tangent_m.empty()) rc.tangent_m = f.tangent_m;
  rc.threads = f.threads;
  if (rc.n) check_k(rc.k, *rc.n);

  const DerivativeReport report = run_verify(rc);
  std::size_t failed = 0, skipped = 0;
  for (const auto& c : report.checks) {
    std::cout << to_string(c.status) << "  " << c.name << "  measured=" << c.measured
              << "  tol=" << c.tolerance << '\n';
    failed += c.status == CheckStatus::Fail;
    skipped += c.status == CheckStatus::Skipped;
  }
  std::cout << report.checks.size() << " checks, " << failed << " failed, " << skipped
            << " skipped, " << report.elapsed_seconds << " s\n";
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivatives of partial symmetric generalized eigendecompositions"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", f.n, "Pencil dimension (generated input)");
    sub->add_option("--k", f.k, "Number of eigenpairs");
    sub->add_option("--which", f.which, "smallest or largest")
        ->check(CLI::IsMember({"smallest", "largest"}));
    sub->add_option("--seed", f.seed, "Random seed");
    sub->add_option("--degeneracy", f.degeneracy, "Listed spectrum, e.g. \"2x2,5x1\"");
    sub->add_option("--mass", f.mass, "identity or spd")->check(CLI::IsMember({"identity", "spd"}));
    sub->add_option("--out", f.out, "Output directory");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--solver", f.solver, "dense or iterative")
        ->check(CLI::IsMember({"dense", "iterative"}));
    sub->add_option("--tol-eig", f.tol.tol_eig, "Eigen residual tolerance");
    sub->add_option("--tol-solv", f.tol.tol_solv, "Linear solve tolerance");
    sub->add_option("--tol-cond", f.tol.tol_cond, "Validity condition tolerance");
    sub->add_option("--in", f.in, "Directory holding A.mat and M.mat");
  };

  CLI::App* gen = app.add_subcommand("generate", "Write a random pencil as A.mat and M.mat");
  add_common(gen);

  CLI::App* jv = app.add_subcommand("jvp", "Forward derivative along (A', M')");
  add_common(jv);
  add_solver(jv);
  jv->add_option("--tangent-a", f.tangent_a, "symmat file for A'");
  jv->add_option("--tangent-m", f.tangent_m, "symmat file for M'");
  jv->add_flag("--force", f.force, "Proceed when the validity condition fails");

  CLI::App* vj = app.add_subcommand("vjp", "Backward derivative of (lambda_bar, X_bar)");
  add_common(vj);
  add_solver(vj);
  vj->add_option("--cotangent", f.cotangent, "JSON file with lambda_bar and X_bar");
  vj->add_flag("--symmetrize", f.symmetrize, "Return symmetrized gradients");
  vj->add_flag("--force", f.force, "Proceed when the validity condition fails");

  CLI::App* ver = app.add_subcommand("verify", "Run the verification suite");
  add_common(ver);
  add_solver(ver);
  ver->add_option("--fd-step", f.tol.fd_step, "Finite-difference step");
  ver->add_option("--tangent-a", f.tangent_a, "symmat file for A' (replaces sampled tangents)");
  ver->add_option("--tangent-m", f.tangent_m, "symmat file for M'");
  ver->add_option("--threads", f.threads, "Instances verified concurrently")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_generate(f);
    if (*jv) return run_jvp(f);
    if (*vj) return run_vjp(f);
    return run_verify_command(f);
  } catch (const Error& e) {
    std::cerr << "eigengrad: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::IoError:
      case ErrorKind::InvalidSpec:
      case ErrorKind::NonSquare:
      case ErrorKind::NonFinite:
      case ErrorKind::DimensionMismatch:
      case ErrorKind::InvalidArgument:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "eigengrad: " << e.what() << '\n';
    return 2;
  }
}
