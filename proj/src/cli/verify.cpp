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

#include "eigengrad/cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iostream>

#include "eigengrad/cli/checks.hpp"
#include "eigengrad/jvp.hpp"
#include "eigengrad/matrix_io.hpp"
#include "eigengrad/oracle.hpp"
#include "eigengrad/vjp.hpp"

namespace eigengrad::cli {

std::string to_string(SolverKind solver) {
  return solver == SolverKind::Dense ? "dense" : "iterative";
}

std::string to_string(Which which) {
  return which == Which::Smallest ? "smallest" : "largest";
}

namespace {

// Acceptance thresholds for the derivative checks.
constexpr double kSymmetryTol = 1e-12;
constexpr double kEigAgreementTol = 1e-7;
constexpr double kSeriesTol = 1e-8;
constexpr double kIdentityTol = 1e-8;
constexpr double kFdEigenvalueTol = 1e-7;
constexpr double kFdVectorTol = 1e-6;
constexpr double kPairingTol = 1e-8;
constexpr double kRichardsonCenter = 4.0;
constexpr double kRichardsonHalfWidth = 1.0;

Instance generated(std::string name, int n, int k, const std::string& spec,
                   MassKind mass, Which which, SolverKind solver,
                   std::uint64_t seed) {
  GenerateConfig g;
  g.n = n;
  g.spectrum = parse_degeneracy(spec);
  g.mass = mass;
  g.seed = seed;
  Pencil p = generate_pencil(g);
  return Instance{std::move(name), std::move(p.A), std::move(p.M), k, which, solver, seed, {}};
}

OperatorPtr as_operator(const DenseSymmetric& m, bool matrix_free) {
  auto dense = std::make_shared<const DenseSymmetric>(m);
  if (!matrix_free) return dense;
  return std::make_shared<const FunctionOperator>(
      m.dim(), [dense](const Eigen::Ref<const Vector>& v) -> Vector {
        return dense->apply(v);
      });
}

double max_abs_diff(const TangentOutput& a, const TangentOutput& b) {
  return std::max(scaled_max_diff(a.lambda_prime, b.lambda_prime),
                  scaled_max_diff(a.X_prime, b.X_prime));
}

}  // namespace

std::vector<Instance> default_suite(const RunConfig& config) {
  const std::uint64_t s = config.seed;
  std::vector<Instance> suite;
  {
    Matrix a = Vector::LinSpaced(3, 1.0, 3.0).asDiagonal();
    suite.push_back(Instance{"diag3", make_dense(a), make_dense(Matrix::Identity(3, 3)), 2,
                             Which::Smallest, SolverKind::Dense, s, {}});
  }
  suite.push_back(generated("pencil6", 6, 3, "", MassKind::RandomSpd, Which::Smallest,
                            SolverKind::Dense, s + 1));
  suite.push_back(generated("degen225", 6, 3, "2x2,5x1", MassKind::RandomSpd,
                            Which::Smallest, SolverKind::Dense, s + 2));
  suite.push_back(generated("degen1114", 8, 4, "1x3,4x1", MassKind::RandomSpd,
                            Which::Smallest, SolverKind::Dense, s + 3));
  suite.push_back(generated("largest20", 20, 3, "", MassKind::RandomSpd, Which::Largest,
                            SolverKind::Dense, s + 4));
  suite.push_back(generated("pencil50", 50, 5, "", MassKind::RandomSpd, Which::Smallest,
                            SolverKind::Dense, s + 5));
  suite.push_back(generated("iter100", 100, 4, "3x2", MassKind::RandomSpd, Which::Smallest,
                            SolverKind::Iterative, s + 6));
  return suite;
}

std::vector<Instance> instances_for(const RunConfig& config) {
  std::vector<Instance> out;
  if (config.in_dir) {
    auto [A, M] = read_pencil(*config.in_dir);
    out.push_back(Instance{"input", std::move(A), std::move(M), config.k, config.which,
                           config.solver, config.seed, {}});
  } else if (config.n) {
    out.push_back(generated("generated", *config.n, config.k, config.degeneracy, config.mass,
                            config.which, config.solver, config.seed));
  } else {
    out = default_suite(config);
  }
  if (config.tangent_a || config.tangent_m) {
    for (auto& inst : out) {
      const Index n = inst.A.dim();
      DenseTangent t{Matrix::Zero(n, n), Matrix::Zero(n, n)};
      if (config.tangent_a) t.Aprime = read_symmat(*config.tangent_a).entries();
      if (config.tangent_m) t.Mprime = read_symmat(*config.tangent_m).entries();
      if (t.Aprime.rows() != n || t.Mprime.rows() != n)
        throw Error(ErrorKind::DimensionMismatch, "tangent files do not match the pencil size");
      inst.tangent = std::move(t);
    }
  }
  return out;
}

std::vector<CheckRecord> verify_instance(const Instance& inst, const RunConfig& config) {
  DerivativeReport r;
  const std::string p = inst.name + "/";
  const Tolerances& tol = config.tol;
  const bool matrix_free = inst.solver == SolverKind::Iterative;
  const OperatorPtr Aop = as_operator(inst.A, matrix_free);
  const SpdOperator Mop(as_operator(inst.M, matrix_free));
  Rng rng(inst.seed ^ 0x9e3779b97f4a7c15ULL);

  auto guarded = [&](const std::string& name, double tolerance, auto&& body) {
    try {
      body();
      return true;
    } catch (const std::exception& e) {
      std::cerr << "eigengrad: " << p << name << ": " << e.what() << '\n';
      r.fail(p + name, tolerance);
      return false;
    }
  };

  // 1. operator sanity
  r.record(p + "symmetry_A", symmetry_defect(*Aop, 10), kSymmetryTol);
  r.record(p + "symmetry_M", symmetry_defect(Mop, 10), kSymmetryTol);
  r.record(p + "spd_M", Mop.spot_check(10) ? 0.0 : 1.0, 0.0);

  // 2. primal eigenpairs
  EigenResult eig;
  const bool have_eig = guarded("eig_solve", 0.0, [&] {
    if (inst.solver == SolverKind::Dense) {
      eig = eig_dense(inst.A, inst.M, inst.k, inst.which);
    } else {
      IterativeEigOptions o;
      o.seed = inst.seed;
      eig = eig_iterative(*Aop, Mop, inst.k, inst.which, o);
    }
  });
  static const char* const kDependent[] = {
      "eig_residual", "eig_normalization", "forward_validity", "jvp_vs_series",
      "jvp_eigen_equation", "jvp_normalization", "fd_eigenvalues", "fd_eigenvectors",
      "fd_projectors", "fd_richardson", "backward_validity", "vjp_vs_series",
      "adjoint_pairing", "adjoint_pairing_symmetrized"};
  if (!have_eig) {
    for (const char* name : kDependent) r.skip(p + name, 0.0);
    return r.checks;
  }
  const EigenQuality q = assess(*Aop, Mop, eig);
  r.record(p + "eig_residual", q.residual, tol.tol_eig);
  r.record(p + "eig_normalization", q.orthonormality, tol.tol_orth);
  if (inst.solver == SolverKind::Iterative) {
    guarded("eig_agreement", kEigAgreementTol, [&] {
      const EigenResult ref = eig_dense(inst.A, inst.M, inst.k, inst.which);
      const double scale = std::max(1.0, ref.lambdas.cwiseAbs().maxCoeff());
      r.record(p + "eig_agreement", (ref.lambdas - eig.lambdas).cwiseAbs().maxCoeff() / scale,
               kEigAgreementTol);
    });
  }

  DerivativeOptions opts;
  opts.solver = inst.solver;
  opts.sylvester.tol_solv = tol.tol_solv;
  opts.tol_cond = tol.tol_cond;

  std::optional<oracle::FullSpectrum> fs;
  guarded("full_spectrum", 0.0, [&] { fs = oracle::full_spectrum(inst.A, inst.M); });

  // 3. forward mode
  const DenseTangent tangent =
      inst.tangent ? *inst.tangent : random_valid_tangent(eig, inst.M.entries(), rng);
  const TangentInput tin = tangent.as_input();
  const ValidityCheck fv = check_forward_validity(eig, tin, tol.tol_cond);
  r.record(p + "forward_validity", fv.defect, fv.tolerance);

  if (!fv.ok) {
    for (const char* name : {"jvp_vs_series", "jvp_eigen_equation", "jvp_normalization",
                             "fd_eigenvalues", "fd_eigenvectors", "fd_projectors",
                             "fd_richardson"})
      r.skip(p + name, 0.0);
  } else {
    TangentOutput jv;
    if (guarded("jvp", 0.0, [&] { jv = jvp(*Aop, Mop, eig, tin, opts); })) {
      if (fs) {
        guarded("jvp_vs_series", kSeriesTol, [&] {
          r.record(p + "jvp_vs_series", max_abs_diff(jv, oracle::jvp_series(*fs, eig, tin)),
                   kSeriesTol);
        });
      } else {
        r.skip(p + "jvp_vs_series", kSeriesTol);
      }
      r.record(p + "jvp_eigen_equation",
               differentiated_equation_residual(*Aop, Mop, eig, tin, jv), kIdentityTol);
      r.record(p + "jvp_normalization",
               differentiated_normalization_residual(Mop, eig, tin, jv), kIdentityTol);

      guarded("finite_differences", kFdVectorTol, [&] {
        const double h = tol.fd_step;
        const auto fd1 = oracle::finite_difference_jvp(inst.A, inst.M, eig, tin, h);
        const auto fd2 = oracle::finite_difference_jvp(inst.A, inst.M, eig, tin, 2.0 * h);
        const FdComparison c1 = compare_to_fd(eig, Mop, tin, jv, fd1);
        const FdComparison c2 = compare_to_fd(eig, Mop, tin, jv, fd2);
        r.record(p + "fd_eigenvalues", c1.eigenvalues, kFdEigenvalueTol);
        if (c1.has_singletons)
          r.record(p + "fd_eigenvectors", c1.eigenvectors, kFdVectorTol);
        else
          r.skip(p + "fd_eigenvectors", kFdVectorTol);
        r.record(p + "fd_projectors", c1.projectors, kFdVectorTol);
        const double ratio = c2.combined / std::max(c1.combined, 1e-300);
        r.record(p + "fd_richardson", std::abs(ratio - kRichardsonCenter), kRichardsonHalfWidth);
      });
    }
  }

  // 4. reverse mode
  const CotangentInput cot = random_valid_cotangent(eig, rng);
  const ValidityCheck bv = check_backward_validity(eig, cot, tol.tol_cond);
  r.record(p + "backward_validity", bv.defect, bv.tolerance);
  if (fs && bv.ok) {
    guarded("vjp_vs_series", kSeriesTol, [&] {
      const CotangentOutput got = vjp(*Aop, Mop, eig, cot, opts);
      const CotangentOutput ref = oracle::vjp_series(*fs, eig, cot);
      r.record(p + "vjp_vs_series",
               std::max(scaled_max_diff(got.A_bar, ref.A_bar), scaled_max_diff(got.M_bar, ref.M_bar)),
               kSeriesTol);
    });
  } else {
    r.skip(p + "vjp_vs_series", kSeriesTol);
  }

  // 5. adjoint pairing over fresh valid draws
  guarded("adjoint_pairing", kPairingTol, [&] {
    double worst = 0.0, worst_sym = 0.0;
    for (int d = 0; d < config.pairing_draws; ++d) {
      const DenseTangent t = random_valid_tangent(eig, inst.M.entries(), rng);
      const CotangentInput c = random_valid_cotangent(eig, rng);
      const TangentInput ti = t.as_input();
      const TangentOutput f = jvp(*Aop, Mop, eig, ti, opts);
      worst = std::max(worst, pairing_error(f, c, vjp(*Aop, Mop, eig, c, opts), t));
      worst_sym = std::max(worst_sym,
                           pairing_error(f, c, vjp_symmetrized(*Aop, Mop, eig, c, opts), t));
    }
    r.record(p + "adjoint_pairing", worst, kPairingTol);
    r.record(p + "adjoint_pairing_symmetrized", worst_sym, kPairingTol);
  });
  return r.checks;
}

DerivativeReport run_verify(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Instance> instances = instances_for(config);

  DerivativeReport report;
  report.environment.seed = config.seed;
  report.environment.n = config.n ? *config.n : (instances.size() == 1 ? static_cast<int>(instances[0].A.dim()) : 0);
  report.environment.k = instances.size() == 1 ? instances[0].k : config.k;
  report.environment.solver = to_string(config.solver);
  for (const auto& inst : instances)
    report.environment.instances.push_back(
        {inst.name, static_cast<int>(inst.A.dim()), inst.k, to_string(inst.solver)});

  std::vector<std::vector<CheckRecord>> results(instances.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, config.threads));
  for (std::size_t begin = 0; begin < instances.size(); begin += width) {
    const std::size_t end = std::min(instances.size(), begin + width);
    if (width == 1) {
      results[begin] = verify_instance(instances[begin], config);
      continue;
    }
    std::vector<std::future<std::vector<CheckRecord>>> batch;
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async, verify_instance, std::cref(instances[i]),
                                 std::cref(config)));
    for (std::size_t i = begin; i < end; ++i) results[i] = batch[i - begin].get();
  }
  for (auto& part : results)
    report.checks.insert(report.checks.end(), part.begin(), part.end());

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (config.out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*config.out_dir, ec);
    report.write(*config.out_dir / "report.json");
  }
  return report;
}

}  // namespace eigengrad::cli
