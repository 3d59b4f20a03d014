// Copyright 2026 The telerob Authors
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

#include "telerob/rot.hpp"

#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "telerob/errors.hpp"
#include "telerob/random.hpp"

namespace telerob::rot {
namespace {

CMatrix same(const CMatrix& x) { return x; }
CMatrix negated(const CMatrix& x) { return -x; }

void warn_if_relaxed(std::size_t dv, std::size_t db) {
  if (!ppt_is_exact(dv, db)) spdlog::warn("{}", kPptRelaxationWarning);
}

conic::SdpSolution solve_checked(const conic::SdpProblem& p, double tol, const char* what) {
  conic::SdpSolution s = conic::solve(p, {tol, 200});
  if (s.status != conic::Status::kOptimal) {
    throw SolverError(fmt::format("{}: solver returned {} ({})", what,
                                  conic::to_string(s.status), s.detail));
  }
  return s;
}

}  // namespace

bool ppt_is_exact(std::size_t d1, std::size_t d2) { return d1 * d2 <= 6; }

conic::SdpProblem build_primal_problem(const TeleportationInstrument& instr) {
  const std::size_t dv = instr.dv();
  const std::size_t db = instr.db();
  const std::size_t n = dv * db;
  const double dvd = static_cast<double>(dv);
  conic::SdpProblem p;
  std::vector<std::size_t> f(instr.outcomes());
  for (std::size_t a = 0; a < instr.outcomes(); ++a) {
    f[a] = p.add_ppt_block(Dims{dv, db});
    const std::size_t s = p.add_block(n);
    p.add_hermitian_equality(
        {{f[a], [dvd](const CMatrix& x) { return CMatrix(dvd * x); }}, {s, negated}},
        dvd * instr[a]);
  }
  const std::size_t tau = p.add_block(db);
  const std::size_t t = p.add_block(n);
  std::vector<conic::MapTerm> terms;
  for (std::size_t fa : f) terms.push_back({fa, [dvd](const CMatrix& x) { return CMatrix(dvd * x); }});
  terms.push_back({t, same});
  terms.push_back({tau, [dv](const CMatrix& x) {
                     return CMatrix(-linalg::tensor(linalg::identity(dv), x));
                   }});
  p.add_hermitian_equality(terms, CMatrix::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n)));
  p.set_objective({{tau, linalg::identity(db)}}, -1.0);
  return p;
}

conic::SdpProblem build_dual_problem(const TeleportationInstrument& instr) {
  const std::size_t dv = instr.dv();
  const std::size_t db = instr.db();
  const std::size_t n = dv * db;
  const Dims dims{dv, db};
  conic::SdpProblem p;
  const std::size_t b = p.add_block(n);
  std::vector<conic::Term> objective;
  for (std::size_t a = 0; a < instr.outcomes(); ++a) {
    const std::size_t wa = p.add_block(n);
    const std::size_t pa = p.add_block(n);
    const std::size_t qa = p.add_block(n);
    p.add_hermitian_equality(
        {{b, same},
         {wa, negated},
         {pa, negated},
         {qa, [dims](const CMatrix& x) { return CMatrix(-linalg::partial_transpose(x, dims, 1)); }}},
        CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    objective.push_back({wa, CMatrix(-static_cast<double>(dv) * instr[a])});
  }
  p.add_hermitian_equality(
      {{b, [dims](const CMatrix& x) { return linalg::partial_trace(x, dims, {1}); }}},
      linalg::identity(db));
  p.set_objective(std::move(objective), 1.0);
  return p;
}

RotPrimalSolution rot_primal(const TeleportationInstrument& instr, double tol) {
  warn_if_relaxed(instr.dv(), instr.db());
  const conic::SdpProblem p = build_primal_problem(instr);
  RotPrimalSolution out;
  out.certificate = solve_checked(p, tol, "rot_primal");
  const std::size_t k = instr.outcomes();
  for (std::size_t a = 0; a < k; ++a) out.classical_ops.push_back(out.certificate.primal_blocks[2 * a]);
  out.tau = out.certificate.primal_blocks[2 * k];
  out.value = out.tau.trace().real() - 1.0;

  // Invariants, checked on the returned operators.
  const double dv = static_cast<double>(instr.dv());
  const double slack = 10.0 * tol;
  CMatrix total = CMatrix::Zero(instr[0].rows(), instr[0].cols());
  for (std::size_t a = 0; a < k; ++a) {
    if (linalg::min_eigenvalue(dv * (out.classical_ops[a] - instr[a])) < -slack) {
      throw SolverError(fmt::format("rot_primal: F_{} does not dominate J_{}", a, a));
    }
    total += out.classical_ops[a];
  }
  const CMatrix cover = linalg::tensor(linalg::identity(instr.dv()), out.tau) - dv * total;
  if (linalg::min_eigenvalue(cover) < -slack) {
    throw SolverError("rot_primal: d_V sum_a F_a exceeds 1 (x) tau");
  }
  if (out.value < -slack) throw SolverError("rot_primal: negative robustness");
  return out;
}

RotDualSolution rot_dual(const TeleportationInstrument& instr, double tol) {
  warn_if_relaxed(instr.dv(), instr.db());
  const conic::SdpProblem p = build_dual_problem(instr);
  RotDualSolution out;
  out.dv = instr.dv();
  out.db = instr.db();
  out.certificate = solve_checked(p, tol, "rot_dual");
  const auto& x = out.certificate.primal_blocks;
  out.b_op = x[0];
  for (std::size_t a = 0; a < instr.outcomes(); ++a) {
    out.witnesses.push_back(x[1 + 3 * a]);
    out.decompositions.emplace_back(x[2 + 3 * a], x[3 + 3 * a]);
  }
  out.value = dual_objective(out, instr);

  const double slack = 10.0 * tol;
  const Dims dims{out.dv, out.db};
  const CMatrix marg = linalg::partial_trace(out.b_op, dims, {1});
  if ((marg - linalg::identity(out.db)).cwiseAbs().maxCoeff() > slack) {
    throw SolverError("rot_dual: tr_V B differs from the identity");
  }
  for (std::size_t a = 0; a < instr.outcomes(); ++a) {
    const auto& [pa, qa] = out.decompositions[a];
    const CMatrix res = out.b_op - out.witnesses[a] - pa - linalg::partial_transpose(qa, dims, 1);
    if (res.cwiseAbs().maxCoeff() > slack) {
      throw SolverError(fmt::format("rot_dual: witness decomposition {} fails", a));
    }
  }
  if (std::abs(out.value - (-out.certificate.primal_value)) > slack) {
    throw SolverError("rot_dual: objective disagrees with solver value");
  }
  return out;
}

double dual_objective(const RotDualSolution& dual, const TeleportationInstrument& instr) {
  if (dual.witnesses.size() != instr.outcomes() || dual.dv != instr.dv() ||
      dual.db != instr.db()) {
    throw DimensionError("dual witnesses do not match the instrument");
  }
  double v = 0.0;
  for (std::size_t a = 0; a < instr.outcomes(); ++a) v += linalg::inner(dual.witnesses[a], instr[a]);
  return static_cast<double>(instr.dv()) * v - 1.0;
}

double rot(const TeleportationInstrument& instr, double tol) {
  const RotPrimalSolution primal = rot_primal(instr, tol);
  const RotDualSolution dual = rot_dual(instr, tol);
  if (std::abs(primal.value - dual.value) > 10.0 * tol) {
    throw SolverError(fmt::format("rot: primal {:.17g} and dual {:.17g} disagree",
                                  primal.value, dual.value));
  }
  return 0.5 * (primal.value + dual.value);
}

double robustness_of_entanglement(const DensityMatrix& rho, double tol) {
  if (rho.dims().size() != 2) throw DimensionError("robustness_of_entanglement: state must be bipartite");
  const std::size_t d1 = rho.dims()[0];
  const std::size_t d2 = rho.dims()[1];
  warn_if_relaxed(d1, d2);
  conic::SdpProblem p;
  const std::size_t sigma = p.add_ppt_block(Dims{d1, d2});
  const std::size_t s = p.add_block(d1 * d2);
  p.add_hermitian_equality({{sigma, same}, {s, negated}}, rho.matrix());
  p.set_objective({{sigma, linalg::identity(d1 * d2)}}, -1.0);
  const conic::SdpSolution sol = solve_checked(p, tol, "robustness_of_entanglement");
  return 0.5 * (sol.primal_value + sol.dual_value);
}

namespace {

// Best POVM for fixed dual witnesses: maximize sum_a tr[K_a M_a].
Povm best_measurement(const RotDualSolution& dual, const DensityMatrix& rho, std::size_t dv,
                      double tol) {
  const std::size_t da = rho.dims()[0];
  const std::size_t db = rho.dims()[1];
  const std::size_t n = dv * da;
  const CMatrix lifted = linalg::tensor(linalg::identity(dv), rho.matrix());
  const Dims vab{dv, da, db};
  conic::SdpProblem p;
  std::vector<conic::Term> objective;
  std::vector<conic::MapTerm> sum;
  std::vector<std::size_t> blocks;
  for (const CMatrix& a : dual.witnesses) {
    const std::size_t m = p.add_block(n);
    blocks.push_back(m);
    // tr[A J(M)] with J(M) = (1/d_V) tr_A[(M^{T_V} (x) 1)(1 (x) rho)].
    const CMatrix kernel = linalg::functional_matrix(n, [&](const CMatrix& x) {
      const CMatrix j = linalg::partial_trace(
          linalg::tensor(linalg::partial_transpose(x, Dims{dv, da}, 0), linalg::identity(db)) * lifted,
          vab, {0, 2});
      return (a * j).trace() / static_cast<double>(dv);
    });
    objective.push_back({m, CMatrix(-0.5 * (kernel + kernel.adjoint()))});
    sum.push_back({m, same});
  }
  p.add_hermitian_equality(sum, linalg::identity(n));
  p.set_objective(std::move(objective));
  const conic::SdpSolution s = solve_checked(p, tol, "rot_max_over_povm");
  std::vector<CMatrix> elements;
  for (std::size_t m : blocks) elements.push_back(linalg::project_psd(s.primal_blocks[m]));
  // Renormalize away solver residue so the elements sum to the identity.
  CMatrix total = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const CMatrix& e : elements) total += e;
  const CMatrix fix = linalg::pinv_sqrt(total);
  for (CMatrix& e : elements) e = fix * e * fix;
  return Povm(std::move(elements), Dims{dv, da});
}

}  // namespace

SeesawResult rot_max_over_povm(const DensityMatrix& rho, int rounds, std::uint64_t seed,
                               int restarts, double tol) {
  if (rho.dims().size() != 2) throw DimensionError("rot_max_over_povm: state must be bipartite");
  if (rounds < 1) throw ValidationError("rot_max_over_povm: rounds must be positive");
  const std::size_t da = rho.dims()[0];
  const std::size_t dv = da;
  random::Rng rng(seed);

  std::vector<Povm> starts;
  if (da >= 2) starts.push_back(bell_povm(da));
  for (int r = 0; r < restarts; ++r) starts.push_back(random::random_povm(Dims{dv, da}, dv * da, rng));

  SeesawResult best{-1.0, starts.front(), {}};
  for (const Povm& start : starts) {
    Povm current = start;
    std::vector<double> history;
    double previous = -1.0;
    bool improved = false;
    for (int round = 0; round < rounds; ++round) {
      const TeleportationInstrument instr = build_instrument(current, rho);
      const RotDualSolution dual = rot_dual(instr, tol);
      if (dual.value < previous - 1e-6) {
        throw SolverError(fmt::format(
            "rot_max_over_povm: see-saw value dropped from {:.12f} to {:.12f} in round {}",
            previous, dual.value, round));
      }
      history.push_back(dual.value);
      previous = std::max(previous, dual.value);
      if (dual.value > best.value) {
        best.value = dual.value;
        best.measurement = current;
        improved = true;
      }
      current = best_measurement(dual, rho, dv, tol);
    }
    if (improved) best.history = std::move(history);
  }
  return best;
}

}  // namespace telerob::rot
