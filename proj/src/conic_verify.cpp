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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "telerob/conic.hpp"
#include "telerob/errors.hpp"

namespace telerob::conic {

double decomposable_defect(const CMatrix& z, const Dims& dims) {
  dims.check_side(z.rows());
  const std::size_t n = dims.total();
  const std::size_t last = dims.size() - 1;
  SdpProblem aux;
  const std::size_t p = aux.add_block(n);
  const std::size_t q = aux.add_block(n);
  const std::size_t t = aux.add_block(1);
  const CMatrix identity = linalg::identity(n);
  aux.add_hermitian_equality(
      {{p, [](const CMatrix& x) { return x; }},
       {q, [&](const CMatrix& x) { return linalg::partial_transpose(x, dims, last); }},
       {t, [&](const CMatrix& x) { return CMatrix(-x(0, 0) * identity); }}},
      0.5 * (z + z.adjoint()));
  aux.set_objective({{t, CMatrix::Ones(1, 1)}});
  const SdpSolution s = solve(aux, {1e-9, 200});
  if (s.primal_blocks.empty()) {
    throw SolverError("decomposability check failed: " + s.detail);
  }
  // Certified upper bound from whatever iterate came back: with P, Q clipped
  // to the PSD cone, Z + (t + e) 1 = P + Q^{T} + (E + e 1) where E is the
  // residual and e = max(0, -lambda_min(E)).
  const double t_val = std::max(0.0, s.primal_blocks[t](0, 0).real());
  const CMatrix p_psd = linalg::project_psd(s.primal_blocks[p]);
  const CMatrix q_psd = linalg::project_psd(s.primal_blocks[q]);
  const CMatrix residual = 0.5 * (z + z.adjoint()) + t_val * identity - p_psd -
                           linalg::partial_transpose(q_psd, dims, last);
  return t_val + std::max(0.0, -linalg::min_eigenvalue(residual));
}

CertificateReport verify_certificate(const SdpProblem& problem,
                                     const SdpSolution& solution, double tol) {
  CertificateReport report;
  auto fail = [&](std::string what) {
    report.ok = false;
    report.failures.push_back(std::move(what));
  };
  const auto& blocks = problem.blocks();
  const auto& cons = problem.constraints();
  if (solution.primal_blocks.size() != blocks.size() ||
      solution.dual_multipliers.size() != cons.size()) {
    fail("shape: solution does not match problem");
    return report;
  }
  if (solution.status != Status::kOptimal) {
    fail("status: solver reported " + to_string(solution.status));
  }

  // Primal rows.
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const double v = problem.row_value(k, solution.primal_blocks) - cons[k].rhs;
    const double e = cons[k].sense == Sense::kEqual       ? std::abs(v)
                     : cons[k].sense == Sense::kLessEqual ? std::max(0.0, v)
                                                          : std::max(0.0, -v);
    report.primal_violation = std::max(report.primal_violation, e);
  }
  if (report.primal_violation > tol) {
    fail(fmt::format("primal_feasibility: row violation {:.3e}", report.primal_violation));
  }

  // Primal cones.
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const CMatrix& x = solution.primal_blocks[b];
    if (static_cast<std::size_t>(x.rows()) != blocks[b].size) {
      fail(fmt::format("shape: primal block {} has side {}", b, x.rows()));
      return report;
    }
    double defect = std::max(0.0, -linalg::min_eigenvalue(x));
    if (blocks[b].cone == Cone::kPpt) {
      const CMatrix pt = linalg::partial_transpose(x, blocks[b].ppt_dims,
                                                   blocks[b].ppt_dims.size() - 1);
      defect = std::max(defect, -linalg::min_eigenvalue(pt));
    }
    report.primal_cone_violation = std::max(report.primal_cone_violation, defect);
    if (defect > tol) {
      fail(fmt::format("primal_cone: block {} leaves its cone by {:.3e}", b, defect));
    }
  }

  // Dual slacks recomputed from the multipliers.
  std::vector<CMatrix> z;
  for (const Block& blk : blocks) {
    const auto n = static_cast<Eigen::Index>(blk.size);
    z.push_back(CMatrix::Zero(n, n));
  }
  for (const Term& t : problem.objective()) z[t.block] += 0.5 * (t.coeff + t.coeff.adjoint());
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const double yk = solution.dual_multipliers[k];
    for (const Term& t : cons[k].terms) z[t.block] -= yk * 0.5 * (t.coeff + t.coeff.adjoint());
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    double defect = std::max(0.0, -linalg::min_eigenvalue(z[b]));
    if (blocks[b].cone == Cone::kPpt && defect > 0.0) {
      defect = decomposable_defect(z[b], blocks[b].ppt_dims);
    }
    report.dual_cone_violation = std::max(report.dual_cone_violation, defect);
    if (defect > tol) {
      fail(fmt::format("dual_cone: slack of block {} leaves the dual cone by {:.3e}",
                       b, defect));
    }
  }
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const double yk = solution.dual_multipliers[k];
    if (cons[k].sense == Sense::kGreaterEqual && yk < -tol) {
      fail(fmt::format("dual_sign: multiplier of >= row {} is {:.3e}", k, yk));
    }
    if (cons[k].sense == Sense::kLessEqual && yk > tol) {
      fail(fmt::format("dual_sign: multiplier of <= row {} is {:.3e}", k, yk));
    }
  }

  // Reported values against recomputed ones.
  const double primal = problem.objective_value(solution.primal_blocks);
  double dual = problem.objective_constant();
  for (std::size_t k = 0; k < cons.size(); ++k) dual += cons[k].rhs * solution.dual_multipliers[k];
  if (std::abs(primal - solution.primal_value) > tol * (1.0 + std::abs(primal))) {
    fail(fmt::format("primal_value: reported {:.17g}, recomputed {:.17g}",
                     solution.primal_value, primal));
  }
  if (std::abs(dual - solution.dual_value) > tol * (1.0 + std::abs(dual))) {
    fail(fmt::format("dual_value: reported {:.17g}, recomputed {:.17g}",
                     solution.dual_value, dual));
  }
  report.duality_gap = solution.primal_value - solution.dual_value;
  if (report.duality_gap < -tol) {
    fail(fmt::format("weak_duality: primal {:.17g} below dual {:.17g}",
                     solution.primal_value, solution.dual_value));
  }
  if (std::abs(primal - dual) > tol * (1.0 + std::abs(primal) + std::abs(dual))) {
    fail(fmt::format("duality_gap: |{:.17g} - {:.17g}| exceeds tolerance", primal, dual));
  }
  return report;
}

}  // namespace telerob::conic
