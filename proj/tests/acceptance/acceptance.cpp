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


// Acceptance run: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "telerob/conic.hpp"
#include "telerob/discrim.hpp"
#include "telerob/games.hpp"
#include "telerob/rot.hpp"
#include "telerob/simorder.hpp"

namespace {

using namespace telerob;

// Tolerances.
constexpr double kSolverTol = 1e-8;
constexpr double kClassicalT = 1e-6;
constexpr double kIdealT = 1e-5;
constexpr double kDualityGap = 1e-6;
constexpr double kVerifyTol = 1e-6;
constexpr double kFidelityThreshold = 1e-3;
constexpr double kIdealScore = 1e-9;
constexpr double kGameIdentity = 1e-4;
constexpr double kGameClassical = 1e-5;
constexpr double kSandwich = 1e-4;
constexpr double kWorkedExample = 1e-5;
constexpr double kSeesaw = 1e-4;
constexpr double kMonotone = 1e-6;
constexpr double kAlgebra = 1e-11;
constexpr double kRoundTrip = 1e-8;
constexpr double kRoutes = 1e-10;
constexpr double kDiscrepancy = 1e-4;
constexpr std::size_t kFictitious = 10000;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using testing::max_abs;

Check faithfulness() {
  Check c;
  random::Rng rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const TeleportationInstrument t = testing::product_instrument(2, 2 + rng.index(3), rng);
    worst = std::max(worst, rot::rot(t, kSolverTol));
  }
  c.require(worst <= kClassicalT, fmt::format("product instrument T = {:.3e}", worst));

  const TeleportationInstrument ideal = ideal_instrument(2);
  const double t = rot::rot(ideal, kSolverTol);
  c.require(std::abs(t - 1.0) <= kIdealT, fmt::format("ideal T = {:.12f}", t));

  // Hand certificates.
  const CMatrix one = linalg::identity(4);
  std::vector<CMatrix> primal;
  for (std::size_t a = 0; a < 4; ++a) {
    const CMatrix phi = testing::bell_projector(2, a);
    const CMatrix s = (phi + (one - phi) / 3.0) / 2.0;
    const CMatrix f = s / 2.0;
    primal.push_back(f);
    primal.push_back(2.0 * (f - ideal[a]));
  }
  primal.push_back(linalg::identity(2));
  primal.push_back(CMatrix::Zero(4, 4));
  conic::SdpSolution ps;
  ps.status = conic::Status::kOptimal;
  ps.primal_blocks = primal;
  const conic::SdpProblem pp = rot::build_primal_problem(ideal);
  double row_err = 0.0;
  for (std::size_t k = 0; k < pp.constraints().size(); ++k) {
    row_err = std::max(row_err, std::abs(pp.row_value(k, primal) - pp.constraints()[k].rhs));
  }
  double cone_err = 0.0;
  for (std::size_t b = 0; b < primal.size(); ++b) {
    cone_err = std::max(cone_err, -linalg::min_eigenvalue(primal[b]));
    if (pp.blocks()[b].cone == conic::Cone::kPpt) {
      cone_err = std::max(cone_err, -linalg::min_eigenvalue(testing::transpose_second(primal[b], 2, 2)));
    }
  }
  c.require(row_err <= 1e-12 && cone_err <= 1e-12,
            fmt::format("hand primal certificate infeasible ({:.3e}, {:.3e})", row_err, cone_err));
  c.require(std::abs(pp.objective_value(primal) - 1.0) <= 1e-12, "hand primal value differs from 1");

  const CMatrix b_op = one / 2.0;
  std::vector<CMatrix> dual{b_op};
  for (std::size_t a = 0; a < 4; ++a) {
    const CMatrix phi = testing::bell_projector(2, a);
    dual.push_back(phi);
    dual.push_back(CMatrix::Zero(4, 4));
    dual.push_back(testing::transpose_second(b_op - phi, 2, 2));
  }
  const conic::SdpProblem dp = rot::build_dual_problem(ideal);
  row_err = 0.0;
  for (std::size_t k = 0; k < dp.constraints().size(); ++k) {
    row_err = std::max(row_err, std::abs(dp.row_value(k, dual) - dp.constraints()[k].rhs));
  }
  cone_err = 0.0;
  for (const CMatrix& x : dual) cone_err = std::max(cone_err, -linalg::min_eigenvalue(x));
  c.require(row_err <= 1e-12 && cone_err <= 1e-12,
            fmt::format("hand dual certificate infeasible ({:.3e}, {:.3e})", row_err, cone_err));
  c.require(std::abs(-dp.objective_value(dual) - 1.0) <= 1e-12, "hand dual value differs from 1");
  c.detail = c.ok ? fmt::format("max product T {:.2e}, ideal T {:.10f}", worst, t) : c.detail;
  return c;
}

Check strong_duality() {
  Check c;
  random::Rng rng(1002);
  double worst_gap = 0.0;
  for (int i = 0; i < 30; ++i) {
    const TeleportationInstrument t = testing::random_instrument(2, 2 + rng.index(3), 1 + rng.index(4), rng);
    const rot::RotPrimalSolution p = rot::rot_primal(t, kSolverTol);
    const rot::RotDualSolution d = rot::rot_dual(t, kSolverTol);
    worst_gap = std::max(worst_gap, std::abs(p.value - d.value));
    const auto rp = conic::verify_certificate(rot::build_primal_problem(t), p.certificate, kVerifyTol);
    const auto rd = conic::verify_certificate(rot::build_dual_problem(t), d.certificate, kVerifyTol);
    c.require(rp.ok, fmt::format("instrument {}: primal certificate: {}", i,
                                 rp.failures.empty() ? "" : rp.failures.front()));
    c.require(rd.ok, fmt::format("instrument {}: dual certificate: {}", i,
                                 rd.failures.empty() ? "" : rd.failures.front()));
  }
  c.require(worst_gap <= kDualityGap, fmt::format("gap {:.3e}", worst_gap));
  if (c.ok) c.detail = fmt::format("max |primal - dual| {:.2e}", worst_gap);
  return c;
}

Check fidelity_threshold() {
  Check c;
  const InputEnsemble inputs = mub_states(2);
  const games::CorrelationGame g = games::fidelity_game_of(inputs, 4);
  const double classical = games::classical_game_score(g, games::UnitaryFamily::pauli_group(), kSolverTol).value;
  const double ideal = games::game_score(g, ideal_instrument(2), games::UnitaryFamily::pauli_group()).value;
  c.require(std::abs(classical - 2.0 / 3.0) <= kFidelityThreshold, fmt::format("classical {:.9f}", classical));
  c.require(std::abs(ideal - 1.0) <= kIdealScore, fmt::format("ideal {:.12f}", ideal));
  if (c.ok) c.detail = fmt::format("classical {:.9f}, ideal {:.12f}", classical, ideal);
  return c;
}

Check game_identity() {
  Check c;
  random::Rng rng(1004);
  double worst_id = 0.0, worst_ratio = 0.0, worst_classical = 0.0;
  for (int i = 0; i < 10; ++i) {
    const TeleportationInstrument t = testing::random_instrument(2, 2 + rng.index(3), 1, rng);
    const rot::RotDualSolution dual = rot::rot_dual(t, kSolverTol);
    const double big_t = rot::rot(t, kSolverTol);
    const games::CorrelationGame g = games::build_game_from_dual(dual);
    const double score = games::game_score(g, t, games::UnitaryFamily::identity_only()).value;
    const double classical =
        games::classical_game_score(g, games::UnitaryFamily::identity_only(), kSolverTol).value;
    worst_id = std::max(worst_id, std::abs(2.0 * score - (1.0 + big_t)));
    worst_ratio = std::max(worst_ratio, (1.0 + big_t) - score / classical);
    worst_classical = std::max(worst_classical, classical - 0.5);
  }
  c.require(worst_id <= kGameIdentity, fmt::format("|d_V score - (1 + T)| = {:.3e}", worst_id));
  c.require(worst_ratio <= kGameIdentity, fmt::format("ratio short of 1 + T by {:.3e}", worst_ratio));
  c.require(worst_classical <= kGameClassical, fmt::format("classical exceeds 1/d_V by {:.3e}", worst_classical));
  if (c.ok) {
    c.detail = fmt::format("identity err {:.2e}, ratio slack {:.2e}, classical excess {:.2e}", worst_id,
                           worst_ratio, worst_classical);
  }
  return c;
}

Check discrimination_sandwich() {
  Check c;
  random::Rng rng(1005);
  double worst_upper = -1e300, worst_lower = -1e300;
  for (int i = 0; i < 20; ++i) {
    const TeleportationInstrument t = testing::random_instrument(2, 2 + rng.index(3), 1 + rng.index(2), rng);
    const double big_t = rot::rot(t, kSolverTol);
    const discrim::DiscriminationInstrument e = discrim::random_instrument(2, 2 + rng.index(3), rng);
    const double ratio = discrim::advantage_ratio(e, t, kSolverTol).ratio;
    worst_upper = std::max(worst_upper, ratio - (1.0 + big_t));

    const rot::RotDualSolution dual = rot::rot_dual(t, kSolverTol);
    const discrim::DiscrimBuild b = discrim::build_discrimination_from_dual(dual, kFictitious);
    const double star = discrim::advantage_ratio(b.instrument, t, kSolverTol).ratio;
    const double bound = (1.0 + big_t) * b.construction.finite_n_factor();
    worst_lower = std::max(worst_lower, bound - star);
  }
  c.require(worst_upper <= kSandwich, fmt::format("ratio exceeds 1 + T by {:.3e}", worst_upper));
  c.require(worst_lower <= kSandwich, fmt::format("E* ratio below bound by {:.3e}", worst_lower));
  if (c.ok) c.detail = fmt::format("upper slack {:.2e}, lower slack {:.2e}", -worst_upper, -worst_lower);
  return c;
}

Check worked_example() {
  Check c;
  const TeleportationInstrument ideal = ideal_instrument(2);
  const rot::RotDualSolution dual = rot::rot_dual(ideal, kSolverTol);
  const discrim::DiscrimBuild b = discrim::build_discrimination_from_dual(dual, kFictitious);
  const discrim::DiscriminationInstrument twirl = discrim::pauli_twirl(2);
  double branch_err = 0.0;
  for (std::size_t x = 0; x < 4; ++x) {
    branch_err = std::max(branch_err, max_abs(b.instrument.branches()[x].matrix() - twirl.branches()[x].matrix()));
  }
  branch_err = std::max(branch_err, max_abs(b.instrument.branches().back().matrix()));
  const double alpha = b.construction.alpha;
  const double p = discrim::p_succ(b.instrument, ideal);
  const double classical = discrim::classical_p_succ_ensemble(b.instrument, kSolverTol);
  const double t = rot::rot(ideal, kSolverTol);
  c.require(branch_err <= kWorkedExample, fmt::format("E* differs from the twirl by {:.3e}", branch_err));
  c.require(std::abs(alpha - 0.5) <= kWorkedExample, fmt::format("alpha {:.9f}", alpha));
  c.require(std::abs(p - 1.0) <= kWorkedExample, fmt::format("p_succ {:.9f}", p));
  c.require(std::abs(classical - 0.5) <= kWorkedExample, fmt::format("classical {:.9f}", classical));
  c.require(std::abs(p / classical - 2.0) <= kWorkedExample, fmt::format("ratio {:.9f}", p / classical));
  c.require(std::abs(p / classical - (1.0 + t)) <= kWorkedExample, fmt::format("ratio vs 1 + T {:.3e}",
                                                                              p / classical - 1.0 - t));
  if (c.ok) c.detail = fmt::format("alpha {:.6f}, p_succ {:.6f}, classical {:.6f}", alpha, p, classical);
  return c;
}

Check rot_roe_link() {
  Check c;
  const DensityMatrix phi(linalg::phi_plus(2), Dims{2, 2});
  const double seesaw = rot::rot_max_over_povm(phi, 5, 2024, 2, kSolverTol).value;
  const double re = rot::robustness_of_entanglement(phi, kSolverTol);
  c.require(std::abs(seesaw - 1.0) <= kSeesaw, fmt::format("see-saw {:.9f}", seesaw));
  c.require(std::abs(re - 1.0) <= kSeesaw, fmt::format("R_E {:.9f}", re));
  if (c.ok) c.detail = fmt::format("see-saw {:.9f}, R_E {:.9f}", seesaw, re);
  return c;
}

Check monotonicity() {
  Check c;
  random::Rng rng(1008);
  const TeleportationInstrument t = testing::random_instrument(2, 3, 1, rng);
  simorder::MonotoneOptions opts;
  opts.classical_samples = 50;
  opts.quantum_samples = 20;
  opts.tol = kMonotone;
  const simorder::MonotoneReport r = simorder::check_monotones(t, opts, 1008);
  c.require(r.ok(), fmt::format("{} violations, first on {}", r.violations.size(),
                                r.violations.empty() ? "" : r.violations.front().quantity));
  std::size_t mix_violations = 0;
  for (int i = 0; i < 20; ++i) {
    const TeleportationInstrument j = testing::random_instrument(2, 3, 1 + rng.index(2), rng);
    const TeleportationInstrument k = testing::random_instrument(2, 3, 1 + rng.index(2), rng);
    const double p = rng.uniform();
    const double lhs = rot::rot(simorder::mix(j, k, p), kSolverTol);
    const double rhs = p * rot::rot(j, kSolverTol) + (1.0 - p) * rot::rot(k, kSolverTol);
    if (lhs > rhs + kMonotone) ++mix_violations;
  }
  c.require(mix_violations == 0, fmt::format("{} convexity violations", mix_violations));
  if (c.ok) c.detail = fmt::format("{} simulation checks and 20 mixtures clean", r.checks);
  return c;
}

Check structural() {
  Check c;
  random::Rng rng(1009);
  double algebra = 0.0;
  for (std::size_t d : {2u, 3u}) {
    const CMatrix e = rng.ginibre(d, d);
    const CVector phi = linalg::max_entangled(d).vector;
    algebra = std::max(algebra, (linalg::tensor(linalg::identity(d), e) * phi -
                                 linalg::tensor(CMatrix(e.transpose()), linalg::identity(d)) * phi)
                                    .cwiseAbs()
                                    .maxCoeff());
    const std::size_t dc = 2;
    const CMatrix x = rng.ginibre(d * dc, d * dc);
    const CMatrix transfer = linalg::partial_trace(
        linalg::tensor(linalg::phi_plus(d), linalg::identity(dc)) * linalg::tensor(linalg::identity(d), x),
        Dims{d, d, dc}, {0, 2});
    algebra = std::max(algebra, max_abs(transfer - linalg::partial_transpose(x, Dims{d, dc}, 0) /
                                                       static_cast<double>(d)));
    const CMatrix y = rng.ginibre(dc * d, dc * d);
    const CMatrix left = linalg::tensor({linalg::identity(dc), linalg::phi_plus(d), linalg::identity(d)});
    const CMatrix snake =
        linalg::partial_trace(left * linalg::tensor(y, linalg::phi_plus(d)), Dims{dc, d, d, d}, {0, 3});
    algebra = std::max(algebra, max_abs(snake - y / static_cast<double>(d * d)));
  }
  c.require(algebra <= kAlgebra, fmt::format("identity residual {:.3e}", algebra));

  double round_trip = 0.0;
  for (int i = 0; i < 10; ++i) {
    const TeleportationInstrument t = testing::random_instrument(2, 3, 1 + rng.index(4), rng);
    const Realization r = realize_from_choi(t.ops(), 2, 2);
    const TeleportationInstrument back = build_instrument(r.measurement, r.state);
    for (std::size_t a = 0; a < t.outcomes(); ++a) round_trip = std::max(round_trip, max_abs(back[a] - t[a]));
  }
  c.require(round_trip <= kRoundTrip, fmt::format("realize round trip {:.3e}", round_trip));

  double routes = 0.0;
  for (int i = 0; i < 10; ++i) {
    const discrim::Strategy s = testing::random_strategy(2, 2, 2 + rng.index(3), rng);
    const discrim::DiscriminationInstrument e = discrim::random_instrument(2, 2 + rng.index(3), rng);
    routes = std::max(routes, std::abs(discrim::p_succ(e, discrim::strategy_instrument(s)) -
                                       discrim::p_succ_physical(e, s)));
  }
  c.require(routes <= kRoutes, fmt::format("p_succ routes differ by {:.3e}", routes));
  if (c.ok) {
    c.detail = fmt::format("identities {:.1e}, round trip {:.1e}, routes {:.1e}", algebra, round_trip, routes);
  }
  return c;
}

// Product-probe closed form against the entangled-probe ensemble SDP.
Check discrepancy() {
  Check c;
  const discrim::DiscriminationInstrument twirl = discrim::pauli_twirl(2);
  const double product = discrim::classical_p_succ_product(twirl);
  const double ensemble = discrim::classical_p_succ_ensemble(twirl, kSolverTol);
  c.require(std::abs(product - 0.25) <= kDiscrepancy, fmt::format("product {:.9f}", product));
  c.require(std::abs(ensemble - 0.5) <= kDiscrepancy, fmt::format("ensemble {:.9f}", ensemble));
  if (c.ok) c.detail = fmt::format("product {:.9f}, ensemble {:.9f}", product, ensemble);
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"faithfulness", faithfulness},
      {"strong duality", strong_duality},
      {"classical fidelity threshold", fidelity_threshold},
      {"game advantage identity", game_identity},
      {"discrimination sandwich", discrimination_sandwich},
      {"worked example", worked_example},
      {"RoT and robustness of entanglement", rot_roe_link},
      {"monotonicity and convexity", monotonicity},
      {"structural identities", structural},
      {"product versus ensemble benchmark", discrepancy},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = criteria[i].second();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!result.ok) ++failures;
    std::cout << fmt::format("[{}] AC{} {}: {} ({:.2f} s)", result.ok ? "PASS" : "FAIL", i + 1,
                             criteria[i].first, result.detail, secs)
              << std::endl;
  }
  std::cout << fmt::format("{}/{} criteria passed", criteria.size() - failures, criteria.size()) << std::endl;
  return failures == 0 ? 0 : 1;
}
