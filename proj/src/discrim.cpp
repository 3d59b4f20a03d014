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


#include "telerob/discrim.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "telerob/channels.hpp"
#include "telerob/conic.hpp"
#include "telerob/errors.hpp"

namespace telerob::discrim {

namespace {

constexpr double kChannelTol = 1e-8;

CMatrix forward_from_adjoint(const CMatrix& g, std::size_t d) {
  return channels::adjoint_choi(0.5 * (g + g.adjoint()), d, d);
}

}  // namespace

DiscriminationInstrument::DiscriminationInstrument(std::vector<ChoiOperator> branches,
                                                   std::vector<std::size_t> multiplicities)
    : branches_(std::move(branches)), multiplicities_(std::move(multiplicities)) {
  if (branches_.empty()) throw ValidationError("DiscriminationInstrument: no subchannels");
  if (multiplicities_.size() != branches_.size()) {
    throw DimensionError("DiscriminationInstrument: multiplicity count differs from branch count");
  }
  const std::size_t d = branches_.front().in_dim();
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix marginal = CMatrix::Zero(n, n);
  for (std::size_t x = 0; x < branches_.size(); ++x) {
    const ChoiOperator& c = branches_[x];
    if (c.in_dim() != d || c.out_dim() != d) {
      throw DimensionError(fmt::format(
          "DiscriminationInstrument: branch {} is {} -> {}, expected {} -> {}", x, c.in_dim(),
          c.out_dim(), d, d));
    }
    if (multiplicities_[x] == 0) {
      throw ValidationError(fmt::format("DiscriminationInstrument: branch {} has multiplicity 0", x));
    }
    marginal += static_cast<double>(multiplicities_[x]) *
                linalg::partial_trace(c.matrix(), Dims{d, d}, {0});
    adjoint_.push_back(channels::adjoint_choi(c.matrix(), d, d));
  }
  const double defect =
      (marginal - linalg::identity(d) / static_cast<double>(d)).cwiseAbs().maxCoeff();
  if (defect > kChannelTol) {
    throw ValidationError(fmt::format(
        "DiscriminationInstrument: subchannels do not sum to a channel (defect {:.3e})", defect));
  }
}

DiscriminationInstrument::DiscriminationInstrument(std::vector<ChoiOperator> branches)
    : DiscriminationInstrument(branches, std::vector<std::size_t>(branches.size(), 1)) {}

std::size_t DiscriminationInstrument::label_count() const {
  std::size_t total = 0;
  for (std::size_t m : multiplicities_) total += m;
  return total;
}

CMatrix DiscriminationInstrument::adjoint_on_identity(std::size_t x) const {
  const std::size_t d = dim();
  return channels::apply_choi(adjoint_[x], d, d, linalg::identity(d));
}

double DiscrimConstruction::finite_n_factor() const {
  return 1.0 / (1.0 + 1.0 / (alpha * static_cast<double>(fictitious_count)));
}

DiscriminationInstrument pauli_twirl(std::size_t d) {
  const double scale = 1.0 / static_cast<double>(d * d);
  std::vector<ChoiOperator> branches;
  for (const CMatrix& w : linalg::weyl_operators(d)) {
    branches.emplace_back(
        channels::choi_of([&](const CMatrix& x) { return CMatrix(scale * w * x * w.adjoint()); },
                          d, d),
        d, d);
  }
  return DiscriminationInstrument(std::move(branches));
}

TeleportationInstrument strategy_instrument(const Strategy& s) {
  const Dims& md = s.measurement.dims();
  const Dims& rd = s.memory.dims();
  if (md.size() != 2 || rd.size() != 2 || !(md == rd)) {
    throw DimensionError("strategy: measurement and memory must both live on V (x) A");
  }
  const std::size_t dv = rd[0];
  const std::size_t da = rd[1];
  DensityMatrix swapped(linalg::swap_factors(s.memory.matrix(), dv, da), Dims{da, dv});
  return build_instrument(s.measurement, swapped);
}

double p_succ(const DiscriminationInstrument& e, const TeleportationInstrument& instr) {
  const std::size_t d = e.dim();
  if (instr.dv() != d || instr.db() != d) {
    throw DimensionError(fmt::format("p_succ: subchannels act on {} but the instrument is {} -> {}",
                                     d, instr.dv(), instr.db()));
  }
  double total = 0.0;
  for (const CMatrix& j : instr.ops()) {
    double best = -std::numeric_limits<double>::infinity();
    for (const CMatrix& g : e.adjoint_chois()) {
      const double v = linalg::inner(g, j);
      if (v > best) best = v;
    }
    total += best;
  }
  return static_cast<double>(d * d) * total;
}

double p_succ_physical(const DiscriminationInstrument& e, const Strategy& s) {
  const std::size_t d = e.dim();
  const Dims& rd = s.memory.dims();
  if (rd.size() != 2 || rd[0] != d || !(s.measurement.dims() == rd)) {
    throw DimensionError("p_succ_physical: strategy does not match the subchannel dimension");
  }
  std::vector<CMatrix> outputs;
  for (const ChoiOperator& c : e.branches()) {
    outputs.push_back(channels::apply_to_first(c.matrix(), d, d, s.memory.matrix(), rd[1]));
  }
  double total = 0.0;
  for (const CMatrix& m : s.measurement.elements()) {
    double best = -std::numeric_limits<double>::infinity();
    for (const CMatrix& out : outputs) best = std::max(best, linalg::inner(m, out));
    total += best;
  }
  return total;
}

double classical_p_succ_ensemble(const DiscriminationInstrument& e, double tol) {
  const std::size_t d = e.dim();
  if (!rot::ppt_is_exact(d, d)) spdlog::warn("{}", rot::kPptRelaxationWarning);
  const double dd = static_cast<double>(d * d);
  conic::SdpProblem p;
  std::vector<conic::Term> objective;
  std::vector<conic::MapTerm> sum;
  for (const CMatrix& g : e.adjoint_chois()) {
    const std::size_t f = p.add_ppt_block(Dims{d, d});
    objective.push_back({f, CMatrix(-dd * 0.5 * (g + g.adjoint()))});
    sum.push_back({f, [](const CMatrix& x) { return x; }});
  }
  const std::size_t tau = p.add_block(d);
  sum.push_back({tau, [d](const CMatrix& x) {
                   return CMatrix(-linalg::tensor(linalg::identity(d), x) / static_cast<double>(d));
                 }});
  const auto n = static_cast<Eigen::Index>(d * d);
  p.add_hermitian_equality(sum, CMatrix::Zero(n, n));
  p.add_constraint({{{tau, linalg::identity(d)}}, conic::Sense::kEqual, 1.0});
  p.set_objective(std::move(objective));
  const conic::SdpSolution s = conic::solve(p, {tol, 200});
  if (s.status != conic::Status::kOptimal) {
    throw SolverError(fmt::format("classical_p_succ_ensemble: solver returned {} ({})",
                                  conic::to_string(s.status), s.detail));
  }
  return -0.5 * (s.primal_value + s.dual_value);
}

double classical_p_succ_product(const DiscriminationInstrument& e) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < e.branches().size(); ++x) {
    best = std::max(best, linalg::max_eigenvalue(linalg::hermitize(e.adjoint_on_identity(x))));
  }
  return best;
}

DiscrimBuild build_discrimination_from_dual(const rot::RotDualSolution& dual, std::size_t n) {
  const std::size_t d = dual.dv;
  if (dual.db != d) {
    throw DimensionError("build_discrimination_from_dual: requires d_V == d_B");
  }
  if (n == 0) throw ValidationError("build_discrimination_from_dual: N must be at least 1");
  if (dual.witnesses.empty()) throw ValidationError("build_discrimination_from_dual: no witnesses");
  const Dims dims{d, d};
  std::vector<CMatrix> witnesses;
  CMatrix marginal = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (const CMatrix& a : dual.witnesses) {
    witnesses.push_back(linalg::project_psd(a));
    marginal += linalg::partial_trace(witnesses.back(), dims, {1});
  }
  const double norm = linalg::max_eigenvalue(linalg::hermitize(marginal));
  if (!(norm > 1e-12)) {
    throw ValidationError("build_discrimination_from_dual: sum_x tr_V A_x vanishes");
  }
  const double alpha = 1.0 / norm;
  const double dv = static_cast<double>(d);
  std::vector<ChoiOperator> branches;
  std::vector<std::size_t> mult;
  for (const CMatrix& a : witnesses) {
    branches.emplace_back(forward_from_adjoint(alpha / dv * a, d), d, d);
    mult.push_back(1);
  }
  const CMatrix remainder = linalg::project_psd(
      linalg::hermitize(linalg::identity(d) - alpha * marginal));
  const CMatrix fict = linalg::tensor(linalg::identity(d), remainder) /
                       (static_cast<double>(n) * dv * dv);
  branches.emplace_back(forward_from_adjoint(fict, d), d, d);
  mult.push_back(n);
  DiscriminationInstrument e(std::move(branches), std::move(mult));
  return {std::move(e), DiscrimConstruction{alpha, n, dual}};
}

AdvantageRatio advantage_ratio(const DiscriminationInstrument& e,
                               const TeleportationInstrument& instr, double tol) {
  AdvantageRatio r;
  r.numerator = p_succ(e, instr);
  r.denominator = classical_p_succ_ensemble(e, tol);
  if (!(r.denominator >= 1e-12)) {
    throw ValidationError(
        fmt::format("advantage_ratio: degenerate classical success {:.3e}", r.denominator));
  }
  r.ratio = r.numerator / r.denominator;
  return r;
}

DiscriminationInstrument random_instrument(std::size_t d, std::size_t outcomes,
                                           random::Rng& rng, std::size_t env) {
  if (outcomes == 0 || env == 0) throw ValidationError("random_instrument: empty instrument");
  const CMatrix v = random::random_isometry(d, outcomes * env * d, rng);
  const auto dd = static_cast<Eigen::Index>(d);
  std::vector<ChoiOperator> branches;
  for (std::size_t x = 0; x < outcomes; ++x) {
    const CMatrix choi = channels::choi_of(
        [&](const CMatrix& rho) {
          CMatrix out = CMatrix::Zero(dd, dd);
          for (std::size_t k = 0; k < env; ++k) {
            const auto row = static_cast<Eigen::Index>((x * env + k) * d);
            const CMatrix kraus = v.middleRows(row, dd);
            out += kraus * rho * kraus.adjoint();
          }
          return out;
        },
        d, d);
    branches.emplace_back(choi, d, d);
  }
  return DiscriminationInstrument(std::move(branches));
}

}  // namespace telerob::discrim
