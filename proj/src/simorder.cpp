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


#include "telerob/simorder.hpp"

#include <cmath>

#include <fmt/format.h>

#include "telerob/channels.hpp"
#include "telerob/discrim.hpp"
#include "telerob/errors.hpp"
#include "telerob/games.hpp"
#include "telerob/rot.hpp"

namespace telerob::simorder {

namespace {

constexpr double kStochasticTol = 1e-12;
constexpr double kChannelTol = 1e-9;

void check_stochastic(const RMatrix& p, const std::string& what) {
  if (p.rows() == 0 || p.cols() == 0) throw DimensionError(what + ": empty matrix");
  if (!p.allFinite()) throw ValidationError(what + ": non-finite entry");
  if (p.minCoeff() < 0.0) throw ValidationError(what + ": negative entry");
  for (Eigen::Index a = 0; a < p.cols(); ++a) {
    const double s = p.col(a).sum();
    if (std::abs(s - 1.0) > kStochasticTol) {
      throw ValidationError(fmt::format("{}: column {} sums to {:.17g}", what, a, s));
    }
  }
}

void check_channel(const CMatrix& choi, std::size_t in, std::size_t out, const std::string& what) {
  Dims{in, out}.check_side(choi.rows());
  if (linalg::hermiticity_defect(choi) > kChannelTol) {
    throw ValidationError(what + ": Choi operator not Hermitian");
  }
  const double scale = std::max(1.0, choi.cwiseAbs().maxCoeff());
  if (linalg::min_eigenvalue(linalg::hermitize(choi)) < -kChannelTol * scale) {
    throw ValidationError(what + ": not completely positive");
  }
  const double tp = channels::trace_preservation_defect(choi, in, out);
  if (tp > kChannelTol) {
    throw ValidationError(fmt::format("{}: not trace preserving (defect {:.3e})", what, tp));
  }
}

}  // namespace

ClassicalSimulation::ClassicalSimulation(RMatrix stochastic) : p_(std::move(stochastic)) {
  check_stochastic(p_, "ClassicalSimulation");
}

QuantumSimulation::QuantumSimulation(std::vector<double> weights,
                                     std::vector<RMatrix> conditionals, std::vector<CMatrix> pre,
                                     std::vector<CMatrix> post, Dims pre_dims, Dims post_dims)
    : weights_(std::move(weights)),
      conditionals_(std::move(conditionals)),
      pre_(std::move(pre)),
      post_(std::move(post)),
      pre_dims_(std::move(pre_dims)),
      post_dims_(std::move(post_dims)) {
  const std::size_t n = weights_.size();
  if (n == 0) throw ValidationError("QuantumSimulation: no branches");
  if (conditionals_.size() != n || pre_.size() != n || post_.size() != n) {
    throw DimensionError("QuantumSimulation: per-branch lists differ in length");
  }
  if (pre_dims_.size() != 2 || post_dims_.size() != 2) {
    throw DimensionError("QuantumSimulation: channel dims must be {in, out}");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw ValidationError("QuantumSimulation: negative branch weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kStochasticTol) {
    throw ValidationError(fmt::format("QuantumSimulation: branch weights sum to {:.17g}", total));
  }
  for (std::size_t l = 0; l < n; ++l) {
    check_stochastic(conditionals_[l], fmt::format("QuantumSimulation: conditional {}", l));
    if (conditionals_[l].rows() != conditionals_.front().rows() ||
        conditionals_[l].cols() != conditionals_.front().cols()) {
      throw DimensionError("QuantumSimulation: conditionals differ in shape");
    }
    check_channel(pre_[l], pre_dims_[0], pre_dims_[1], fmt::format("QuantumSimulation: pre {}", l));
    check_channel(post_[l], post_dims_[0], post_dims_[1],
                  fmt::format("QuantumSimulation: post {}", l));
  }
}

QuantumSimulation QuantumSimulation::trivial(std::size_t dv, std::size_t db,
                                             std::size_t outcomes) {
  const auto id = [](const CMatrix& x) { return x; };
  return QuantumSimulation({1.0}, {RMatrix::Identity(outcomes, outcomes)},
                           {channels::choi_of(id, dv, dv)}, {channels::choi_of(id, db, db)},
                           Dims{dv, dv}, Dims{db, db});
}

TeleportationInstrument apply_classical_sim(const TeleportationInstrument& instr,
                                            const ClassicalSimulation& s) {
  if (s.inputs() != instr.outcomes()) {
    throw DimensionError(fmt::format("apply_classical_sim: recipe expects {} outcomes, got {}",
                                     s.inputs(), instr.outcomes()));
  }
  const auto n = static_cast<Eigen::Index>(instr.dv() * instr.db());
  std::vector<CMatrix> ops(s.outputs(), CMatrix::Zero(n, n));
  for (std::size_t b = 0; b < s.outputs(); ++b) {
    for (std::size_t a = 0; a < s.inputs(); ++a) {
      ops[b] += s.stochastic()(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) * instr[a];
    }
  }
  return TeleportationInstrument(std::move(ops), instr.dv(), instr.db());
}

TeleportationInstrument apply_quantum_sim(const TeleportationInstrument& instr,
                                          const QuantumSimulation& q) {
  if (q.inputs() != instr.outcomes()) {
    throw DimensionError(fmt::format("apply_quantum_sim: recipe expects {} outcomes, got {}",
                                     q.inputs(), instr.outcomes()));
  }
  if (q.pre_dims()[1] != instr.dv() || q.post_dims()[0] != instr.db()) {
    throw DimensionError("apply_quantum_sim: channel dimensions do not compose");
  }
  const std::size_t din = q.pre_dims()[0];
  const std::size_t dout = q.post_dims()[1];
  const auto n = static_cast<Eigen::Index>(din * dout);
  std::vector<CMatrix> ops(q.outputs(), CMatrix::Zero(n, n));
  for (std::size_t l = 0; l < q.branches(); ++l) {
    for (std::size_t a = 0; a < instr.outcomes(); ++a) {
      const CMatrix wrapped = channels::compose(
          channels::compose(q.pre()[l], din, instr.dv(), instr[a], instr.db()), din, instr.db(),
          q.post()[l], dout);
      for (std::size_t b = 0; b < q.outputs(); ++b) {
        const double w = q.weights()[l] * q.conditionals()[l](static_cast<Eigen::Index>(b),
                                                              static_cast<Eigen::Index>(a));
        if (w != 0.0) ops[b] += w * wrapped;
      }
    }
  }
  return TeleportationInstrument(std::move(ops), din, dout);
}

TeleportationInstrument mix(const TeleportationInstrument& first,
                            const TeleportationInstrument& second, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("mix: weight outside [0, 1]");
  if (first.outcomes() != second.outcomes() || first.dv() != second.dv() ||
      first.db() != second.db()) {
    throw DimensionError("mix: instruments differ in shape");
  }
  std::vector<CMatrix> ops;
  for (std::size_t a = 0; a < first.outcomes(); ++a) {
    ops.push_back(p * first[a] + (1.0 - p) * second[a]);
  }
  return TeleportationInstrument(std::move(ops), first.dv(), first.db());
}

ClassicalSimulation random_classical_sim(std::size_t inputs, std::size_t outputs,
                                         random::Rng& rng) {
  RMatrix p(outputs, inputs);
  for (std::size_t a = 0; a < inputs; ++a) {
    const std::vector<double> col = random::random_distribution(outputs, rng);
    for (std::size_t b = 0; b < outputs; ++b) {
      p(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = col[b];
    }
  }
  return ClassicalSimulation(std::move(p));
}

QuantumSimulation random_quantum_sim(std::size_t dv, std::size_t db, std::size_t inputs,
                                     std::size_t outputs, random::Rng& rng,
                                     std::size_t branches) {
  std::vector<double> weights = random::random_distribution(branches, rng);
  std::vector<RMatrix> conditionals;
  std::vector<CMatrix> pre;
  std::vector<CMatrix> post;
  for (std::size_t l = 0; l < branches; ++l) {
    conditionals.push_back(random_classical_sim(inputs, outputs, rng).stochastic());
    pre.push_back(random::random_channel_choi(dv, dv, rng, 2));
    post.push_back(random::random_channel_choi(db, db, rng, 2));
  }
  return QuantumSimulation(std::move(weights), std::move(conditionals), std::move(pre),
                           std::move(post), Dims{dv, dv}, Dims{db, db});
}

namespace {

games::CorrelationGame random_game(std::size_t dv, std::size_t db, std::size_t outcomes,
                                   random::Rng& rng) {
  DensityMatrix sigma = random::random_state(Dims{dv, dv}, 2, rng);
  std::vector<CMatrix> targets;
  std::vector<double> scores;
  for (std::size_t b = 0; b < outcomes; ++b) {
    targets.push_back(random::random_pure_state(Dims{dv, db}, rng).matrix());
    scores.push_back(0.5 + rng.uniform());
  }
  return games::CorrelationGame(std::move(sigma), std::move(targets), std::move(scores), db);
}

}  // namespace

MonotoneReport check_monotones(const TeleportationInstrument& instr, const MonotoneOptions& opts,
                               std::uint64_t seed) {
  random::Rng rng(seed);
  MonotoneReport report;
  const std::size_t dv = instr.dv();
  const std::size_t db = instr.db();
  const std::size_t o = instr.outcomes();
  const games::UnitaryFamily family = games::UnitaryFamily::identity_only();

  std::vector<games::CorrelationGame> sampled_games;
  for (std::size_t k = 0; k < opts.games; ++k) {
    sampled_games.push_back(random_game(dv, db, 1 + rng.index(o + 1), rng));
  }
  std::vector<discrim::DiscriminationInstrument> sampled_e;
  if (dv == db) {
    for (std::size_t k = 0; k < opts.discriminations; ++k) {
      sampled_e.push_back(discrim::random_instrument(dv, 2 + rng.index(3), rng));
    }
  }

  const double t0 = rot::rot(instr);
  std::vector<double> game0;
  for (const auto& g : sampled_games) game0.push_back(games::game_score(g, instr, family, true).value);
  std::vector<double> disc0;
  for (const auto& e : sampled_e) disc0.push_back(discrim::p_succ(e, instr));

  const auto record = [&](const std::string& quantity, double before, double after,
                          const Recipe& recipe) {
    ++report.checks;
    if (after > before + opts.tol) report.violations.push_back({quantity, before, after, recipe});
  };

  for (std::size_t s = 0; s < opts.classical_samples; ++s) {
    const ClassicalSimulation sim = random_classical_sim(o, 1 + rng.index(o + 1), rng);
    const TeleportationInstrument out = apply_classical_sim(instr, sim);
    record("T", t0, rot::rot(out), sim);
    for (std::size_t k = 0; k < sampled_games.size(); ++k) {
      record(fmt::format("game[{}]", k), game0[k],
             games::game_score(sampled_games[k], out, family, true).value, sim);
    }
    for (std::size_t k = 0; k < sampled_e.size(); ++k) {
      record(fmt::format("p_succ[{}]", k), disc0[k], discrim::p_succ(sampled_e[k], out), sim);
    }
  }
  for (std::size_t s = 0; s < opts.quantum_samples; ++s) {
    const QuantumSimulation sim = random_quantum_sim(dv, db, o, 1 + rng.index(o + 1), rng);
    record("T", t0, rot::rot(apply_quantum_sim(instr, sim)), sim);
  }
  return report;
}

}  // namespace telerob::simorder
