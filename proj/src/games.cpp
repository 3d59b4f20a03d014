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

#include "telerob/games.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "telerob/channels.hpp"
#include "telerob/conic.hpp"
#include "telerob/errors.hpp"

namespace telerob::games {

CorrelationGame::CorrelationGame(DensityMatrix sigma, std::vector<CMatrix> targets,
                                 std::vector<double> scores, std::size_t db)
    : sigma_(std::move(sigma)), targets_(std::move(targets)), scores_(std::move(scores)), db_(db) {
  if (sigma_.dims().size() != 2) throw DimensionError("CorrelationGame: sigma must be bipartite");
  if (targets_.empty()) throw ValidationError("CorrelationGame: no outcomes");
  if (scores_.size() != targets_.size()) {
    throw DimensionError("CorrelationGame: score count differs from target count");
  }
  const Dims target_dims{reference_dim(), db_};
  for (std::size_t b = 0; b < targets_.size(); ++b) {
    target_dims.check_side(targets_[b].rows());
    if (!is_psd(targets_[b], kStateTol)) {
      throw ValidationError(fmt::format("CorrelationGame: target {} is not Hermitian PSD", b));
    }
    targets_[b] = 0.5 * (targets_[b] + targets_[b].adjoint());
    if (!(scores_[b] >= 0.0) || !std::isfinite(scores_[b])) {
      throw ValidationError(fmt::format("CorrelationGame: score {} is negative", b));
    }
  }
}

std::vector<CMatrix> UnitaryFamily::members(std::size_t d) const {
  if (kind_ == Kind::kIdentityOnly) return {linalg::identity(d)};
  return linalg::weyl_operators(d);
}

double UnitaryObjective::operator()(const CMatrix& u) const {
  Complex v = 0.0;
  const CMatrix ud = u.adjoint();
  for (std::size_t k = 0; k < left.size(); ++k) v += (u * left[k] * ud * right[k]).trace();
  return v.real();
}

UnitaryChoice best_unitary(const UnitaryObjective& objective, const UnitaryFamily& family,
                           std::size_t d) {
  UnitaryChoice best{-std::numeric_limits<double>::infinity(), linalg::identity(d)};
  for (const CMatrix& u : family.members(d)) {
    const double v = objective(u);
    if (v > best.value) best = {v, u};
  }
  if (family.kind() != UnitaryFamily::Kind::kSeesawPolished) return best;
  for (int it = 0; it < family.iterations(); ++it) {
    CMatrix c = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const CMatrix ud = best.unitary.adjoint();
    for (std::size_t k = 0; k < objective.left.size(); ++k) {
      c += objective.left[k] * ud * objective.right[k];
    }
    Eigen::JacobiSVD<CMatrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix u = svd.matrixV() * svd.matrixU().adjoint();
    const double v = objective(u);
    if (!(v > best.value + 1e-15)) break;
    best = {v, u};
  }
  return best;
}

CMatrix correlation_kernel(const DensityMatrix& sigma, const CMatrix& xi, std::size_t db) {
  const std::size_t dr = sigma.dims()[0];
  const std::size_t dv = sigma.dims()[1];
  Dims{dr, db}.check_side(xi.rows());
  const CMatrix& s = sigma.matrix();
  const auto idx = [](std::size_t hi, std::size_t lo, std::size_t dlo) {
    return static_cast<Eigen::Index>(hi * dlo + lo);
  };
  CMatrix k = CMatrix::Zero(static_cast<Eigen::Index>(dv * db), static_cast<Eigen::Index>(dv * db));
  // K_{(l n),(k m)} = d_V sum_ij sigma_{(i k),(j l)} xi_{(j n),(i m)}
  for (std::size_t l = 0; l < dv; ++l) {
    for (std::size_t n = 0; n < db; ++n) {
      for (std::size_t kk = 0; kk < dv; ++kk) {
        for (std::size_t m = 0; m < db; ++m) {
          Complex acc = 0.0;
          for (std::size_t i = 0; i < dr; ++i) {
            for (std::size_t j = 0; j < dr; ++j) {
              acc += s(idx(i, kk, dv), idx(j, l, dv)) * xi(idx(j, n, db), idx(i, m, db));
            }
          }
          k(idx(l, n, db), idx(kk, m, db)) = static_cast<double>(dv) * acc;
        }
      }
    }
  }
  return k;
}

namespace {

CMatrix output_of(const CorrelationGame& g, const CMatrix& choi) {
  return channels::apply_to_second(choi, g.dv(), g.db(), g.sigma().matrix(), g.reference_dim());
}

// Objective for one outcome: tr[(1 (x) U) out (1 (x) U^dagger) xi].
UnitaryObjective objective_of(const CMatrix& out, const CMatrix& xi, std::size_t dr,
                              std::size_t db) {
  UnitaryObjective obj;
  const auto n = static_cast<Eigen::Index>(db);
  for (std::size_t i = 0; i < dr; ++i) {
    for (std::size_t j = 0; j < dr; ++j) {
      const auto ii = static_cast<Eigen::Index>(i) * n;
      const auto jj = static_cast<Eigen::Index>(j) * n;
      const CMatrix left = out.block(ii, jj, n, n);
      const CMatrix right = xi.block(jj, ii, n, n);
      if (left.cwiseAbs().maxCoeff() == 0.0 || right.cwiseAbs().maxCoeff() == 0.0) continue;
      obj.left.push_back(left);
      obj.right.push_back(right);
    }
  }
  return obj;
}

void check_compatible(const CorrelationGame& g, const TeleportationInstrument& instr) {
  if (g.dv() != instr.dv() || g.db() != instr.db()) {
    throw DimensionError(fmt::format(
        "game acts on d_V={}, d_B={} but instrument has d_V={}, d_B={}", g.dv(), g.db(),
        instr.dv(), instr.db()));
  }
}

}  // namespace

double correlation(const CorrelationGame& g, const CMatrix& choi, std::size_t b,
                   const CMatrix& unitary) {
  const CMatrix out = output_of(g, choi);
  const CMatrix u = linalg::tensor(linalg::identity(g.reference_dim()), unitary);
  return linalg::inner(u * out * u.adjoint(), g.targets().at(b));
}

GameScore game_score(const CorrelationGame& g, const TeleportationInstrument& instr,
                     const UnitaryFamily& corrections, bool relabel) {
  check_compatible(g, instr);
  const std::size_t na = instr.outcomes();
  const std::size_t nb = g.outcomes();
  const std::size_t dr = g.reference_dim();
  const std::size_t db = g.db();
  std::vector<CMatrix> outputs;
  for (const CMatrix& j : instr.ops()) outputs.push_back(output_of(g, j));

  GameScore score;
  score.unitaries.assign(nb, linalg::identity(db));
  if (!relabel) {
    if (na != nb) {
      throw DimensionError(fmt::format(
          "game has {} outcomes but instrument has {}; enable relabeling", nb, na));
    }
    for (std::size_t b = 0; b < nb; ++b) {
      score.relabeling.push_back(b);
      const UnitaryChoice c =
          best_unitary(objective_of(outputs[b], g.targets()[b], dr, db), corrections, db);
      score.unitaries[b] = c.unitary;
      score.value += g.scores()[b] * c.value;
    }
    return score;
  }

  // Coordinate ascent over deterministic relabelings and unitaries.
  auto term = [&](std::size_t a, std::size_t b) {
    return g.scores()[b] *
           objective_of(outputs[a], g.targets()[b], dr, db)(score.unitaries[b]);
  };
  std::vector<std::size_t> map(na);
  for (std::size_t a = 0; a < na; ++a) {
    if (na == nb) {
      map[a] = a;
      continue;
    }
    std::size_t best = 0;
    for (std::size_t b = 1; b < nb; ++b) {
      if (term(a, b) > term(a, best)) best = b;
    }
    map[a] = best;
  }
  for (int round = 0; round < 100; ++round) {
    double value = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      CMatrix merged = CMatrix::Zero(outputs[0].rows(), outputs[0].cols());
      bool any = false;
      for (std::size_t a = 0; a < na; ++a) {
        if (map[a] == b) {
          merged += outputs[a];
          any = true;
        }
      }
      if (!any) continue;
      const UnitaryChoice c = best_unitary(objective_of(merged, g.targets()[b], dr, db), corrections, db);
      score.unitaries[b] = c.unitary;
      value += g.scores()[b] * c.value;
    }
    score.value = value;
    bool changed = false;
    for (std::size_t a = 0; a < na; ++a) {
      std::size_t best = map[a];
      double best_term = term(a, best);
      for (std::size_t b = 0; b < nb; ++b) {
        const double t = term(a, b);
        if (t > best_term + 1e-13) {
          best = b;
          best_term = t;
        }
      }
      if (best != map[a]) {
        map[a] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  score.relabeling = map;
  return score;
}

namespace {

struct ClassicalSolve {
  double value;
  std::vector<CMatrix> ops;
  CMatrix tau;
};

ClassicalSolve solve_classical(const CorrelationGame& g, const std::vector<CMatrix>& unitaries,
                               double tol) {
  const std::size_t dv = g.dv();
  const std::size_t db = g.db();
  const std::size_t dr = g.reference_dim();
  const std::size_t n = dv * db;
  conic::SdpProblem p;
  std::vector<std::size_t> blocks;
  std::vector<conic::Term> objective;
  std::vector<conic::MapTerm> sum;
  for (std::size_t b = 0; b < g.outcomes(); ++b) {
    const std::size_t f = p.add_ppt_block(Dims{dv, db});
    blocks.push_back(f);
    const CMatrix u = linalg::tensor(linalg::identity(dr), unitaries[b]);
    const CMatrix rotated = u.adjoint() * g.targets()[b] * u;
    CMatrix k = correlation_kernel(g.sigma(), rotated, db);
    k = 0.5 * (k + k.adjoint());
    objective.push_back({f, CMatrix(-g.scores()[b] * k)});
    sum.push_back({f, [](const CMatrix& x) { return x; }});
  }
  const std::size_t tau = p.add_block(db);
  sum.push_back({tau, [dv](const CMatrix& x) {
                   return CMatrix(-linalg::tensor(linalg::identity(dv), x) / static_cast<double>(dv));
                 }});
  p.add_hermitian_equality(sum, CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
  p.add_constraint({{{tau, linalg::identity(db)}}, conic::Sense::kEqual, 1.0});
  p.set_objective(std::move(objective));
  const conic::SdpSolution s = conic::solve(p, {tol, 200});
  if (s.status != conic::Status::kOptimal) {
    throw SolverError(fmt::format("classical_game_score: solver returned {} ({})",
                                  conic::to_string(s.status), s.detail));
  }
  ClassicalSolve out{-0.5 * (s.primal_value + s.dual_value), {}, s.primal_blocks[tau]};
  for (std::size_t f : blocks) out.ops.push_back(s.primal_blocks[f]);
  return out;
}

}  // namespace

ClassicalGameScore classical_game_score(const CorrelationGame& g, const UnitaryFamily& corrections,
                                        double tol) {
  if (!rot::ppt_is_exact(g.dv(), g.db())) spdlog::warn("{}", rot::kPptRelaxationWarning);
  std::vector<CMatrix> unitaries(g.outcomes(), linalg::identity(g.db()));
  ClassicalSolve best = solve_classical(g, unitaries, tol);
  ClassicalGameScore out{best.value, best.ops, best.tau, unitaries};
  if (corrections.kind() == UnitaryFamily::Kind::kIdentityOnly) return out;
  for (int round = 0; round < 10; ++round) {
    std::vector<CMatrix> next = out.unitaries;
    for (std::size_t b = 0; b < g.outcomes(); ++b) {
      const CMatrix output = output_of(g, out.classical_ops[b]);
      next[b] = best_unitary(objective_of(output, g.targets()[b], g.reference_dim(), g.db()),
                             corrections, g.db())
                    .unitary;
    }
    const ClassicalSolve trial = solve_classical(g, next, tol);
    if (!(trial.value > out.value + 10.0 * tol)) break;
    out = {trial.value, trial.ops, trial.tau, next};
  }
  return out;
}

CorrelationGame build_game_from_dual(const rot::RotDualSolution& dual, double tol) {
  const std::size_t dv = dual.dv;
  std::vector<CMatrix> targets;
  std::vector<double> scores;
  bool any = false;
  for (const CMatrix& a : dual.witnesses) {
    const double tr = a.trace().real();
    if (tr <= tol) {
      targets.push_back(CMatrix::Zero(a.rows(), a.cols()));
      scores.push_back(0.0);
      continue;
    }
    any = true;
    // Clip solver-level negative eigenvalues so the target is PSD.
    targets.push_back(linalg::project_psd(a) / tr);
    scores.push_back(tr);
  }
  if (!any) throw ValidationError("build_game_from_dual: every witness has zero trace");
  return CorrelationGame(DensityMatrix(linalg::phi_plus(dv), Dims{dv, dv}), std::move(targets),
                         std::move(scores), dual.db);
}

CorrelationGame fidelity_game_of(const InputEnsemble& inputs, std::size_t outcomes) {
  if (!inputs.all_pure()) throw ValidationError("fidelity_game_of: inputs must be pure");
  const std::size_t n = inputs.size();
  for (double w : inputs.weights()) {
    if (std::abs(w - 1.0 / static_cast<double>(n)) > 1e-12) {
      throw ValidationError("fidelity_game_of: inputs must be uniformly weighted");
    }
  }
  if (outcomes == 0) throw ValidationError("fidelity_game_of: need at least one outcome");
  const std::size_t d = inputs.dim();
  CMatrix sigma = CMatrix::Zero(static_cast<Eigen::Index>(n * d), static_cast<Eigen::Index>(n * d));
  for (std::size_t x = 0; x < n; ++x) {
    CMatrix proj = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    proj(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = 1.0;
    sigma += linalg::tensor(proj, inputs.states()[x].matrix()) / static_cast<double>(n);
  }
  std::vector<CMatrix> targets(outcomes, sigma);
  std::vector<double> scores(outcomes, static_cast<double>(n));
  return CorrelationGame(DensityMatrix(sigma, Dims{n, d}), std::move(targets), std::move(scores), d);
}

double average_fidelity(const TeleportationInstrument& instr, const InputEnsemble& inputs,
                        const UnitaryFamily& corrections) {
  if (!inputs.all_pure()) throw ValidationError("average_fidelity: inputs must be pure");
  if (inputs.dim() != instr.dv() || instr.dv() != instr.db()) {
    throw DimensionError("average_fidelity: inputs, V and B must share one dimension");
  }
  double total = 0.0;
  for (std::size_t a = 0; a < instr.outcomes(); ++a) {
    UnitaryObjective obj;
    for (std::size_t x = 0; x < inputs.size(); ++x) {
      const CMatrix& w = inputs.states()[x].matrix();
      obj.left.push_back(inputs.weights()[x] * channels::apply_choi(instr[a], instr.dv(), instr.db(), w));
      obj.right.push_back(w);
    }
    total += best_unitary(obj, corrections, instr.db()).value;
  }
  return total;
}

}  // namespace telerob::games
