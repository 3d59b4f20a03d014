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

#pragma once

// Correlation-teleportation games.
//
// A game is an input state sigma on V' (x) V, targets xi_b on V' (x) B and
// scores f(b). Bob's outcome b, after a correcting unitary U_b, earns
// f(b) tr[(I (x) U_b Lambda_b U_b^dagger)[sigma] xi_b].

#include <cstddef>
#include <vector>

#include "telerob/qobjects.hpp"
#include "telerob/rot.hpp"

namespace telerob::games {

class CorrelationGame {
 public:
  CorrelationGame(DensityMatrix sigma, std::vector<CMatrix> targets,
                  std::vector<double> scores, std::size_t db);

  const DensityMatrix& sigma() const { return sigma_; }
  const std::vector<CMatrix>& targets() const { return targets_; }
  const std::vector<double>& scores() const { return scores_; }
  std::size_t outcomes() const { return targets_.size(); }
  std::size_t reference_dim() const { return sigma_.dims()[0]; }  ///< d_V'
  std::size_t dv() const { return sigma_.dims()[1]; }
  std::size_t db() const { return db_; }

 private:
  DensityMatrix sigma_;
  std::vector<CMatrix> targets_;
  std::vector<double> scores_;
  std::size_t db_;
};

class UnitaryFamily {
 public:
  enum class Kind { kIdentityOnly, kPauliGroup, kSeesawPolished };

  static UnitaryFamily identity_only() { return UnitaryFamily(Kind::kIdentityOnly, 0); }
  static UnitaryFamily pauli_group() { return UnitaryFamily(Kind::kPauliGroup, 0); }
  /// Pauli group followed by `iterations` polar-decomposition updates.
  static UnitaryFamily seesaw_polished(int iterations) {
    return UnitaryFamily(Kind::kSeesawPolished, iterations);
  }

  Kind kind() const { return kind_; }
  int iterations() const { return iterations_; }
  /// The finite candidate set on dimension d.
  std::vector<CMatrix> members(std::size_t d) const;

 private:
  UnitaryFamily(Kind kind, int iterations) : kind_(kind), iterations_(iterations) {}
  Kind kind_;
  int iterations_;
};

/// Objective Re sum_k tr[U X_k U^dagger Y_k] over a unitary U.
struct UnitaryObjective {
  std::vector<CMatrix> left;
  std::vector<CMatrix> right;
  double operator()(const CMatrix& u) const;
};

struct UnitaryChoice {
  double value;
  CMatrix unitary;
};

UnitaryChoice best_unitary(const UnitaryObjective& objective, const UnitaryFamily& family,
                           std::size_t d);

/// K with tr[(I (x) Lambda)[sigma] xi] = tr[K J] for every Choi operator J
/// on V (x) B.
CMatrix correlation_kernel(const DensityMatrix& sigma, const CMatrix& xi, std::size_t db);

/// tr[(I (x) U Lambda U^dagger)[sigma] xi] for a single Choi operator.
double correlation(const CorrelationGame& g, const CMatrix& choi, std::size_t b,
                   const CMatrix& unitary);

struct GameScore {
  double value = 0.0;
  std::vector<std::size_t> relabeling;  ///< outcome a -> game outcome b
  std::vector<CMatrix> unitaries;       ///< per game outcome b
};

/// Score under identity pre/post processing, the given unitary family and,
/// if `relabel`, deterministic outcome relabelings. A lower bound on the
/// optimal quantum score.
GameScore game_score(const CorrelationGame& g, const TeleportationInstrument& instr,
                     const UnitaryFamily& corrections, bool relabel = false);

struct ClassicalGameScore {
  double value = 0.0;
  std::vector<CMatrix> classical_ops;  ///< F_b, PPT, no-signalling
  CMatrix tau;
  std::vector<CMatrix> unitaries;
};

/// Best score over PPT no-signalling Choi families, alternated with unitary
/// updates from `corrections`.
ClassicalGameScore classical_game_score(const CorrelationGame& g,
                                        const UnitaryFamily& corrections, double tol = 1e-8);

/// sigma = phi+, xi_a = A_a / tr A_a, f(a) = tr A_a. Outcomes with
/// tr A_a <= tol get f = 0 and xi = 0.
CorrelationGame build_game_from_dual(const rot::RotDualSolution& dual, double tol = 1e-9);

/// sigma = (1/n) sum_x |x><x| (x) omega_x, xi_b = sigma, f(b) = n, for pure,
/// uniformly weighted inputs.
CorrelationGame fidelity_game_of(const InputEnsemble& inputs, std::size_t outcomes);

/// (1/n) sum_{a,x} <omega_x| U_a Lambda_a(omega_x) U_a^dagger |omega_x>, each U_a
/// chosen from the family.
double average_fidelity(const TeleportationInstrument& instr, const InputEnsemble& inputs,
                        const UnitaryFamily& corrections);

}  // namespace telerob::games
