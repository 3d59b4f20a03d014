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

// Subchannel discrimination with a fixed joint measurement and a quantum
// memory. Subchannels act on d_V; an instrument is probed through the
// adjoint Choi operators G_x = (I (x) E_x^dagger)[phi+].

#include <cstddef>
#include <vector>

#include "telerob/qobjects.hpp"
#include "telerob/random.hpp"
#include "telerob/rot.hpp"

namespace telerob::discrim {

/// Subchannels with multiplicities: branch x stands for `multiplicity(x)`
/// identical subchannels, each with Choi operator `branches()[x]`.
class DiscriminationInstrument {
 public:
  DiscriminationInstrument(std::vector<ChoiOperator> branches,
                           std::vector<std::size_t> multiplicities);
  /// Every multiplicity 1.
  explicit DiscriminationInstrument(std::vector<ChoiOperator> branches);

  const std::vector<ChoiOperator>& branches() const { return branches_; }
  const std::vector<std::size_t>& multiplicities() const { return multiplicities_; }
  std::size_t dim() const { return branches_.front().in_dim(); }
  /// Total number of labels o, counting multiplicities.
  std::size_t label_count() const;
  /// (I (x) E_x^dagger)[phi+] for each distinct branch.
  const std::vector<CMatrix>& adjoint_chois() const { return adjoint_; }
  /// E_x^dagger[1] for each distinct branch.
  CMatrix adjoint_on_identity(std::size_t x) const;

 private:
  std::vector<ChoiOperator> branches_;
  std::vector<std::size_t> multiplicities_;
  std::vector<CMatrix> adjoint_;
};

struct Strategy {
  Povm measurement;     ///< on V (x) A
  DensityMatrix memory; ///< on V (x) A; V is handed to the verifier
};

struct DiscrimConstruction {
  double alpha = 0.0;
  std::size_t fictitious_count = 0;
  rot::RotDualSolution source_dual;
  /// 1 / (1 + 1/(alpha N)), the finite-N factor in the lower bound.
  double finite_n_factor() const;
};

/// E_x[rho] = W_x rho W_x^dagger / d^2 over the Weyl operators.
DiscriminationInstrument pauli_twirl(std::size_t d);

/// Teleportation instrument V -> V induced by a strategy: the measurement
/// acts on the returned system and A, Bob's system is the memory's V.
TeleportationInstrument strategy_instrument(const Strategy& s);

/// d_V^2 sum_a max_x tr[(I (x) E_x)[J_a] phi+]; ties go to the lowest x.
double p_succ(const DiscriminationInstrument& e, const TeleportationInstrument& instr);

/// sum_a max_x tr[(E_x (x) I)[rho] M_a] evaluated on the physical strategy.
double p_succ_physical(const DiscriminationInstrument& e, const Strategy& s);

/// Best success over PPT no-signalling Choi families F_x with
/// sum_x F_x = (1/d_V) 1 (x) tau.
double classical_p_succ_ensemble(const DiscriminationInstrument& e, double tol = 1e-8);

/// max_x lambda_max(E_x^dagger[1]): best guess with a product probe.
double classical_p_succ_product(const DiscriminationInstrument& e);

struct DiscrimBuild {
  DiscriminationInstrument instrument;
  DiscrimConstruction construction;
};

/// E*_x with adjoint Choi (alpha/d_V) A_x for each dual witness, plus N
/// fictitious branches with adjoint Choi (1/(N d_V^2)) 1 (x) (1 - alpha
/// sum_x tr_V A_x), stored as one branch of multiplicity N.
DiscrimBuild build_discrimination_from_dual(const rot::RotDualSolution& dual,
                                            std::size_t n = 10000);

struct AdvantageRatio {
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
};

AdvantageRatio advantage_ratio(const DiscriminationInstrument& e,
                               const TeleportationInstrument& instr, double tol = 1e-8);

/// Instrument whose branches are Kraus blocks of a Haar isometry
/// d -> outcomes * env * d, so that the branches sum to a channel.
DiscriminationInstrument random_instrument(std::size_t d, std::size_t outcomes,
                                           random::Rng& rng, std::size_t env = 2);

}  // namespace telerob::discrim
