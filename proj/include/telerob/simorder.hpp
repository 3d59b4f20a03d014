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

// Classical simulations relabel outcomes stochastically. Quantum simulations
// additionally wrap the instrument in local pre- and post-channels under
// shared randomness lambda.

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "telerob/qobjects.hpp"
#include "telerob/random.hpp"

namespace telerob::simorder {

/// Column-stochastic p(b|a): rows b, columns a.
class ClassicalSimulation {
 public:
  explicit ClassicalSimulation(RMatrix stochastic);

  const RMatrix& stochastic() const { return p_; }
  std::size_t inputs() const { return static_cast<std::size_t>(p_.cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(p_.rows()); }

 private:
  RMatrix p_;
};

class QuantumSimulation {
 public:
  /// pre[l]: V' -> V and post[l]: B -> B' as Choi operators;
  /// conditionals[l] is p(b|a, l).
  QuantumSimulation(std::vector<double> weights, std::vector<RMatrix> conditionals,
                    std::vector<CMatrix> pre, std::vector<CMatrix> post, Dims pre_dims,
                    Dims post_dims);

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<RMatrix>& conditionals() const { return conditionals_; }
  const std::vector<CMatrix>& pre() const { return pre_; }
  const std::vector<CMatrix>& post() const { return post_; }
  const Dims& pre_dims() const { return pre_dims_; }    ///< {d_V', d_V}
  const Dims& post_dims() const { return post_dims_; }  ///< {d_B, d_B'}
  std::size_t branches() const { return weights_.size(); }
  std::size_t inputs() const { return static_cast<std::size_t>(conditionals_.front().cols()); }
  std::size_t outputs() const { return static_cast<std::size_t>(conditionals_.front().rows()); }

  /// Single branch, identity channels, identity relabeling.
  static QuantumSimulation trivial(std::size_t dv, std::size_t db, std::size_t outcomes);

 private:
  std::vector<double> weights_;
  std::vector<RMatrix> conditionals_;
  std::vector<CMatrix> pre_;
  std::vector<CMatrix> post_;
  Dims pre_dims_;
  Dims post_dims_;
};

TeleportationInstrument apply_classical_sim(const TeleportationInstrument& instr,
                                            const ClassicalSimulation& s);

TeleportationInstrument apply_quantum_sim(const TeleportationInstrument& instr,
                                          const QuantumSimulation& q);

/// p * first + (1 - p) * second, outcome by outcome.
TeleportationInstrument mix(const TeleportationInstrument& first,
                            const TeleportationInstrument& second, double p);

ClassicalSimulation random_classical_sim(std::size_t inputs, std::size_t outputs,
                                         random::Rng& rng);

/// Two branches; channels are Haar isometries traced over a qubit
/// environment. Dimensions are preserved.
QuantumSimulation random_quantum_sim(std::size_t dv, std::size_t db, std::size_t inputs,
                                     std::size_t outputs, random::Rng& rng,
                                     std::size_t branches = 2);

using Recipe = std::variant<ClassicalSimulation, QuantumSimulation>;

struct Violation {
  std::string quantity;  ///< "T", "game[k]" or "p_succ[k]"
  double before = 0.0;
  double after = 0.0;
  Recipe recipe;
};

struct MonotoneOptions {
  std::size_t classical_samples = 50;
  std::size_t quantum_samples = 20;
  std::size_t games = 3;
  std::size_t discriminations = 3;
  double tol = 1e-6;
};

struct MonotoneReport {
  std::size_t checks = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Classical recipes are checked against T, sampled game scores (identity
/// corrections, free relabeling) and sampled discrimination p_succ. Quantum
/// recipes are checked against T.
MonotoneReport check_monotones(const TeleportationInstrument& instr, const MonotoneOptions& opts,
                               std::uint64_t seed);

}  // namespace telerob::simorder
