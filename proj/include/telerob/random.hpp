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

// Seeded generators for states, measurements, unitaries and channels.

#include <cstdint>
#include <random>

#include "telerob/linalg.hpp"
#include "telerob/qobjects.hpp"

namespace telerob::random {

/// All sampling goes through this engine; equal seeds give equal draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::size_t index(std::size_t n);
  /// Matrix of i.i.d. standard complex Gaussian entries.
  CMatrix ginibre(std::size_t rows, std::size_t cols);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Induced-measure density matrix of the given rank.
DensityMatrix random_state(const Dims& dims, std::size_t rank, Rng& rng);

/// Haar-random pure state.
DensityMatrix random_pure_state(const Dims& dims, Rng& rng);

/// POVM with elements S^{-1/2} G_a S^{-1/2} for random positive G_a.
Povm random_povm(const Dims& dims, std::size_t outcomes, Rng& rng);

/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
CMatrix random_unitary(std::size_t d, Rng& rng);

/// Haar-random isometry from in_dim into out_dim (out_dim >= in_dim).
CMatrix random_isometry(std::size_t in_dim, std::size_t out_dim, Rng& rng);

/// Choi operator of a random channel: trace over an environment of the given
/// dimension after a Haar isometry.
CMatrix random_channel_choi(std::size_t in_dim, std::size_t out_dim, Rng& rng,
                            std::size_t env_dim = 2);

/// Probability vector drawn uniformly from the simplex.
std::vector<double> random_distribution(std::size_t n, Rng& rng);

}  // namespace telerob::random
