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


#include <gtest/gtest.h>

#include "oracles.hpp"
#include "telerob/channels.hpp"
#include "telerob/discrim.hpp"
#include "telerob/errors.hpp"
#include "telerob/rot.hpp"
#include "telerob/simorder.hpp"

namespace telerob::simorder {
namespace {

using testing::max_abs;

constexpr double kTol = 1e-8;

CMatrix unitary_choi(const CMatrix& u) {
  const auto d = static_cast<std::size_t>(u.rows());
  return channels::choi_of([&](const CMatrix& x) { return CMatrix(u * x * u.adjoint()); }, d, d);
}

TEST(ClassicalSimulation, Validation) {
  RMatrix p(2, 2);
  p << 0.5, 1.0, 0.5, 0.0;
  EXPECT_NO_THROW(ClassicalSimulation{p});
  p(0, 0) = 0.7;
  EXPECT_THROW(ClassicalSimulation{p}, ValidationError);
  p << -0.5, 1.0, 1.5, 0.0;
  EXPECT_THROW(ClassicalSimulation{p}, ValidationError);
}

TEST(ClassicalSimulation, IdentityLeavesInstrumentUnchanged) {
  random::Rng rng(81);
  const TeleportationInstrument t = testing::random_instrument(2, 3, 2, rng);
  const TeleportationInstrument out = apply_classical_sim(t, ClassicalSimulation(RMatrix::Identity(3, 3)));
  for (std::size_t a = 0; a < 3; ++a) EXPECT_LT(max_abs(out[a] - t[a]), 1e-15);
}

TEST(ClassicalSimulation, FullCoarseGrainingKillsRot) {
  const TeleportationInstrument t = ideal_instrument(2);
  const TeleportationInstrument out = apply_classical_sim(t, ClassicalSimulation(RMatrix::Ones(1, 4)));
  ASSERT_EQ(out.outcomes(), 1u);
  EXPECT_LT(max_abs(out[0] - linalg::identity(4) / 4.0), 1e-15);
  EXPECT_LE(rot::rot(out, kTol), 1e-6);
}

TEST(ClassicalSimulation, PermutationPreservesRot) {
  random::Rng rng(82);
  const TeleportationInstrument t = testing::random_instrument(2, 3, 1, rng);
  RMatrix perm = RMatrix::Zero(3, 3);
  perm(1, 0) = perm(2, 1) = perm(0, 2) = 1.0;
  const TeleportationInstrument out = apply_classical_sim(t, ClassicalSimulation(perm));
  EXPECT_LT(max_abs(out[1] - t[0]), 1e-15);
  EXPECT_NEAR(rot::rot(out, kTol), rot::rot(t, kTol), 1e-6);
}

TEST(ClassicalSimulation, CoarseGrainingLowersSuccess) {
  random::Rng rng(83);
  const discrim::DiscriminationInstrument e = discrim::random_instrument(2, 3, rng);
  for (int trial = 0; trial < 5; ++trial) {
    const TeleportationInstrument t = testing::random_instrument(2, 4, 2, rng);
    const TeleportationInstrument out = apply_classical_sim(t, random_classical_sim(4, 2, rng));
    EXPECT_LE(discrim::p_succ(e, out), discrim::p_succ(e, t) + 1e-12);
  }
}

TEST(QuantumSimulation, TrivialIsIdentity) {
  random::Rng rng(84);
  const TeleportationInstrument t = testing::random_instrument(2, 3, 2, rng);
  const TeleportationInstrument out = apply_quantum_sim(t, QuantumSimulation::trivial(2, 2, 3));
  for (std::size_t a = 0; a < 3; ++a) EXPECT_LT(max_abs(out[a] - t[a]), 1e-14);
}

TEST(QuantumSimulation, ActsAsPrePostComposition) {
  random::Rng rng(85);
  const TeleportationInstrument t = testing::random_instrument(2, 2, 2, rng);
  const CMatrix u = random::random_unitary(2, rng);
  const CMatrix w = random::random_unitary(2, rng);
  RMatrix swap_labels(2, 2);
  swap_labels << 0.0, 1.0, 1.0, 0.0;
  const QuantumSimulation q({1.0}, {swap_labels}, {unitary_choi(u)}, {unitary_choi(w)}, Dims{2, 2},
                            Dims{2, 2});
  const TeleportationInstrument out = apply_quantum_sim(t, q);
  for (int trial = 0; trial < 3; ++trial) {
    const CMatrix omega = random::random_state(Dims{2}, 2, rng).matrix();
    for (std::size_t b = 0; b < 2; ++b) {
      const CMatrix inner = apply_subchannel(t.choi(1 - b), u * omega * u.adjoint());
      const CMatrix expected = w * inner * w.adjoint();
      EXPECT_LT(max_abs(apply_subchannel(out.choi(b), omega) - expected), 1e-12);
    }
  }
}

TEST(QuantumSimulation, LocalUnitariesPreserveRot) {
  random::Rng rng(86);
  const TeleportationInstrument t = testing::random_instrument(2, 3, 1, rng);
  const QuantumSimulation q({1.0}, {RMatrix::Identity(3, 3)},
                            {unitary_choi(random::random_unitary(2, rng))},
                            {unitary_choi(random::random_unitary(2, rng))}, Dims{2, 2}, Dims{2, 2});
  EXPECT_NEAR(rot::rot(apply_quantum_sim(t, q), kTol), rot::rot(t, kTol), 1e-6);
}

TEST(QuantumSimulation, DepolarizingPostChannelKillsRot) {
  const CMatrix depolarize = linalg::identity(4) / 4.0;
  const QuantumSimulation q({1.0}, {RMatrix::Identity(4, 4)}, {linalg::phi_plus(2)}, {depolarize},
                            Dims{2, 2}, Dims{2, 2});
  const TeleportationInstrument out = apply_quantum_sim(ideal_instrument(2), q);
  EXPECT_LE(rot::rot(out, kTol), 1e-6);
}

TEST(QuantumSimulation, Validation) {
  const CMatrix id = linalg::phi_plus(2);
  EXPECT_THROW(QuantumSimulation({0.5}, {RMatrix::Identity(2, 2)}, {id}, {id}, Dims{2, 2}, Dims{2, 2}),
               ValidationError);
  EXPECT_THROW(QuantumSimulation({1.0}, {RMatrix::Identity(2, 2)}, {2.0 * id}, {id}, Dims{2, 2}, Dims{2, 2}),
               ValidationError);
  EXPECT_THROW(QuantumSimulation({0.5, 0.5}, {RMatrix::Identity(2, 2)}, {id}, {id}, Dims{2, 2}, Dims{2, 2}),
               DimensionError);
  EXPECT_THROW(apply_quantum_sim(ideal_instrument(2), QuantumSimulation::trivial(2, 2, 3)), DimensionError);
}

TEST(Mix, Convexity) {
  random::Rng rng(87);
  const TeleportationInstrument j = testing::product_instrument(2, 4, rng);
  const TeleportationInstrument k = ideal_instrument(2);
  const TeleportationInstrument m = mix(j, k, 0.25);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_LT(max_abs(m[a] - (0.25 * j[a] + 0.75 * k[a])), 1e-15);
  EXPECT_THROW(mix(j, k, 1.5), ValidationError);
}

TEST(RandomRecipes, AreValid) {
  random::Rng rng(88);
  const ClassicalSimulation c = random_classical_sim(3, 2, rng);
  EXPECT_EQ(c.inputs(), 3u);
  EXPECT_EQ(c.outputs(), 2u);
  const QuantumSimulation q = random_quantum_sim(2, 2, 3, 2, rng);
  EXPECT_EQ(q.branches(), 2u);
  EXPECT_EQ(q.inputs(), 3u);
}

TEST(CheckMonotones, NoViolationsOnRandomInstruments) {
  random::Rng rng(89);
  MonotoneOptions opts;
  opts.classical_samples = 6;
  opts.quantum_samples = 3;
  opts.games = 1;
  opts.discriminations = 2;
  for (int trial = 0; trial < 2; ++trial) {
    const TeleportationInstrument t = testing::random_instrument(2, 3, 1, rng);
    const MonotoneReport r = check_monotones(t, opts, 1000 + trial);
    EXPECT_TRUE(r.ok()) << r.violations.size() << " violations, first on "
                        << (r.violations.empty() ? "" : r.violations.front().quantity);
    EXPECT_GE(r.checks, opts.classical_samples + opts.quantum_samples);
  }
}

TEST(CheckMonotones, IdealInstrumentFullSuite) {
  MonotoneOptions opts;
  opts.classical_samples = 50;
  opts.quantum_samples = 20;
  const MonotoneReport r = check_monotones(ideal_instrument(2), opts, 2024);
  EXPECT_TRUE(r.ok()) << r.violations.size() << " violations";
}

}  // namespace
}  // namespace telerob::simorder
