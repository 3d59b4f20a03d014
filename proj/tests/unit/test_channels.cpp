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
#include "telerob/errors.hpp"
#include "telerob/random.hpp"

namespace telerob {
namespace {

using testing::max_abs;

TEST(Channels, ChoiOfIdentityIsPhiPlus) {
  const CMatrix j = channels::choi_of([](const CMatrix& x) { return x; }, 3, 3);
  EXPECT_LT(max_abs(j - linalg::phi_plus(3)), 1e-14);
}

TEST(Channels, ApplyChoiMatchesLoopOracleAndMap) {
  random::Rng rng(21);
  for (auto [din, dout] : {std::pair<std::size_t, std::size_t>{2, 3}, {3, 2}, {2, 2}}) {
    const CMatrix k = rng.ginibre(dout, din);
    const channels::LinearMap map = [&](const CMatrix& x) { return CMatrix(k * x * k.adjoint()); };
    const CMatrix j = channels::choi_of(map, din, dout);
    const CMatrix x = rng.ginibre(din, din);
    const CMatrix direct = map(x);
    EXPECT_LT(max_abs(channels::apply_choi(j, din, dout, x) - direct), 1e-12);
    EXPECT_LT(max_abs(testing::apply_choi(j, din, dout, x) - direct), 1e-12);
  }
}

TEST(Channels, ApplyToSecondAndFirst) {
  random::Rng rng(22);
  const std::size_t din = 2, dout = 3, dother = 2;
  const CMatrix j = random::random_channel_choi(din, dout, rng);
  const CMatrix sigma = rng.ginibre(dother * din, dother * din);
  const CMatrix second = channels::apply_to_second(j, din, dout, sigma, dother);
  EXPECT_LT(max_abs(second - testing::apply_second(j, din, dout, sigma, dother)), 1e-12);
  const CMatrix swapped = linalg::swap_factors(sigma, dother, din);
  const CMatrix first = channels::apply_to_first(j, din, dout, swapped, dother);
  EXPECT_LT(max_abs(first - linalg::swap_factors(second, dother, dout)), 1e-12);
}

TEST(Channels, AdjointSatisfiesTraceDuality) {
  random::Rng rng(23);
  const std::size_t din = 2, dout = 3;
  const CMatrix j = random::random_channel_choi(din, dout, rng);
  const CMatrix adj = channels::adjoint_choi(j, din, dout);
  for (int t = 0; t < 5; ++t) {
    const CMatrix x = rng.ginibre(din, din);
    const CMatrix y = rng.ginibre(dout, dout);
    const Complex lhs = (channels::apply_choi(j, din, dout, x) * y).trace();
    const Complex rhs = (x * channels::apply_choi(adj, dout, din, y)).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
  // Channels have unital adjoints.
  EXPECT_LT(max_abs(channels::apply_choi(adj, dout, din, linalg::identity(dout)) - linalg::identity(din)),
            1e-12);
  EXPECT_LT(max_abs(channels::adjoint_choi(adj, dout, din) - j), 1e-14);
}

TEST(Channels, ComposeMatchesSequentialApplication) {
  random::Rng rng(24);
  const CMatrix a = random::random_channel_choi(2, 3, rng);
  const CMatrix b = random::random_channel_choi(3, 2, rng);
  const CMatrix c = channels::compose(a, 2, 3, b, 2);
  const CMatrix x = rng.ginibre(2, 2);
  EXPECT_LT(max_abs(channels::apply_choi(c, 2, 2, x) -
                    channels::apply_choi(b, 3, 2, channels::apply_choi(a, 2, 3, x))),
            1e-12);
  EXPECT_LT(channels::trace_preservation_defect(c, 2, 2), 1e-12);
}

TEST(Channels, TracePreservationDefect) {
  random::Rng rng(25);
  const CMatrix j = random::random_channel_choi(3, 2, rng);
  EXPECT_LT(channels::trace_preservation_defect(j, 3, 2), 1e-12);
  EXPECT_NEAR(channels::trace_preservation_defect(0.5 * j, 3, 2), 0.5, 1e-12);
  EXPECT_THROW(channels::apply_choi(j, 2, 2, linalg::identity(2)), DimensionError);
}

}  // namespace
}  // namespace telerob
