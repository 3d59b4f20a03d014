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
#include "telerob/conic.hpp"
#include "telerob/errors.hpp"
#include "telerob/linalg.hpp"

namespace telerob::conic {
namespace {

CMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
  CMatrix e = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

SdpProblem trace_with_pinned_entry() {
  SdpProblem p;
  const std::size_t x = p.add_block(3);
  p.set_objective({{x, linalg::identity(3)}});
  p.add_constraint({{{x, unit(3, 0, 0)}}, Sense::kEqual, 1.0});
  return p;
}

SdpProblem ppt_bell_overlap() {
  SdpProblem p;
  const std::size_t x = p.add_ppt_block(Dims{2, 2});
  p.set_objective({{x, -linalg::phi_plus(2)}});
  p.add_constraint({{{x, linalg::identity(4)}}, Sense::kEqual, 1.0});
  return p;
}

TEST(HermitianBasis, Orthonormal) {
  const auto basis = hermitian_basis(3);
  ASSERT_EQ(basis.size(), 9u);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    EXPECT_LT(linalg::hermiticity_defect(basis[i]), 1e-15);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      EXPECT_NEAR(linalg::inner(basis[i], basis[j]), i == j ? 1.0 : 0.0, 1e-14);
    }
  }
}

TEST(Solve, MinimalTrace) {
  const SdpSolution s = solve(trace_with_pinned_entry());
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal_value, 1.0, 1e-7);
  EXPECT_NEAR(s.dual_value, 1.0, 1e-7);
  EXPECT_TRUE(verify_certificate(trace_with_pinned_entry(), s, 1e-6).ok);
}

TEST(Solve, PptBellOverlapIsHalf) {
  const SdpProblem p = ppt_bell_overlap();
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal_value, -0.5, 1e-7);
  const CertificateReport r = verify_certificate(p, s, 1e-6);
  EXPECT_TRUE(r.ok) << (r.failures.empty() ? "" : r.failures.front());
}

TEST(Solve, InequalityRows) {
  SdpProblem p;
  const std::size_t x = p.add_block(1);
  p.set_objective({{x, -CMatrix::Ones(1, 1)}});
  p.add_constraint({{{x, CMatrix::Ones(1, 1)}}, Sense::kLessEqual, 3.0});
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal_value, -3.0, 1e-7);
  EXPECT_LE(s.dual_multipliers[0], 1e-8);
  EXPECT_TRUE(verify_certificate(p, s, 1e-6).ok);

  SdpProblem q;
  const std::size_t y = q.add_block(2);
  q.set_objective({{y, linalg::identity(2)}});
  q.add_constraint({{{y, unit(2, 1, 1)}}, Sense::kGreaterEqual, 2.0});
  const SdpSolution t = solve(q);
  ASSERT_EQ(t.status, Status::kOptimal);
  EXPECT_NEAR(t.primal_value, 2.0, 1e-7);
  EXPECT_GE(t.dual_multipliers[0], -1e-8);
}

TEST(Solve, DetectsInfeasibility) {
  SdpProblem p;
  const std::size_t x = p.add_block(2);
  p.set_objective({{x, linalg::identity(2)}});
  p.add_constraint({{{x, linalg::identity(2)}}, Sense::kEqual, -1.0});
  const SdpSolution s = solve(p);
  EXPECT_EQ(s.status, Status::kInfeasible);
  EXPECT_FALSE(verify_certificate(p, s, 1e-6).ok);
}

TEST(Solve, Deterministic) {
  const SdpProblem p = ppt_bell_overlap();
  const SdpSolution a = solve(p);
  const SdpSolution b = solve(p);
  EXPECT_EQ(a.primal_value, b.primal_value);
  EXPECT_EQ(a.dual_multipliers, b.dual_multipliers);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Solve, HermitianEqualityRows) {
  SdpProblem p;
  const std::size_t x = p.add_block(2);
  CMatrix rhs(2, 2);
  rhs << 2.0, std::complex<double>(0.0, 1.0), std::complex<double>(0.0, -1.0), 1.0;
  const HermitianRows rows = p.add_hermitian_equality({{x, [](const CMatrix& m) { return m; }}}, rhs);
  EXPECT_EQ(rows.dim, 4u);
  EXPECT_EQ(p.constraints().size(), 4u);
  p.set_objective({{x, linalg::identity(2)}});
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_LT(testing::max_abs(s.primal_blocks[x] - rhs), 1e-7);
  EXPECT_NEAR(s.primal_value, 3.0, 1e-7);
}

class Tampering : public ::testing::Test {
 protected:
  void SetUp() override {
    problem = ppt_bell_overlap();
    solution = solve(problem);
    ASSERT_TRUE(verify_certificate(problem, solution, tol).ok);
  }
  SdpProblem problem;
  SdpSolution solution;
  const double tol = 1e-6;
};

TEST_F(Tampering, ShiftedDualMultiplierIsCaught) {
  solution.dual_multipliers[0] += 10.0 * tol;
  const CertificateReport r = verify_certificate(problem, solution, tol);
  EXPECT_FALSE(r.ok);
}

TEST_F(Tampering, NegativeEigenvalueIsCaught) {
  const linalg::HermEig e = linalg::herm_eig(solution.primal_blocks[0]);
  CMatrix lowered = solution.primal_blocks[0];
  const CVector v = e.vectors.col(0);
  lowered -= (e.values(0) + 10.0 * tol) * v * v.adjoint();
  solution.primal_blocks[0] = lowered;
  const CertificateReport r = verify_certificate(problem, solution, tol);
  EXPECT_FALSE(r.ok);
  EXPECT_GT(r.primal_cone_violation, 5.0 * tol);
}

TEST_F(Tampering, MisreportedValueIsCaught) {
  solution.primal_value -= 1e-3;
  EXPECT_FALSE(verify_certificate(problem, solution, tol).ok);
}

TEST_F(Tampering, ShapeMismatchIsCaught) {
  solution.dual_multipliers.pop_back();
  const CertificateReport r = verify_certificate(problem, solution, tol);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.failures.front().find("shape"), std::string::npos);
}

TEST(DecomposableDefect, KnownCases) {
  const Dims dims{2, 2};
  EXPECT_LT(decomposable_defect(linalg::identity(4), dims), 1e-7);
  // SWAP has a negative eigenvalue but equals (2 phi+)^{T_B}.
  const CMatrix swap = linalg::partial_transpose(2.0 * linalg::phi_plus(2), dims, 1);
  EXPECT_NEAR(linalg::min_eigenvalue(swap), -1.0, 1e-14);
  EXPECT_LT(decomposable_defect(swap, dims), 1e-6);
  EXPECT_NEAR(decomposable_defect(-linalg::identity(4), dims), 1.0, 1e-6);
}

TEST(Status, RoundTrip) {
  for (Status s : {Status::kOptimal, Status::kInfeasible, Status::kUnbounded, Status::kMaxIter}) {
    EXPECT_EQ(status_from_string(to_string(s)), s);
  }
  EXPECT_THROW(status_from_string("nope"), ValidationError);
}

TEST(Problem, RejectsUnknownBlock) {
  SdpProblem p;
  p.add_block(2);
  EXPECT_THROW(p.add_constraint({{{3, linalg::identity(2)}}, Sense::kEqual, 0.0}), DimensionError);
}

}  // namespace
}  // namespace telerob::conic
