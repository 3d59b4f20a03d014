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
#include "telerob/errors.hpp"
#include "telerob/linalg.hpp"
#include "telerob/random.hpp"

namespace telerob {
namespace {

using testing::max_abs;

constexpr double kIdentityTol = 1e-11;

TEST(Linalg, TensorMatchesKroneckerEntries) {
  random::Rng rng(1);
  const CMatrix a = rng.ginibre(2, 3);
  const CMatrix b = rng.ginibre(3, 2);
  const CMatrix t = linalg::tensor(a, b);
  ASSERT_EQ(t.rows(), 6);
  ASSERT_EQ(t.cols(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 2; ++l) EXPECT_EQ(t(i * 3 + k, j * 2 + l), a(i, j) * b(k, l));
}

TEST(Linalg, PartialTraceMatchesLoops) {
  random::Rng rng(2);
  for (std::size_t d1 : {2u, 3u}) {
    for (std::size_t d2 : {2u, 4u}) {
      const CMatrix x = rng.ginibre(d1 * d2, d1 * d2);
      EXPECT_LT(max_abs(linalg::partial_trace(x, Dims{d1, d2}, {0}) - testing::trace_second(x, d1, d2)),
                kIdentityTol);
      EXPECT_LT(max_abs(linalg::partial_trace(x, Dims{d1, d2}, {1}) - testing::trace_first(x, d1, d2)),
                kIdentityTol);
    }
  }
}

TEST(Linalg, PartialTraceOfProductKeepsFactor) {
  random::Rng rng(3);
  const CMatrix a = rng.ginibre(2, 2);
  const CMatrix b = rng.ginibre(3, 3);
  const CMatrix c = rng.ginibre(2, 2);
  const CMatrix x = linalg::tensor({a, b, c});
  const CMatrix kept = linalg::partial_trace(x, Dims{2, 3, 2}, {0, 2});
  EXPECT_LT(max_abs(kept - b.trace() * linalg::tensor(a, c)), kIdentityTol);
}

TEST(Linalg, PartialTransposeMatchesLoops) {
  random::Rng rng(4);
  const CMatrix x = rng.ginibre(6, 6);
  EXPECT_LT(max_abs(linalg::partial_transpose(x, Dims{2, 3}, 1) - testing::transpose_second(x, 2, 3)),
            kIdentityTol);
  const CMatrix both = linalg::partial_transpose(linalg::partial_transpose(x, Dims{2, 3}, 0), Dims{2, 3}, 1);
  EXPECT_LT(max_abs(both - x.transpose()), kIdentityTol);
}

TEST(Linalg, PermuteAndSwap) {
  random::Rng rng(5);
  const CMatrix a = rng.ginibre(2, 2);
  const CMatrix b = rng.ginibre(3, 3);
  const CMatrix c = rng.ginibre(4, 4);
  const CMatrix x = linalg::tensor({a, b, c});
  const CMatrix y = linalg::permute_subsystems(x, Dims{2, 3, 4}, {2, 0, 1});
  EXPECT_LT(max_abs(y - linalg::tensor({c, a, b})), kIdentityTol);
  EXPECT_LT(max_abs(linalg::swap_factors(linalg::tensor(a, b), 2, 3) - linalg::tensor(b, a)), kIdentityTol);
}

TEST(Linalg, MaxEntangled) {
  const auto m = linalg::max_entangled(3);
  EXPECT_NEAR(m.vector.norm(), 1.0, kIdentityTol);
  EXPECT_NEAR(m.projector.trace().real(), 1.0, kIdentityTol);
  EXPECT_LT(max_abs(m.projector * m.projector - m.projector), kIdentityTol);
  EXPECT_LT(max_abs(linalg::partial_trace(m.projector, Dims{3, 3}, {0}) - linalg::identity(3) / 3.0),
            kIdentityTol);
  EXPECT_THROW(linalg::max_entangled(1), DimensionError);
  EXPECT_LT(max_abs(linalg::phi_plus(1) - CMatrix::Ones(1, 1)), kIdentityTol);
}

// (1 (x) E)|phi+> = (E^T (x) 1)|phi+> for arbitrary E.
TEST(EntangledIdentities, Ricochet) {
  random::Rng rng(6);
  for (std::size_t d : {2u, 3u, 4u}) {
    const CMatrix e = rng.ginibre(d, d);
    const CVector phi = linalg::max_entangled(d).vector;
    const CVector lhs = linalg::tensor(linalg::identity(d), e) * phi;
    const CVector rhs = linalg::tensor(CMatrix(e.transpose()), linalg::identity(d)) * phi;
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), kIdentityTol) << "d=" << d;
  }
}

// (I (x) E)[phi+] = (E^T (x) I)[phi+] for a map with Kraus operators K, where
// E^T has Kraus operators K^T.
TEST(EntangledIdentities, RicochetForMaps) {
  random::Rng rng(7);
  const std::size_t d = 3;
  std::vector<CMatrix> kraus;
  for (int k = 0; k < 3; ++k) kraus.push_back(rng.ginibre(d, d));
  const CMatrix phi = linalg::phi_plus(d);
  CMatrix lhs = CMatrix::Zero(9, 9);
  CMatrix rhs = CMatrix::Zero(9, 9);
  for (const CMatrix& k : kraus) {
    const CMatrix l = linalg::tensor(linalg::identity(d), k);
    const CMatrix r = linalg::tensor(CMatrix(k.transpose()), linalg::identity(d));
    lhs += l * phi * l.adjoint();
    rhs += r * phi * r.adjoint();
  }
  EXPECT_LT(max_abs(lhs - rhs), kIdentityTol);
}

// tr_B[(phi+_AB (x) 1_C)(1_A (x) X_BC)] = (1/d) X_AC^{T_A}.
TEST(EntangledIdentities, Transfer) {
  random::Rng rng(8);
  for (std::size_t d : {2u, 3u}) {
    const std::size_t dc = 2;
    const CMatrix x = rng.ginibre(d * dc, d * dc);
    const CMatrix lhs = linalg::partial_trace(
        linalg::tensor(linalg::phi_plus(d), linalg::identity(dc)) * linalg::tensor(linalg::identity(d), x),
        Dims{d, d, dc}, {0, 2});
    const CMatrix rhs = linalg::partial_transpose(x, Dims{d, dc}, 0) / static_cast<double>(d);
    EXPECT_LT(max_abs(lhs - rhs), kIdentityTol) << "d=" << d;
  }
}

// tr_CD[(1_A (x) phi+_CD (x) 1_B)(X_AC (x) phi+_DB)] = X_AB / d^2.
TEST(EntangledIdentities, Snake) {
  random::Rng rng(9);
  for (std::size_t d : {2u, 3u}) {
    const std::size_t da = 2;
    const CMatrix x = rng.ginibre(da * d, da * d);
    const CMatrix left = linalg::tensor({linalg::identity(da), linalg::phi_plus(d), linalg::identity(d)});
    const CMatrix right = linalg::tensor(x, linalg::phi_plus(d));
    const CMatrix lhs = linalg::partial_trace(left * right, Dims{da, d, d, d}, {0, 3});
    EXPECT_LT(max_abs(lhs - x / static_cast<double>(d * d)), kIdentityTol) << "d=" << d;
  }
}

TEST(Linalg, HermitianEigendecomposition) {
  random::Rng rng(10);
  const CMatrix h = testing::hermitian(5, rng);
  const linalg::HermEig e = linalg::herm_eig(h);
  const CMatrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  EXPECT_LT(max_abs(rebuilt - h), 1e-12);
  for (Eigen::Index i = 1; i < e.values.size(); ++i) EXPECT_LE(e.values(i - 1), e.values(i));
  EXPECT_NEAR(linalg::min_eigenvalue(h), e.values(0), 1e-12);
  EXPECT_NEAR(linalg::max_eigenvalue(h), e.values(4), 1e-12);
  EXPECT_THROW(linalg::herm_eig(rng.ginibre(3, 3)), ValidationError);
}

TEST(Linalg, SquareRootsAndProjection) {
  random::Rng rng(11);
  const CMatrix g = rng.ginibre(4, 4);
  const CMatrix p = g * g.adjoint();
  const CMatrix s = linalg::sqrt_psd(p);
  EXPECT_LT(max_abs(s * s - p), 1e-11);
  const CMatrix is = linalg::pinv_sqrt(p);
  EXPECT_LT(max_abs(is * p * is - linalg::identity(4)), 1e-9);
  const CMatrix h = testing::hermitian(4, rng);
  const CMatrix proj = linalg::project_psd(h);
  EXPECT_GE(linalg::min_eigenvalue(proj), -1e-12);
  EXPECT_LT(max_abs(linalg::project_psd(proj) - proj), 1e-12);
  EXPECT_THROW(linalg::pinv_sqrt(-linalg::identity(2)), ValidationError);
}

TEST(Linalg, PinvSqrtOnRankDeficient) {
  CMatrix p = CMatrix::Zero(3, 3);
  p(0, 0) = 4.0;
  p(1, 1) = 1.0;
  const CMatrix is = linalg::pinv_sqrt(p);
  EXPECT_NEAR(is(0, 0).real(), 0.5, 1e-14);
  EXPECT_NEAR(is(1, 1).real(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(is(2, 2)), 0.0, 1e-14);
}

TEST(Linalg, InnerProductAndFunctional) {
  random::Rng rng(12);
  const CMatrix a = testing::hermitian(3, rng);
  const CMatrix b = testing::hermitian(3, rng);
  EXPECT_NEAR(linalg::inner(a, b), (a * b).trace().real(), 1e-12);
  const CMatrix m = rng.ginibre(3, 3);
  const CMatrix k = linalg::functional_matrix(3, [&](const CMatrix& x) { return (m * x).trace(); });
  EXPECT_LT(max_abs(k - m), 1e-14);
}

TEST(Linalg, WeylOperatorsAreUnitaryAndOrthogonal) {
  for (std::size_t d : {2u, 3u}) {
    const std::vector<CMatrix> w = linalg::weyl_operators(d);
    ASSERT_EQ(w.size(), d * d);
    EXPECT_LT(max_abs(w[0] - linalg::identity(d)), 1e-14);
    for (std::size_t i = 0; i < w.size(); ++i) {
      EXPECT_LT(max_abs(w[i] * w[i].adjoint() - linalg::identity(d)), 1e-12);
      for (std::size_t j = 0; j < w.size(); ++j) {
        const Complex ip = (w[i].adjoint() * w[j]).trace();
        EXPECT_NEAR(std::abs(ip), i == j ? static_cast<double>(d) : 0.0, 1e-12);
      }
    }
  }
}

TEST(Linalg, HermiticityDefect) {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  EXPECT_GT(linalg::hermiticity_defect(x), 0.5);
  EXPECT_EQ(linalg::hermiticity_defect(linalg::identity(2)), 0.0);
  EXPECT_LT(linalg::hermiticity_defect(linalg::hermitize(x)), 1e-15);
}

TEST(Linalg, DimsValidation) {
  EXPECT_THROW(Dims({2, 0}), DimensionError);
  EXPECT_THROW(Dims({2, 3}).check_side(5), DimensionError);
  EXPECT_EQ(Dims({2, 3}).total(), 6u);
}

TEST(Linalg, SmallWorkedCases) {
  EXPECT_EQ(linalg::tensor(linalg::identity(2), linalg::identity(2)), linalg::identity(4));
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k1(1, 1) = 1.0;
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  EXPECT_EQ(linalg::tensor(k0, k1), expected);

  const CMatrix phi = linalg::phi_plus(2);
  EXPECT_LT(max_abs(linalg::partial_trace(phi, Dims{2, 2}, {0}) - linalg::identity(2) / 2.0), 1e-15);
  EXPECT_LT(max_abs(linalg::partial_trace(phi, Dims{2, 2}, {1}) - linalg::identity(2) / 2.0), 1e-15);

  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  const CMatrix pt = linalg::partial_transpose(phi, Dims{2, 2}, 1);
  EXPECT_LT(max_abs(pt - swap / 2.0), 1e-15);
  const linalg::HermEig e = linalg::herm_eig(pt);
  EXPECT_NEAR(e.values(0), -0.5, 1e-14);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(e.values(i), 0.5, 1e-14);

  random::Rng rng(13);
  const CMatrix a = rng.ginibre(2, 2);
  const CMatrix b = rng.ginibre(3, 3);
  EXPECT_LT(max_abs(linalg::partial_transpose(linalg::tensor(a, b), Dims{2, 3}, 1) -
                    linalg::tensor(a, CMatrix(b.transpose()))),
            1e-15);

  const CVector v = linalg::max_entangled(2).vector;
  EXPECT_NEAR(v(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(v(3).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(v(1), Complex(0.0));

  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const linalg::HermEig de = linalg::herm_eig(d);
  EXPECT_NEAR(de.values(0), 1.0, 1e-15);
  EXPECT_NEAR(de.values(1), 2.0, 1e-15);
  EXPECT_NEAR(de.values(2), 3.0, 1e-15);
  CMatrix sx = CMatrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  EXPECT_NEAR(linalg::min_eigenvalue(sx), -1.0, 1e-15);
  EXPECT_NEAR(linalg::max_eigenvalue(sx), 1.0, 1e-15);

  EXPECT_LT(max_abs(linalg::pinv_sqrt(linalg::identity(2) / 2.0) - std::sqrt(2.0) * linalg::identity(2)),
            1e-14);
  CMatrix four = CMatrix::Zero(2, 2);
  four(0, 0) = 4.0;
  const CMatrix half = linalg::pinv_sqrt(four, 1e-12);
  EXPECT_NEAR(half(0, 0).real(), 0.5, 1e-15);
  EXPECT_EQ(half(1, 1), Complex(0.0));
}

}  // namespace
}  // namespace telerob
