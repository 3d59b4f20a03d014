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

// Dense complex tensor algebra on small multipartite operators.
//
// Every operator in the library is a dense Eigen::MatrixXcd. Subsystem
// structure is carried separately by a Dims value listing the local
// dimensions in tensor order, so that |i_0 i_1 ... i_{n-1}> has the flat
// index sum_k i_k * stride_k with the last factor varying fastest.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace telerob {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Tolerance for structural checks (Hermiticity, identities); distinct from
/// the SDP solve tolerance.
inline constexpr double kStructuralTol = 1e-10;

/// Ordered list of positive subsystem dimensions.
class Dims {
 public:
  Dims() = default;
  Dims(std::initializer_list<std::size_t> factors);
  explicit Dims(std::vector<std::size_t> factors);

  std::size_t size() const { return factors_.size(); }
  std::size_t operator[](std::size_t k) const { return factors_[k]; }
  std::size_t total() const;
  const std::vector<std::size_t>& factors() const { return factors_; }

  /// Throws DimensionError unless total() == side.
  void check_side(Eigen::Index side) const;

  bool operator==(const Dims& other) const = default;

 private:
  std::vector<std::size_t> factors_;
};

namespace linalg {

CMatrix identity(std::size_t d);

/// Kronecker product a (x) b; works for rectangular operands and vectors.
CMatrix tensor(const CMatrix& a, const CMatrix& b);
CMatrix tensor(std::initializer_list<CMatrix> factors);

/// Traces out every subsystem not listed in `keep`. The kept subsystems stay
/// in their original relative order.
CMatrix partial_trace(const CMatrix& x, const Dims& dims,
                      std::span<const std::size_t> keep);
CMatrix partial_trace(const CMatrix& x, const Dims& dims,
                      std::initializer_list<std::size_t> keep);

/// Transposes subsystem `subsystem` only.
CMatrix partial_transpose(const CMatrix& x, const Dims& dims,
                          std::size_t subsystem);

/// Reorders tensor factors: output factor k is input factor perm[k].
CMatrix permute_subsystems(const CMatrix& x, const Dims& dims,
                           std::span<const std::size_t> perm);
CMatrix permute_subsystems(const CMatrix& x, const Dims& dims,
                           std::initializer_list<std::size_t> perm);

/// Exchanges the two factors of a bipartite operator on d1 (x) d2.
CMatrix swap_factors(const CMatrix& x, std::size_t d1, std::size_t d2);

struct MaxEntangled {
  CVector vector;     ///< (1/sqrt d) sum_i |ii>
  CMatrix projector;  ///< |phi+><phi+|
};

/// The maximally entangled state on d (x) d. Requires d >= 2.
MaxEntangled max_entangled(std::size_t d);

/// Projector only; d == 1 is allowed here and yields [[1]].
CMatrix phi_plus(std::size_t d);

/// Relative deviation ||x - x^dagger||_F / max(1, ||x||_F).
double hermiticity_defect(const CMatrix& x);

/// Returns (x + x^dagger)/2 and logs a warning if the input deviated by more
/// than kStructuralTol.
CMatrix hermitize(const CMatrix& x);

struct HermEig {
  RVector values;   ///< ascending
  CMatrix vectors;  ///< columns are orthonormal eigenvectors
};

/// Eigendecomposition of a Hermitian matrix (Householder tridiagonalization
/// followed by implicit QL; deterministic). Throws ValidationError if x is
/// non-Hermitian beyond kStructuralTol.
HermEig herm_eig(const CMatrix& x);

double min_eigenvalue(const CMatrix& x);
double max_eigenvalue(const CMatrix& x);

/// Moore-Penrose inverse square root. Eigenvalues below `cutoff` map to 0.
/// Throws ValidationError on eigenvalues below -kStructuralTol * scale.
CMatrix pinv_sqrt(const CMatrix& x, double cutoff = 1e-12);

/// Principal square root of a PSD matrix; tiny negative eigenvalues are
/// clipped to zero.
CMatrix sqrt_psd(const CMatrix& x);

/// Projection onto the PSD cone in Frobenius norm.
CMatrix project_psd(const CMatrix& x);

/// Re tr(a^dagger b): the real inner product used for Hermitian matrices.
double inner(const CMatrix& a, const CMatrix& b);

/// Matrix K such that f(X) = tr(K X) for every n x n X, built by evaluating
/// the complex-linear functional f on the matrix units.
template <typename F>
CMatrix functional_matrix(std::size_t n, F&& f) {
  CMatrix k(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      CMatrix unit = CMatrix::Zero(n, n);
      unit(p, q) = 1.0;
      k(q, p) = f(unit);
    }
  }
  return k;
}

/// Generalized Pauli (Weyl-Heisenberg) operators X^j Z^k, index j*d + k.
/// For d = 2 the order is I, Z, X, XZ.
std::vector<CMatrix> weyl_operators(std::size_t d);

}  // namespace linalg
}  // namespace telerob
