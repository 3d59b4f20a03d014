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

#include "telerob/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "telerob/errors.hpp"

namespace telerob {

Dims::Dims(std::initializer_list<std::size_t> factors)
    : Dims(std::vector<std::size_t>(factors)) {}

Dims::Dims(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
  for (std::size_t f : factors_) {
    if (f == 0) throw DimensionError("subsystem dimension must be positive");
  }
}

std::size_t Dims::total() const {
  return std::accumulate(factors_.begin(), factors_.end(), std::size_t{1},
                         std::multiplies<>());
}

void Dims::check_side(Eigen::Index side) const {
  if (static_cast<std::size_t>(side) != total()) {
    throw DimensionError("dims product " + std::to_string(total()) +
                         " does not match matrix side " +
                         std::to_string(side));
  }
}

namespace linalg {
namespace {

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

// Flat offsets of every multi-index over the listed subsystems, with the
// other subsystems' digits set to zero.
std::vector<std::size_t> offsets_over(const Dims& dims,
                                      const std::vector<std::size_t>& subs) {
  const auto strides = strides_of(dims);
  std::vector<std::size_t> out{0};
  for (std::size_t sub : subs) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[sub]);
    for (std::size_t base : out) {
      for (std::size_t i = 0; i < dims[sub]; ++i) {
        next.push_back(base + i * strides[sub]);
      }
    }
    out = std::move(next);
  }
  return out;
}

void require_square(const CMatrix& x, const char* what) {
  if (x.rows() != x.cols()) {
    throw DimensionError(std::string(what) + ": matrix must be square");
  }
}

}  // namespace

CMatrix identity(std::size_t d) {
  return CMatrix::Identity(static_cast<Eigen::Index>(d),
                           static_cast<Eigen::Index>(d));
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix tensor(std::initializer_list<CMatrix> factors) {
  if (factors.size() == 0) return CMatrix::Ones(1, 1);
  auto it = factors.begin();
  CMatrix out = *it;
  for (++it; it != factors.end(); ++it) out = tensor(out, *it);
  return out;
}

CMatrix partial_trace(const CMatrix& x, const Dims& dims,
                      std::span<const std::size_t> keep) {
  require_square(x, "partial_trace");
  dims.check_side(x.rows());
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end() ||
      (!kept.empty() && kept.back() >= dims.size())) {
    throw DimensionError("partial_trace: invalid subsystem index set");
  }
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (!std::binary_search(kept.begin(), kept.end(), k)) traced.push_back(k);
  }
  const auto keep_off = offsets_over(dims, kept);
  const auto trace_off = offsets_over(dims, traced);
  const auto n = static_cast<Eigen::Index>(keep_off.size());
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      Complex acc = 0.0;
      for (std::size_t t : trace_off) {
        acc += x(static_cast<Eigen::Index>(keep_off[r] + t),
                 static_cast<Eigen::Index>(keep_off[c] + t));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

CMatrix partial_trace(const CMatrix& x, const Dims& dims,
                      std::initializer_list<std::size_t> keep) {
  return partial_trace(x, dims,
                       std::span<const std::size_t>(keep.begin(), keep.size()));
}

CMatrix partial_transpose(const CMatrix& x, const Dims& dims,
                          std::size_t subsystem) {
  require_square(x, "partial_transpose");
  dims.check_side(x.rows());
  if (subsystem >= dims.size()) {
    throw DimensionError("partial_transpose: subsystem index out of range");
  }
  const auto strides = strides_of(dims);
  const std::size_t stride = strides[subsystem];
  const std::size_t d = dims[subsystem];
  const auto n = x.rows();
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t di = (static_cast<std::size_t>(i) / stride) % d;
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::size_t dj = (static_cast<std::size_t>(j) / stride) % d;
      const auto src_i = static_cast<Eigen::Index>(i + (dj - di) * stride);
      const auto src_j = static_cast<Eigen::Index>(j + (di - dj) * stride);
      out(i, j) = x(src_i, src_j);
    }
  }
  return out;
}

CMatrix permute_subsystems(const CMatrix& x, const Dims& dims,
                           std::span<const std::size_t> perm) {
  require_square(x, "permute_subsystems");
  dims.check_side(x.rows());
  if (perm.size() != dims.size()) {
    throw DimensionError("permute_subsystems: permutation length mismatch");
  }
  std::vector<std::size_t> sorted(perm.begin(), perm.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] != k) throw DimensionError("permute_subsystems: not a permutation");
  }
  const auto in_strides = strides_of(dims);
  std::vector<std::size_t> out_factors(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) out_factors[k] = dims[perm[k]];
  const Dims out_dims(out_factors);
  const auto out_strides = strides_of(out_dims);
  const auto n = x.rows();
  std::vector<Eigen::Index> source(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t src = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      const std::size_t digit =
          (static_cast<std::size_t>(i) / out_strides[k]) % out_factors[k];
      src += digit * in_strides[perm[k]];
    }
    source[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(src);
  }
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = x(source[static_cast<std::size_t>(i)],
                    source[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

CMatrix permute_subsystems(const CMatrix& x, const Dims& dims,
                           std::initializer_list<std::size_t> perm) {
  return permute_subsystems(
      x, dims, std::span<const std::size_t>(perm.begin(), perm.size()));
}

CMatrix swap_factors(const CMatrix& x, std::size_t d1, std::size_t d2) {
  return permute_subsystems(x, Dims{d1, d2}, {1, 0});
}

MaxEntangled max_entangled(std::size_t d) {
  if (d < 2) throw DimensionError("max_entangled: d must be at least 2");
  const auto n = static_cast<Eigen::Index>(d * d);
  CVector v = CVector::Zero(n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    v(static_cast<Eigen::Index>(i * d + i)) = amp;
  }
  return {v, v * v.adjoint()};
}

CMatrix phi_plus(std::size_t d) {
  if (d == 1) return CMatrix::Ones(1, 1);
  return max_entangled(d).projector;
}

double hermiticity_defect(const CMatrix& x) {
  if (x.rows() != x.cols()) return std::numeric_limits<double>::infinity();
  return (x - x.adjoint()).norm() / std::max(1.0, x.norm());
}

CMatrix hermitize(const CMatrix& x) {
  require_square(x, "hermitize");
  const double defect = hermiticity_defect(x);
  if (defect > kStructuralTol) {
    spdlog::warn("hermitize: input deviates from Hermitian by {:.3e}", defect);
  }
  return 0.5 * (x + x.adjoint());
}

HermEig herm_eig(const CMatrix& x) {
  require_square(x, "herm_eig");
  const double defect = hermiticity_defect(x);
  if (defect > kStructuralTol) {
    throw ValidationError("herm_eig: matrix is not Hermitian (defect " +
                          std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (x + x.adjoint()));
  if (es.info() != Eigen::Success) {
    throw Error("herm_eig: eigendecomposition did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (x + x.adjoint()),
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (x + x.adjoint()),
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

CMatrix pinv_sqrt(const CMatrix& x, double cutoff) {
  const HermEig eig = herm_eig(x);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values(0) < -kStructuralTol * scale) {
    throw ValidationError("pinv_sqrt: matrix has a negative eigenvalue " +
                          std::to_string(eig.values(0)));
  }
  RVector inv(eig.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv(i) = eig.values(i) < cutoff ? 0.0 : 1.0 / std::sqrt(eig.values(i));
  }
  return eig.vectors * inv.cast<Complex>().asDiagonal() *
         eig.vectors.adjoint();
}

CMatrix sqrt_psd(const CMatrix& x) {
  const HermEig eig = herm_eig(x);
  const RVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * root.cast<Complex>().asDiagonal() *
         eig.vectors.adjoint();
}

CMatrix project_psd(const CMatrix& x) {
  const HermEig eig = herm_eig(hermitize(x));
  const RVector clipped = eig.values.cwiseMax(0.0);
  return eig.vectors * clipped.cast<Complex>().asDiagonal() *
         eig.vectors.adjoint();
}

double inner(const CMatrix& a, const CMatrix& b) {
  return (a.conjugate().array() * b.array()).sum().real();
}

std::vector<CMatrix> weyl_operators(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix shift = CMatrix::Zero(n, n);
  CMatrix clock = CMatrix::Zero(n, n);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    shift((i + 1) % n, i) = 1.0;
    clock(i, i) = std::polar(1.0, two_pi * static_cast<double>(i) /
                                      static_cast<double>(d));
  }
  std::vector<CMatrix> ops;
  ops.reserve(d * d);
  CMatrix xpow = identity(d);
  for (std::size_t j = 0; j < d; ++j) {
    CMatrix zpow = identity(d);
    for (std::size_t k = 0; k < d; ++k) {
      ops.push_back(xpow * zpow);
      zpow = zpow * clock;
    }
    xpow = xpow * shift;
  }
  return ops;
}

}  // namespace linalg
}  // namespace telerob
