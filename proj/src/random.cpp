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

#include "telerob/random.hpp"

#include <cmath>

#include <Eigen/QR>

#include "telerob/channels.hpp"
#include "telerob/errors.hpp"

namespace telerob::random {

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ValidationError("Rng::index: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

CMatrix Rng::ginibre(std::size_t rows, std::size_t cols) {
  CMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal();
      const double im = normal();
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

DensityMatrix random_state(const Dims& dims, std::size_t rank, Rng& rng) {
  if (rank == 0) throw ValidationError("random_state: rank must be positive");
  const CMatrix g = rng.ginibre(dims.total(), rank);
  const CMatrix rho = g * g.adjoint();
  return DensityMatrix(rho / rho.trace().real(), dims);
}

DensityMatrix random_pure_state(const Dims& dims, Rng& rng) {
  return DensityMatrix::pure(rng.ginibre(dims.total(), 1).col(0), dims);
}

Povm random_povm(const Dims& dims, std::size_t outcomes, Rng& rng) {
  if (outcomes == 0) throw ValidationError("random_povm: need at least one outcome");
  const std::size_t n = dims.total();
  std::vector<CMatrix> raw;
  CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < outcomes; ++a) {
    const CMatrix g = rng.ginibre(n, n);
    raw.push_back(g * g.adjoint());
    sum += raw.back();
  }
  const CMatrix s = linalg::pinv_sqrt(0.5 * (sum + sum.adjoint()));
  std::vector<CMatrix> elements;
  for (const CMatrix& r : raw) elements.push_back(s * r * s);
  // Remove rounding drift so the elements sum to the identity.
  CMatrix drift = linalg::identity(n);
  for (const CMatrix& e : elements) drift -= e;
  elements.back() += 0.5 * (drift + drift.adjoint());
  return Povm(std::move(elements), dims);
}

CMatrix random_unitary(std::size_t d, Rng& rng) {
  const CMatrix g = rng.ginibre(d, d);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex diag = r(i, i);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(i) *= diag / mag;
  }
  return q;
}

CMatrix random_isometry(std::size_t in_dim, std::size_t out_dim, Rng& rng) {
  if (out_dim < in_dim) throw DimensionError("random_isometry: out_dim < in_dim");
  return random_unitary(out_dim, rng).leftCols(static_cast<Eigen::Index>(in_dim));
}

CMatrix random_channel_choi(std::size_t in_dim, std::size_t out_dim, Rng& rng,
                            std::size_t env_dim) {
  const CMatrix v = random_isometry(in_dim, out_dim * env_dim, rng);
  return channels::choi_of(
      [&](const CMatrix& x) {
        return linalg::partial_trace(v * x * v.adjoint(), Dims{out_dim, env_dim}, {0});
      },
      in_dim, out_dim);
}

std::vector<double> random_distribution(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.uniform());
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace telerob::random
