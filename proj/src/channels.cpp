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

#include "telerob/channels.hpp"

#include "telerob/errors.hpp"

namespace telerob::channels {
namespace {

void check_choi(const CMatrix& choi, std::size_t in_dim, std::size_t out_dim) {
  if (choi.rows() != choi.cols() ||
      static_cast<std::size_t>(choi.rows()) != in_dim * out_dim) {
    throw DimensionError("Choi operator side does not equal in_dim * out_dim");
  }
}

// J_[k,l] = <k|_in J |l>_in, an out_dim x out_dim block.
CMatrix choi_block(const CMatrix& choi, std::size_t k, std::size_t l,
                   std::size_t out_dim) {
  const auto n = static_cast<Eigen::Index>(out_dim);
  return choi.block(static_cast<Eigen::Index>(k) * n,
                    static_cast<Eigen::Index>(l) * n, n, n);
}

}  // namespace

CMatrix choi_of(const LinearMap& map, std::size_t in_dim,
                std::size_t out_dim) {
  const auto din = static_cast<Eigen::Index>(in_dim);
  const auto dout = static_cast<Eigen::Index>(out_dim);
  CMatrix choi = CMatrix::Zero(din * dout, din * dout);
  for (Eigen::Index i = 0; i < din; ++i) {
    for (Eigen::Index j = 0; j < din; ++j) {
      CMatrix unit = CMatrix::Zero(din, din);
      unit(i, j) = 1.0;
      const CMatrix image = map(unit);
      if (image.rows() != dout || image.cols() != dout) {
        throw DimensionError("choi_of: map output has the wrong shape");
      }
      choi.block(i * dout, j * dout, dout, dout) =
          image / static_cast<double>(in_dim);
    }
  }
  return choi;
}

CMatrix apply_choi(const CMatrix& choi, std::size_t in_dim,
                   std::size_t out_dim, const CMatrix& x) {
  check_choi(choi, in_dim, out_dim);
  if (static_cast<std::size_t>(x.rows()) != in_dim ||
      static_cast<std::size_t>(x.cols()) != in_dim) {
    throw DimensionError("apply_choi: input does not match in_dim");
  }
  const auto dout = static_cast<Eigen::Index>(out_dim);
  CMatrix out = CMatrix::Zero(dout, dout);
  for (std::size_t k = 0; k < in_dim; ++k) {
    for (std::size_t l = 0; l < in_dim; ++l) {
      const Complex w = x(static_cast<Eigen::Index>(k),
                          static_cast<Eigen::Index>(l));
      if (w != Complex(0.0)) out += w * choi_block(choi, k, l, out_dim);
    }
  }
  return static_cast<double>(in_dim) * out;
}

CMatrix apply_to_second(const CMatrix& choi, std::size_t in_dim,
                        std::size_t out_dim, const CMatrix& x,
                        std::size_t first_dim) {
  check_choi(choi, in_dim, out_dim);
  if (x.rows() != x.cols() ||
      static_cast<std::size_t>(x.rows()) != first_dim * in_dim) {
    throw DimensionError("apply_to_second: input does not match dims");
  }
  const auto dout = static_cast<Eigen::Index>(out_dim);
  const auto dfirst = static_cast<Eigen::Index>(first_dim);
  const auto din = static_cast<Eigen::Index>(in_dim);
  CMatrix out = CMatrix::Zero(dfirst * dout, dfirst * dout);
  for (Eigen::Index i = 0; i < dfirst; ++i) {
    for (Eigen::Index j = 0; j < dfirst; ++j) {
      CMatrix block = CMatrix::Zero(dout, dout);
      for (Eigen::Index k = 0; k < din; ++k) {
        for (Eigen::Index l = 0; l < din; ++l) {
          const Complex w = x(i * din + k, j * din + l);
          if (w != Complex(0.0)) {
            block += w * choi_block(choi, static_cast<std::size_t>(k),
                                    static_cast<std::size_t>(l), out_dim);
          }
        }
      }
      out.block(i * dout, j * dout, dout, dout) =
          static_cast<double>(in_dim) * block;
    }
  }
  return out;
}

CMatrix apply_to_first(const CMatrix& choi, std::size_t in_dim,
                       std::size_t out_dim, const CMatrix& x,
                       std::size_t second_dim) {
  const CMatrix swapped = linalg::swap_factors(x, in_dim, second_dim);
  const CMatrix image =
      apply_to_second(choi, in_dim, out_dim, swapped, second_dim);
  return linalg::swap_factors(image, second_dim, out_dim);
}

CMatrix adjoint_choi(const CMatrix& choi, std::size_t in_dim,
                     std::size_t out_dim) {
  check_choi(choi, in_dim, out_dim);
  const CMatrix t = choi.transpose();
  return (static_cast<double>(in_dim) / static_cast<double>(out_dim)) *
         linalg::swap_factors(t, in_dim, out_dim);
}

CMatrix compose(const CMatrix& first, std::size_t d0, std::size_t d1,
                const CMatrix& second, std::size_t d2) {
  check_choi(first, d0, d1);
  check_choi(second, d1, d2);
  return choi_of(
      [&](const CMatrix& x) {
        return apply_choi(second, d1, d2, apply_choi(first, d0, d1, x));
      },
      d0, d2);
}

double trace_preservation_defect(const CMatrix& choi, std::size_t in_dim,
                                 std::size_t out_dim) {
  check_choi(choi, in_dim, out_dim);
  const CMatrix marginal =
      static_cast<double>(in_dim) *
      linalg::partial_trace(choi, Dims{in_dim, out_dim}, {0});
  return (marginal - linalg::identity(in_dim)).cwiseAbs().maxCoeff();
}

}  // namespace telerob::channels
