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

// Linear maps between matrix spaces in Choi form.
//
// The Choi operator of a map L from d_in x d_in to d_out x d_out matrices is
// J = (I (x) L)[phi+] with the normalized maximally entangled projector, so
// J = (1/d_in) sum_ij |i><j| (x) L(|i><j|) and L(X) = d_in tr_in[(X^T (x) 1) J].

#include <cstddef>
#include <functional>

#include "telerob/linalg.hpp"

namespace telerob::channels {

using LinearMap = std::function<CMatrix(const CMatrix&)>;

CMatrix choi_of(const LinearMap& map, std::size_t in_dim, std::size_t out_dim);

/// L(x) for the map with Choi operator `choi`.
CMatrix apply_choi(const CMatrix& choi, std::size_t in_dim,
                   std::size_t out_dim, const CMatrix& x);

/// (I (x) L)(x) for x on first_dim (x) in_dim.
CMatrix apply_to_second(const CMatrix& choi, std::size_t in_dim,
                        std::size_t out_dim, const CMatrix& x,
                        std::size_t first_dim);

/// (L (x) I)(x) for x on in_dim (x) second_dim.
CMatrix apply_to_first(const CMatrix& choi, std::size_t in_dim,
                       std::size_t out_dim, const CMatrix& x,
                       std::size_t second_dim);

/// Choi operator of the Hilbert-Schmidt adjoint map (out_dim -> in_dim),
/// assuming the map is Hermitian-preserving.
CMatrix adjoint_choi(const CMatrix& choi, std::size_t in_dim,
                     std::size_t out_dim);

/// Choi operator of second o first, where first: d0 -> d1, second: d1 -> d2.
CMatrix compose(const CMatrix& first, std::size_t d0, std::size_t d1,
                const CMatrix& second, std::size_t d2);

/// Largest deviation of d_in tr_out(J) from the identity (0 for channels).
double trace_preservation_defect(const CMatrix& choi, std::size_t in_dim,
                                 std::size_t out_dim);

}  // namespace telerob::channels
