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

// Dense semidefinite programs over complex Hermitian blocks.
//
// A problem is
//
//   minimize    sum_b <C_b, X_b> + c0
//   subject to  sum_b <A_kb, X_b>  (=, <=, >=)  r_k     for every row k
//               X_b PSD, and X_b^{T_last} PSD for PPT-tagged blocks
//
// with <A, X> = Re tr(A^dagger X). Matrix-valued equalities are added through
// add_hermitian_equality, which expands them over an orthonormal basis of
// Hermitian matrices.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "telerob/linalg.hpp"

namespace telerob::conic {

enum class Cone { kPsd, kPpt };

struct Block {
  std::size_t size = 0;
  Cone cone = Cone::kPsd;
  Dims ppt_dims;  ///< for kPpt: the last factor is transposed
};

enum class Sense { kEqual, kLessEqual, kGreaterEqual };

/// Contribution <coeff, X_block> to a row or the objective.
struct Term {
  std::size_t block;
  CMatrix coeff;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::kEqual;
  double rhs = 0.0;
};

/// A complex-linear, Hermitian-preserving map applied to one block.
struct MapTerm {
  std::size_t block;
  std::function<CMatrix(const CMatrix&)> map;
};

/// Row range of a matrix-valued equality, in the order of hermitian_basis.
struct HermitianRows {
  std::size_t first = 0;
  std::size_t dim = 0;
};

/// Orthonormal basis of n x n Hermitian matrices: E_ii, then for i < j the
/// pairs (E_ij + E_ji)/sqrt2 and i(E_ij - E_ji)/sqrt2.
std::vector<CMatrix> hermitian_basis(std::size_t n);

/// Reassembles sum_r y_r E_r from row values.
CMatrix gather_hermitian(const HermitianRows& rows,
                         const std::vector<double>& values);

class SdpProblem {
 public:
  std::size_t add_block(std::size_t size);
  /// PSD block whose partial transpose on the last factor of `dims` is also
  /// PSD.
  std::size_t add_ppt_block(Dims dims);

  /// Minimization objective.
  void set_objective(std::vector<Term> terms, double constant = 0.0);
  std::size_t add_constraint(Constraint c);
  /// sum_t map_t(X_{block_t}) = rhs as an equality of Hermitian matrices.
  HermitianRows add_hermitian_equality(const std::vector<MapTerm>& terms,
                                       const CMatrix& rhs);

  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }

  /// Row value sum_b <A_kb, X_b>.
  double row_value(std::size_t k, const std::vector<CMatrix>& x) const;
  double objective_value(const std::vector<CMatrix>& x) const;

  /// Writes the problem in a plain-text block format.
  void dump(std::ostream& os) const;

 private:
  void check_block(std::size_t b) const;

  std::vector<Block> blocks_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  double objective_constant_ = 0.0;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kMaxIter };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 200;
};

struct SdpSolution {
  Status status = Status::kMaxIter;
  std::vector<CMatrix> primal_blocks;
  /// C_b - sum_k y_k A_kb for every block; lies in the dual cone.
  std::vector<CMatrix> dual_slacks;
  /// One multiplier per row.
  std::vector<double> dual_multipliers;
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// |primal - dual| / (1 + |primal| + |dual|)
  double gap = 0.0;
  double max_constraint_violation = 0.0;
  int iterations = 0;
  std::string detail;
};

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

struct CertificateReport {
  bool ok = true;
  std::vector<std::string> failures;
  double primal_violation = 0.0;
  double primal_cone_violation = 0.0;
  double dual_cone_violation = 0.0;
  double duality_gap = 0.0;
};

/// Recomputes feasibility and duality of a claimed solution from the problem
/// data alone.
CertificateReport verify_certificate(const SdpProblem& problem,
                                     const SdpSolution& solution,
                                     double tol = 1e-8);

/// Distance-like measure of Z from the cone of decomposable operators
/// P + Q^{T_last}: the least t >= 0 with Z + t 1 decomposable.
double decomposable_defect(const CMatrix& z, const Dims& dims);

}  // namespace telerob::conic
