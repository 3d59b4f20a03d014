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

// States, measurements and teleportation instruments.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "telerob/linalg.hpp"

namespace telerob {

/// Tolerance for state and POVM validation.
inline constexpr double kStateTol = 1e-9;
/// Tolerance for the no-signalling condition of an instrument.
inline constexpr double kNoSignallingTol = 1e-8;

/// Unit-trace PSD operator with subsystem structure.
class DensityMatrix {
 public:
  DensityMatrix(CMatrix matrix, Dims dims);

  /// |psi><psi| for a (not necessarily normalized) vector; normalizes.
  static DensityMatrix pure(const CVector& psi, Dims dims);

  const CMatrix& matrix() const { return matrix_; }
  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  bool is_pure(double tol = kStateTol) const;

 private:
  CMatrix matrix_;
  Dims dims_;
};

/// Positive operators summing to the identity.
class Povm {
 public:
  Povm(std::vector<CMatrix> elements, Dims dims);

  const std::vector<CMatrix>& elements() const { return elements_; }
  const CMatrix& operator[](std::size_t a) const { return elements_[a]; }
  std::size_t size() const { return elements_.size(); }
  const Dims& dims() const { return dims_; }

 private:
  std::vector<CMatrix> elements_;
  Dims dims_;
};

/// Choi operator of a completely positive trace-non-increasing map.
/// Invariant: PSD and tr_out J <= (1/in_dim) 1 within kStateTol.
class ChoiOperator {
 public:
  ChoiOperator(CMatrix matrix, std::size_t in_dim, std::size_t out_dim);

  const CMatrix& matrix() const { return matrix_; }
  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }

 private:
  CMatrix matrix_;
  std::size_t in_dim_;
  std::size_t out_dim_;
};

struct NoSignallingReport {
  CMatrix marginal;  ///< rho_B = tr_V sum_a J_a
  double residual;   ///< || sum_a J_a - (1/d_V) 1 (x) rho_B ||_F
  bool valid;        ///< residual <= 1e-6
};

/// Checks the no-signalling condition on raw Choi data over d_V (x) d_B.
NoSignallingReport validate_no_signalling(const std::vector<CMatrix>& ops,
                                          std::size_t dv, std::size_t db);

/// Outcome-indexed Choi operators {J_a} on V (x) B whose sum is
/// (1/d_V) 1 (x) rho_B.
class TeleportationInstrument {
 public:
  TeleportationInstrument(std::vector<CMatrix> ops, std::size_t dv,
                          std::size_t db, double tol = kNoSignallingTol);

  const std::vector<CMatrix>& ops() const { return ops_; }
  const CMatrix& operator[](std::size_t a) const { return ops_[a]; }
  std::size_t outcomes() const { return ops_.size(); }
  std::size_t dv() const { return dv_; }
  std::size_t db() const { return db_; }
  Dims dims() const { return Dims{dv_, db_}; }
  ChoiOperator choi(std::size_t a) const;
  /// Bob's marginal rho_B.
  const CMatrix& marginal() const { return marginal_; }

 private:
  std::vector<CMatrix> ops_;
  std::size_t dv_;
  std::size_t db_;
  CMatrix marginal_;
};

/// Probe states {omega_x} with weights.
class InputEnsemble {
 public:
  InputEnsemble(std::vector<DensityMatrix> states, std::vector<double> weights);
  /// Uniform weights.
  explicit InputEnsemble(std::vector<DensityMatrix> states);

  const std::vector<DensityMatrix>& states() const { return states_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return states_.size(); }
  std::size_t dim() const { return states_.front().dim(); }
  /// True iff the states span the full operator space of their dimension.
  bool tomographically_complete() const;
  bool all_pure() const;

 private:
  std::vector<DensityMatrix> states_;
  std::vector<double> weights_;
};

/// J_a = tr_{V'A}[(1_V (x) M_a (x) 1_B)(phi+^{VV'} (x) rho^{AB})].
/// The POVM acts on V' (x) A, the state on A (x) B.
TeleportationInstrument build_instrument(const Povm& measurement,
                                         const DensityMatrix& state);

/// Unnormalized output Lambda(omega) = d_V tr_V[(omega^T (x) 1) J].
CMatrix apply_subchannel(const ChoiOperator& j, const CMatrix& omega);

struct Realization {
  DensityMatrix state;  ///< pure state on A (x) B with d_A = d_B
  Povm measurement;     ///< on V' (x) A
};

/// Recovers a state and a measurement reproducing the given Choi operators.
Realization realize_from_choi(const std::vector<CMatrix>& ops,
                              std::size_t dv, std::size_t db);

struct FitResult {
  std::vector<CMatrix> raw;  ///< unconstrained least-squares solution
  std::optional<TeleportationInstrument> instrument;
  double residual;           ///< Frobenius norm of the data misfit of `raw`
  bool projected;            ///< whether `instrument` was repaired by an SDP
  std::string diagnostic;
};

/// Least-squares reconstruction of {J_a} from outputs data[a][x] produced by
/// input states inputs[x]. Throws ValidationError on incomplete inputs.
FitResult fit_choi(const InputEnsemble& inputs,
                   const std::vector<std::vector<CMatrix>>& data,
                   std::size_t db);

/// Generalized Bell measurement on d (x) d: elements (1 (x) W) phi+ (1 (x) W)^dagger
/// for the Weyl operators W in weyl_operators order.
Povm bell_povm(std::size_t d);

/// Standard teleportation: Bell measurement on a maximally entangled pair.
TeleportationInstrument ideal_instrument(std::size_t d);

/// p phi+ + (1 - p) 1/d^2.
DensityMatrix isotropic_state(std::size_t d, double p);

/// Pure states of d + 1 mutually unbiased bases (prime d). For d = 2: the
/// six Pauli eigenstates.
InputEnsemble mub_states(std::size_t d);

/// Validation helpers shared across modules.
bool is_psd(const CMatrix& x, double tol);

}  // namespace telerob
