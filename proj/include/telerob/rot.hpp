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

// Robustness of teleportation (RoT) and robustness of entanglement.
//
// Separability constraints are relaxed to positivity under partial transpose,
// which is exact when d_V * d_B <= 6. Beyond that, RoT values are lower
// bounds and a warning is logged.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "telerob/conic.hpp"
#include "telerob/qobjects.hpp"

namespace telerob::rot {

inline constexpr const char* kPptRelaxationWarning =
    "relaxation: T value is a lower bound, classical values are upper bounds";

/// True when the PPT cone equals the separable cone for d1 (x) d2.
bool ppt_is_exact(std::size_t d1, std::size_t d2);

struct RotPrimalSolution {
  double value = 0.0;                  ///< tr tau - 1
  std::vector<CMatrix> classical_ops;  ///< F_a, PPT with F_a >= J_a
  CMatrix tau;                         ///< d_V sum_a F_a <= 1 (x) tau
  conic::SdpSolution certificate;
};

struct RotDualSolution {
  double value = 0.0;              ///< d_V sum_a tr[A_a J_a] - 1
  std::vector<CMatrix> witnesses;  ///< A_a >= 0
  CMatrix b_op;                    ///< B >= 0, tr_V B = 1_B
  /// (P_a, Q_a) >= 0 with B - A_a = P_a + Q_a^{T_B}
  std::vector<std::pair<CMatrix, CMatrix>> decompositions;
  std::size_t dv = 0;
  std::size_t db = 0;
  conic::SdpSolution certificate;
};

/// Primal program: blocks F_a (PPT), S_a, tau, T; rows d_V F_a - S_a = d_V J_a
/// and T + d_V sum_a F_a - 1 (x) tau = 0; objective tr tau - 1.
conic::SdpProblem build_primal_problem(const TeleportationInstrument& instr);

/// Dual program as a minimization of 1 - d_V sum_a tr[A_a J_a]: blocks A_a,
/// P_a, Q_a, B; rows B - A_a - P_a - Q_a^{T_B} = 0 and tr_V B = 1.
conic::SdpProblem build_dual_problem(const TeleportationInstrument& instr);

RotPrimalSolution rot_primal(const TeleportationInstrument& instr, double tol = 1e-8);
RotDualSolution rot_dual(const TeleportationInstrument& instr, double tol = 1e-8);

/// Cross-validated RoT: primal and dual must agree within 10 * tol.
double rot(const TeleportationInstrument& instr, double tol = 1e-8);

/// Dual objective d_V sum_a tr[A_a J_a] - 1 of fixed witnesses on an
/// instrument; a lower bound on its RoT.
double dual_objective(const RotDualSolution& dual, const TeleportationInstrument& instr);

/// min tr(sigma) - 1 over PPT sigma >= rho.
double robustness_of_entanglement(const DensityMatrix& rho, double tol = 1e-8);

struct SeesawResult {
  double value = 0.0;
  Povm measurement;
  std::vector<double> history;  ///< values of the best run, one per round
};

/// Alternates between the RoT dual and a POVM optimization for fixed dual
/// witnesses. Starts from the Bell measurement, then `restarts` random
/// measurements with d_A^2 outcomes.
SeesawResult rot_max_over_povm(const DensityMatrix& rho, int rounds, std::uint64_t seed,
                               int restarts = 3, double tol = 1e-8);

}  // namespace telerob::rot
