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

#include "telerob/qobjects.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "telerob/channels.hpp"
#include "telerob/conic.hpp"
#include "telerob/errors.hpp"

namespace telerob {
namespace {

void require_finite(const CMatrix& x, const char* what) {
  if (!x.allFinite()) throw ValidationError(fmt::format("{}: non-finite entry", what));
}

CMatrix symmetrized(const CMatrix& x, double tol, const char* what) {
  if (x.rows() != x.cols()) throw DimensionError(fmt::format("{}: not square", what));
  require_finite(x, what);
  const double defect = linalg::hermiticity_defect(x);
  if (defect > tol) {
    throw ValidationError(fmt::format("{}: not Hermitian (defect {:.3e})", what, defect));
  }
  return 0.5 * (x + x.adjoint());
}

double psd_scale(const CMatrix& x) { return std::max(1.0, x.cwiseAbs().maxCoeff()); }

}  // namespace

bool is_psd(const CMatrix& x, double tol) {
  if (x.rows() != x.cols() || !x.allFinite()) return false;
  if (linalg::hermiticity_defect(x) > tol) return false;
  return linalg::min_eigenvalue(x) >= -tol * psd_scale(x);
}

DensityMatrix::DensityMatrix(CMatrix matrix, Dims dims)
    : matrix_(symmetrized(matrix, kStateTol, "DensityMatrix")), dims_(std::move(dims)) {
  dims_.check_side(matrix_.rows());
  const double lmin = linalg::min_eigenvalue(matrix_);
  if (lmin < -kStateTol) {
    throw ValidationError(fmt::format("DensityMatrix: negative eigenvalue {:.3e}", lmin));
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kStateTol) {
    throw ValidationError(fmt::format("DensityMatrix: trace {:.12f} is not 1", tr));
  }
}

DensityMatrix DensityMatrix::pure(const CVector& psi, Dims dims) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw ValidationError("DensityMatrix::pure: zero vector");
  const CVector u = psi / n;
  return DensityMatrix(u * u.adjoint(), std::move(dims));
}

bool DensityMatrix::is_pure(double tol) const {
  return std::abs((matrix_ * matrix_).trace().real() - 1.0) <= tol;
}

Povm::Povm(std::vector<CMatrix> elements, Dims dims) : dims_(std::move(dims)) {
  if (elements.empty()) throw ValidationError("Povm: no elements");
  const std::size_t n = dims_.total();
  CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < elements.size(); ++a) {
    dims_.check_side(elements[a].rows());
    CMatrix e = symmetrized(elements[a], kStateTol, "Povm element");
    const double lmin = linalg::min_eigenvalue(e);
    if (lmin < -kStateTol) {
      throw ValidationError(
          fmt::format("Povm: element {} has negative eigenvalue {:.3e}", a, lmin));
    }
    sum += e;
    elements_.push_back(std::move(e));
  }
  const double defect = (sum - linalg::identity(n)).cwiseAbs().maxCoeff();
  if (defect > kStateTol) {
    throw ValidationError(
        fmt::format("Povm: elements sum to identity only within {:.3e}", defect));
  }
}

ChoiOperator::ChoiOperator(CMatrix matrix, std::size_t in_dim, std::size_t out_dim)
    : matrix_(symmetrized(matrix, kStateTol, "ChoiOperator")),
      in_dim_(in_dim),
      out_dim_(out_dim) {
  Dims{in_dim, out_dim}.check_side(matrix_.rows());
  const double scale = psd_scale(matrix_);
  if (linalg::min_eigenvalue(matrix_) < -kStateTol * scale) {
    throw ValidationError("ChoiOperator: not positive semidefinite");
  }
  const CMatrix marginal = linalg::partial_trace(matrix_, Dims{in_dim, out_dim}, {0});
  const double excess =
      linalg::max_eigenvalue(marginal - linalg::identity(in_dim) / static_cast<double>(in_dim));
  if (excess > kStateTol) {
    throw ValidationError(
        fmt::format("ChoiOperator: trace-increasing by {:.3e}", excess));
  }
}

NoSignallingReport validate_no_signalling(const std::vector<CMatrix>& ops, std::size_t dv,
                                          std::size_t db) {
  const Dims dims{dv, db};
  const auto n = static_cast<Eigen::Index>(dv * db);
  CMatrix sum = CMatrix::Zero(n, n);
  for (const CMatrix& j : ops) {
    dims.check_side(j.rows());
    if (j.rows() != j.cols()) throw DimensionError("no-signalling check: non-square operator");
    sum += j;
  }
  NoSignallingReport report;
  report.marginal = linalg::partial_trace(sum, dims, {1});
  report.residual =
      (sum - linalg::tensor(linalg::identity(dv), report.marginal) / static_cast<double>(dv))
          .norm();
  report.valid = report.residual <= 1e-6;
  return report;
}

TeleportationInstrument::TeleportationInstrument(std::vector<CMatrix> ops, std::size_t dv,
                                                 std::size_t db, double tol)
    : dv_(dv), db_(db) {
  if (ops.empty()) throw ValidationError("TeleportationInstrument: no outcomes");
  if (dv == 0 || db == 0) throw DimensionError("TeleportationInstrument: zero dimension");
  for (std::size_t a = 0; a < ops.size(); ++a) {
    Dims{dv, db}.check_side(ops[a].rows());
    CMatrix j = symmetrized(ops[a], kStateTol, "TeleportationInstrument");
    const double lmin = linalg::min_eigenvalue(j);
    if (lmin < -tol) {
      throw ValidationError(fmt::format(
          "TeleportationInstrument: outcome {} has negative eigenvalue {:.3e}", a, lmin));
    }
    ops_.push_back(std::move(j));
  }
  const NoSignallingReport ns = validate_no_signalling(ops_, dv, db);
  if (ns.residual > tol) {
    throw ValidationError(fmt::format(
        "TeleportationInstrument: no-signalling residual {:.3e} exceeds {:.1e}",
        ns.residual, tol));
  }
  const double tr = ns.marginal.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    throw ValidationError(
        fmt::format("TeleportationInstrument: outcome probabilities sum to {:.12f}", tr));
  }
  marginal_ = ns.marginal;
}

ChoiOperator TeleportationInstrument::choi(std::size_t a) const {
  return ChoiOperator(ops_.at(a), dv_, db_);
}

InputEnsemble::InputEnsemble(std::vector<DensityMatrix> states, std::vector<double> weights)
    : states_(std::move(states)), weights_(std::move(weights)) {
  if (states_.empty()) throw ValidationError("InputEnsemble: no states");
  if (weights_.size() != states_.size()) {
    throw DimensionError("InputEnsemble: weight count differs from state count");
  }
  for (const DensityMatrix& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw DimensionError("InputEnsemble: states of different dimension");
    }
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw ValidationError("InputEnsemble: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kStateTol) {
    throw ValidationError(fmt::format("InputEnsemble: weights sum to {:.12f}", total));
  }
}

InputEnsemble::InputEnsemble(std::vector<DensityMatrix> states)
    : InputEnsemble(states, std::vector<double>(states.size(),
                                                1.0 / static_cast<double>(states.size()))) {}

namespace {

// Row x holds vec(omega_x) in row-major order.
Eigen::MatrixXcd design_of(const InputEnsemble& inputs) {
  const auto d = static_cast<Eigen::Index>(inputs.dim());
  Eigen::MatrixXcd design(static_cast<Eigen::Index>(inputs.size()), d * d);
  for (std::size_t x = 0; x < inputs.size(); ++x) {
    const CMatrix& w = inputs.states()[x].matrix();
    for (Eigen::Index k = 0; k < d; ++k) {
      for (Eigen::Index l = 0; l < d; ++l) {
        design(static_cast<Eigen::Index>(x), k * d + l) = w(k, l);
      }
    }
  }
  return design;
}

Eigen::Index numeric_rank(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const RVector s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > 1e-10 * s(0)) ++r;
  }
  return r;
}

}  // namespace

bool InputEnsemble::tomographically_complete() const {
  const auto d = static_cast<Eigen::Index>(dim());
  return numeric_rank(design_of(*this)) == d * d;
}

bool InputEnsemble::all_pure() const {
  for (const DensityMatrix& s : states_) {
    if (!s.is_pure()) return false;
  }
  return true;
}

TeleportationInstrument build_instrument(const Povm& measurement, const DensityMatrix& state) {
  if (measurement.dims().size() != 2 || state.dims().size() != 2) {
    throw DimensionError("build_instrument: measurement and state must be bipartite");
  }
  const std::size_t dv = measurement.dims()[0];
  const std::size_t da = measurement.dims()[1];
  const std::size_t db = state.dims()[1];
  if (state.dims()[0] != da) {
    throw DimensionError(fmt::format(
        "build_instrument: measurement acts on A of dimension {}, state has {}", da,
        state.dims()[0]));
  }
  // J_a = (1/d_V) tr_A[(M_a^{T_V} (x) 1_B)(1_V (x) rho^{AB})]
  const CMatrix lifted_state = linalg::tensor(linalg::identity(dv), state.matrix());
  const Dims vab{dv, da, db};
  std::vector<CMatrix> ops;
  ops.reserve(measurement.size());
  for (const CMatrix& m : measurement.elements()) {
    const CMatrix mt = linalg::partial_transpose(m, Dims{dv, da}, 0);
    const CMatrix prod = linalg::tensor(mt, linalg::identity(db)) * lifted_state;
    ops.push_back(linalg::partial_trace(prod, vab, {0, 2}) / static_cast<double>(dv));
  }
  return TeleportationInstrument(std::move(ops), dv, db);
}

CMatrix apply_subchannel(const ChoiOperator& j, const CMatrix& omega) {
  return channels::apply_choi(j.matrix(), j.in_dim(), j.out_dim(), omega);
}

Realization realize_from_choi(const std::vector<CMatrix>& ops, std::size_t dv, std::size_t db) {
  if (ops.empty()) throw ValidationError("realize_from_choi: no operators");
  for (std::size_t a = 0; a < ops.size(); ++a) {
    if (!is_psd(ops[a], 1e-8)) {
      throw ValidationError(fmt::format("realize_from_choi: operator {} is not PSD", a));
    }
  }
  const NoSignallingReport ns = validate_no_signalling(ops, dv, db);
  if (ns.residual > 1e-8) {
    throw ValidationError(
        fmt::format("realize_from_choi: no-signalling residual {:.3e}", ns.residual));
  }
  const CMatrix eta = 0.5 * (ns.marginal + ns.marginal.adjoint());
  const CMatrix root = linalg::sqrt_psd(eta);
  const CMatrix inv_root_t = linalg::pinv_sqrt(eta, 1e-12).transpose();

  // |eta> = sqrt(d) (1 (x) sqrt(eta)) |phi+> = sum_i |i> (x) sqrt(eta)|i>
  CVector purification = CVector::Zero(static_cast<Eigen::Index>(db * db));
  for (std::size_t i = 0; i < db; ++i) {
    purification.segment(static_cast<Eigen::Index>(i * db), static_cast<Eigen::Index>(db)) =
        root.col(static_cast<Eigen::Index>(i));
  }

  const CMatrix side = linalg::tensor(linalg::identity(dv), inv_root_t);
  std::vector<CMatrix> elements;
  const auto n = static_cast<Eigen::Index>(dv * db);
  CMatrix sum = CMatrix::Zero(n, n);
  for (const CMatrix& j : ops) {
    CMatrix e = static_cast<double>(dv) * side * j.transpose() * side;
    e = 0.5 * (e + e.adjoint());
    sum += e;
    elements.push_back(std::move(e));
  }
  CMatrix remainder = linalg::identity(dv * db) - sum;
  remainder = 0.5 * (remainder + remainder.adjoint()) / static_cast<double>(elements.size());
  for (CMatrix& e : elements) e += remainder;

  return Realization{DensityMatrix::pure(purification, Dims{db, db}),
                     Povm(std::move(elements), Dims{dv, db})};
}

namespace {

// Least trace-norm repair onto PSD no-signalling families: F_a - J_a is split
// as U_a - L_a with U_a, L_a >= 0 and sum_a tr(U_a + L_a) is minimized.
std::optional<TeleportationInstrument> project_instrument(const std::vector<CMatrix>& raw,
                                                          std::size_t dv, std::size_t db) {
  conic::SdpProblem p;
  const std::size_t n = dv * db;
  const CMatrix id_n = linalg::identity(n);
  const std::size_t tau = p.add_block(db);
  std::vector<std::size_t> fixed;
  std::vector<conic::Term> objective;
  auto same = [](const CMatrix& x) { return x; };
  auto neg = [](const CMatrix& x) { return CMatrix(-x); };
  std::vector<conic::MapTerm> sum_terms;
  for (const CMatrix& j : raw) {
    const std::size_t f = p.add_block(n);
    const std::size_t up = p.add_block(n);
    const std::size_t lo = p.add_block(n);
    p.add_hermitian_equality({{f, same}, {up, neg}, {lo, same}}, j);
    objective.push_back({up, id_n});
    objective.push_back({lo, id_n});
    sum_terms.push_back({f, same});
    fixed.push_back(f);
  }
  sum_terms.push_back({tau, [dv](const CMatrix& x) {
                         return CMatrix(-linalg::tensor(linalg::identity(dv), x) /
                                        static_cast<double>(dv));
                       }});
  p.add_hermitian_equality(sum_terms, CMatrix::Zero(static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(n)));
  p.add_constraint({{{tau, linalg::identity(db)}}, conic::Sense::kEqual, 1.0});
  p.set_objective(std::move(objective));
  const conic::SdpSolution s = conic::solve(p, {1e-8, 200});
  if (s.status != conic::Status::kOptimal) return std::nullopt;
  std::vector<CMatrix> ops;
  for (std::size_t f : fixed) ops.push_back(s.primal_blocks[f]);
  return TeleportationInstrument(std::move(ops), dv, db, 1e-8);
}

}  // namespace

FitResult fit_choi(const InputEnsemble& inputs, const std::vector<std::vector<CMatrix>>& data,
                   std::size_t db) {
  const std::size_t dv = inputs.dim();
  const auto d2 = static_cast<Eigen::Index>(dv * dv);
  const Eigen::MatrixXcd design = static_cast<double>(dv) * design_of(inputs);
  const Eigen::Index rank = numeric_rank(design);
  if (rank != d2) {
    throw ValidationError(fmt::format(
        "fit_choi: input set is not tomographically complete (rank {} of {})", rank, d2));
  }
  if (data.empty()) throw ValidationError("fit_choi: no outcomes");
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> solver(design);

  FitResult result;
  double misfit2 = 0.0;
  const auto nb = static_cast<Eigen::Index>(db);
  const auto nv = static_cast<Eigen::Index>(dv);
  for (std::size_t a = 0; a < data.size(); ++a) {
    if (data[a].size() != inputs.size()) {
      throw DimensionError(fmt::format("fit_choi: outcome {} has {} outputs for {} inputs", a,
                                       data[a].size(), inputs.size()));
    }
    CMatrix j = CMatrix::Zero(nv * nb, nv * nb);
    for (Eigen::Index m = 0; m < nb; ++m) {
      for (Eigen::Index n = 0; n < nb; ++n) {
        CVector rhs(static_cast<Eigen::Index>(inputs.size()));
        for (std::size_t x = 0; x < inputs.size(); ++x) {
          const CMatrix& s = data[a][x];
          if (s.rows() != nb || s.cols() != nb) {
            throw DimensionError("fit_choi: output has the wrong dimension");
          }
          rhs(static_cast<Eigen::Index>(x)) = s(m, n);
        }
        const CVector sol = solver.solve(rhs);
        misfit2 += (design * sol - rhs).squaredNorm();
        // sol indexes (k, l) with J_{(k m), (l n)}.
        for (Eigen::Index k = 0; k < nv; ++k) {
          for (Eigen::Index l = 0; l < nv; ++l) j(k * nb + m, l * nb + n) = sol(k * nv + l);
        }
      }
    }
    result.raw.push_back(0.5 * (j + j.adjoint()));
  }
  result.residual = std::sqrt(misfit2);
  result.projected = false;

  try {
    result.instrument.emplace(result.raw, dv, db);
    result.diagnostic = "least-squares fit is a valid instrument";
    return result;
  } catch (const ValidationError& e) {
    result.diagnostic = e.what();
  }
  if (result.residual < 1e-4) {
    result.instrument = project_instrument(result.raw, dv, db);
    if (result.instrument) {
      result.projected = true;
      result.diagnostic += "; projected onto the instrument set";
    } else {
      result.diagnostic += "; projection did not converge";
    }
  } else {
    result.diagnostic += fmt::format("; residual {:.3e} too large to repair", result.residual);
  }
  return result;
}

Povm bell_povm(std::size_t d) {
  const CMatrix phi = linalg::phi_plus(d);
  std::vector<CMatrix> elements;
  for (const CMatrix& w : linalg::weyl_operators(d)) {
    const CMatrix u = linalg::tensor(linalg::identity(d), w);
    elements.push_back(u * phi * u.adjoint());
  }
  return Povm(std::move(elements), Dims{d, d});
}

TeleportationInstrument ideal_instrument(std::size_t d) {
  if (d < 2) throw DimensionError("ideal_instrument: d must be at least 2");
  return build_instrument(bell_povm(d), DensityMatrix(linalg::phi_plus(d), Dims{d, d}));
}

DensityMatrix isotropic_state(std::size_t d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("isotropic_state: p outside [0, 1]");
  const double dd = static_cast<double>(d * d);
  return DensityMatrix(p * linalg::phi_plus(d) + (1.0 - p) * linalg::identity(d * d) / dd,
                       Dims{d, d});
}

InputEnsemble mub_states(std::size_t d) {
  std::vector<DensityMatrix> states;
  const auto n = static_cast<Eigen::Index>(d);
  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    const std::vector<CVector> vecs = {
        (CVector(2) << 1.0, 0.0).finished(), (CVector(2) << 0.0, 1.0).finished(),
        (CVector(2) << s, s).finished(),     (CVector(2) << s, -s).finished(),
        (CVector(2) << s, s * i).finished(), (CVector(2) << s, -s * i).finished()};
    for (const CVector& v : vecs) states.push_back(DensityMatrix::pure(v, Dims{2}));
    return InputEnsemble(std::move(states));
  }
  bool prime = d >= 3;
  for (std::size_t q = 2; q * q <= d && prime; ++q) prime = d % q != 0;
  if (!prime) throw DimensionError("mub_states: d must be prime");
  for (Eigen::Index k = 0; k < n; ++k) {
    CVector v = CVector::Zero(n);
    v(k) = 1.0;
    states.push_back(DensityMatrix::pure(v, Dims{d}));
  }
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      CVector v(n);
      for (std::size_t j = 0; j < d; ++j) {
        const std::size_t phase = (a * j * j + b * j) % d;
        v(static_cast<Eigen::Index>(j)) =
            std::polar(1.0, two_pi * static_cast<double>(phase) / static_cast<double>(d));
      }
      states.push_back(DensityMatrix::pure(v, Dims{d}));
    }
  }
  return InputEnsemble(std::move(states));
}

}  // namespace telerob
