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

// Primal-dual interior-point method with Nesterov-Todd scaling and
// Mehrotra predictor-corrector steps, working directly on complex Hermitian
// blocks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "telerob/conic.hpp"
#include "telerob/errors.hpp"

namespace telerob::conic {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Row {
  std::vector<Term> terms;
  double rhs = 0.0;
};

// The problem lowered to equality rows over plain PSD blocks.
struct Standard {
  std::vector<std::size_t> sizes;
  std::vector<CMatrix> c;
  std::vector<Row> rows;
  std::vector<std::size_t> source_row;  // problem row index or kNone
  std::vector<std::vector<std::size_t>> rows_of_block;
  double c0 = 0.0;
};

std::size_t add_plain_block(Standard& s, std::size_t n) {
  s.sizes.push_back(n);
  s.c.push_back(CMatrix::Zero(static_cast<Eigen::Index>(n),
                              static_cast<Eigen::Index>(n)));
  return s.sizes.size() - 1;
}

Standard lower(const SdpProblem& p, std::vector<double>& dropped_rhs) {
  Standard s;
  for (const Block& b : p.blocks()) add_plain_block(s, b.size);
  for (const Term& t : p.objective()) s.c[t.block] += 0.5 * (t.coeff + t.coeff.adjoint());
  s.c0 = p.objective_constant();

  const auto& cons = p.constraints();
  dropped_rhs.assign(cons.size(), 0.0);
  for (std::size_t k = 0; k < cons.size(); ++k) {
    Row row;
    row.rhs = cons[k].rhs;
    for (const Term& t : cons[k].terms) {
      row.terms.push_back(Term{t.block, 0.5 * (t.coeff + t.coeff.adjoint())});
    }
    if (cons[k].sense != Sense::kEqual) {
      const std::size_t slack = add_plain_block(s, 1);
      const double sign = cons[k].sense == Sense::kLessEqual ? 1.0 : -1.0;
      row.terms.push_back(Term{slack, CMatrix::Constant(1, 1, sign)});
    }
    bool empty = true;
    for (const Term& t : row.terms) {
      if (t.coeff.cwiseAbs().maxCoeff() > 0.0) empty = false;
    }
    if (empty) {
      dropped_rhs[k] = row.rhs;
      continue;
    }
    s.rows.push_back(std::move(row));
    s.source_row.push_back(k);
  }

  // PPT blocks: slack Y with Y - X^{T_last} = 0.
  for (std::size_t b = 0; b < p.blocks().size(); ++b) {
    const Block& blk = p.blocks()[b];
    if (blk.cone != Cone::kPpt) continue;
    const std::size_t y = add_plain_block(s, blk.size);
    const std::size_t last = blk.ppt_dims.size() - 1;
    for (const CMatrix& e : hermitian_basis(blk.size)) {
      Row row;
      row.terms.push_back(Term{y, e});
      row.terms.push_back(
          Term{b, -linalg::partial_transpose(e, blk.ppt_dims, last)});
      s.rows.push_back(std::move(row));
      s.source_row.push_back(kNone);
    }
  }

  s.rows_of_block.resize(s.sizes.size());
  for (std::size_t k = 0; k < s.rows.size(); ++k) {
    for (const Term& t : s.rows[k].terms) s.rows_of_block[t.block].push_back(k);
  }
  return s;
}

using Blocks = std::vector<CMatrix>;

Eigen::VectorXd apply_a(const Standard& s, const Blocks& x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(s.rows.size()));
  for (std::size_t k = 0; k < s.rows.size(); ++k) {
    double v = 0.0;
    for (const Term& t : s.rows[k].terms) v += linalg::inner(t.coeff, x[t.block]);
    out(static_cast<Eigen::Index>(k)) = v;
  }
  return out;
}

Blocks apply_at(const Standard& s, const Eigen::VectorXd& y) {
  Blocks out;
  out.reserve(s.sizes.size());
  for (std::size_t n : s.sizes) {
    out.push_back(CMatrix::Zero(static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(n)));
  }
  for (std::size_t k = 0; k < s.rows.size(); ++k) {
    const double yk = y(static_cast<Eigen::Index>(k));
    if (yk == 0.0) continue;
    for (const Term& t : s.rows[k].terms) out[t.block] += yk * t.coeff;
  }
  return out;
}

double blocks_inner(const Blocks& a, const Blocks& b) {
  double v = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) v += linalg::inner(a[i], b[i]);
  return v;
}

double blocks_norm(const Blocks& a) { return std::sqrt(blocks_inner(a, a)); }

CMatrix herm(const CMatrix& x) { return 0.5 * (x + x.adjoint()); }

// Nesterov-Todd scaling of one block: G with G^-1 X G^-* = G^* Z G = diag(s).
struct Scaling {
  CMatrix l;      // chol(X)
  CMatrix r;      // chol(Z)
  CMatrix g;
  CMatrix g_inv;
  RVector s;
  CMatrix w;      // G G^*
};

bool scale_block(const CMatrix& x, const CMatrix& z, Scaling& out) {
  Eigen::LLT<CMatrix> lx(x);
  Eigen::LLT<CMatrix> lz(z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
  out.l = lx.matrixL();
  out.r = lz.matrixL();
  Eigen::JacobiSVD<CMatrix> svd(out.r.adjoint() * out.l,
                                Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.s = svd.singularValues();
  if (out.s.minCoeff() <= 0.0 || !out.s.allFinite()) return false;
  const RVector inv_sqrt = out.s.cwiseSqrt().cwiseInverse();
  const RVector sqrt_s = out.s.cwiseSqrt();
  out.g = out.l * svd.matrixV() * inv_sqrt.cast<Complex>().asDiagonal();
  // G^-1 = S^{1/2} V^* L^-1
  const CMatrix l_inv = out.l.triangularView<Eigen::Lower>().solve(
      CMatrix::Identity(x.rows(), x.cols()));
  out.g_inv = sqrt_s.cast<Complex>().asDiagonal() * svd.matrixV().adjoint() * l_inv;
  out.w = herm(out.g * out.g.adjoint());
  return true;
}

// Largest alpha with chol * (I + alpha chol^-1 d chol^-*) chol^* PSD.
double max_step(const CMatrix& chol, const CMatrix& d) {
  const auto lower = chol.triangularView<Eigen::Lower>();
  const CMatrix t = lower.solve(d);
  const CMatrix m = lower.solve(t.adjoint()).adjoint();
  const double lmin = linalg::min_eigenvalue(herm(m));
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

class InteriorPoint {
 public:
  InteriorPoint(const Standard& s, const SolverOptions& opt) : s_(s), opt_(opt) {}

  SdpSolution run(Blocks& x_out, Eigen::VectorXd& y_out);

 private:
  bool build_schur(const std::vector<Scaling>& sc);
  void build_gram();
  void direction(const std::vector<Scaling>& sc, const Eigen::VectorXd& rp,
                 const Blocks& rd, const Blocks& rc, Blocks& dx,
                 Eigen::VectorXd& dy, Blocks& dz) const;

  const Standard& s_;
  const SolverOptions& opt_;
  Eigen::MatrixXd schur_;
  Eigen::LLT<Eigen::MatrixXd> schur_llt_;
  // Factorized A A^T, used to push search directions back onto A dx = rp.
  Eigen::LDLT<Eigen::MatrixXd> gram_ldlt_;
};

void InteriorPoint::build_gram() {
  const auto m = static_cast<Eigen::Index>(s_.rows.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t b = 0; b < s_.sizes.size(); ++b) {
    const auto& rows = s_.rows_of_block[b];
    std::vector<const CMatrix*> coeff(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (const Term& t : s_.rows[rows[i]].terms) {
        if (t.block == b) coeff[i] = &t.coeff;
      }
    }
    for (std::size_t j = 0; j < rows.size(); ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        gram(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(rows[j])) +=
            linalg::inner(*coeff[i], *coeff[j]);
      }
    }
  }
  gram = gram.selfadjointView<Eigen::Upper>();
  if (m > 0) gram.diagonal().array() += 1e-14 * std::max(1.0, gram.diagonal().maxCoeff());
  gram_ldlt_.compute(gram);
}

bool InteriorPoint::build_schur(const std::vector<Scaling>& sc) {
  const auto m = static_cast<Eigen::Index>(s_.rows.size());
  schur_ = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t b = 0; b < s_.sizes.size(); ++b) {
    const auto& rows = s_.rows_of_block[b];
    if (rows.empty()) continue;
    std::vector<const CMatrix*> coeff(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (const Term& t : s_.rows[rows[i]].terms) {
        if (t.block == b) coeff[i] = &t.coeff;
      }
    }
    const CMatrix& w = sc[b].w;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const CMatrix waw = w * (*coeff[j]) * w;
      for (std::size_t i = 0; i <= j; ++i) {
        const double v = linalg::inner(*coeff[i], waw);
        schur_(static_cast<Eigen::Index>(rows[i]),
               static_cast<Eigen::Index>(rows[j])) += v;
      }
    }
  }
  schur_ = schur_.selfadjointView<Eigen::Upper>();
  schur_llt_.compute(schur_);
  if (schur_llt_.info() == Eigen::Success) return true;
  // Escalating diagonal shifts; the refinement in direction() works against
  // the unshifted matrix.
  const double scale = std::max(1.0, schur_.diagonal().maxCoeff());
  for (double rel : {1e-13, 1e-11, 1e-9}) {
    Eigen::MatrixXd shifted = schur_;
    shifted.diagonal().array() += rel * scale;
    schur_llt_.compute(shifted);
    if (schur_llt_.info() == Eigen::Success) return true;
  }
  return false;
}

void InteriorPoint::direction(const std::vector<Scaling>& sc,
                              const Eigen::VectorXd& rp, const Blocks& rd,
                              const Blocks& rc, Blocks& dx,
                              Eigen::VectorXd& dy, Blocks& dz) const {
  Blocks tmp(s_.sizes.size());
  for (std::size_t b = 0; b < s_.sizes.size(); ++b) {
    tmp[b] = rc[b] - sc[b].w * rd[b] * sc[b].w;
  }
  const Eigen::VectorXd rhs = rp - apply_a(s_, tmp);
  dy = schur_llt_.solve(rhs);
  for (int refine = 0; refine < 2; ++refine) {
    const Eigen::VectorXd r = rhs - schur_ * dy;
    if (r.norm() <= 1e-15 * (1.0 + rhs.norm())) break;
    dy += schur_llt_.solve(r);
  }
  const Blocks aty = apply_at(s_, dy);
  dz.resize(s_.sizes.size());
  dx.resize(s_.sizes.size());
  for (std::size_t b = 0; b < s_.sizes.size(); ++b) {
    dz[b] = herm(rd[b] - aty[b]);
    dx[b] = herm(rc[b] - sc[b].w * dz[b] * sc[b].w);
  }
  if (s_.rows.empty()) return;
  const Eigen::VectorXd leak = rp - apply_a(s_, dx);
  const Blocks fix = apply_at(s_, gram_ldlt_.solve(leak));
  for (std::size_t b = 0; b < s_.sizes.size(); ++b) dx[b] = herm(dx[b] + fix[b]);
}

SdpSolution InteriorPoint::run(Blocks& x, Eigen::VectorXd& y) {
  SdpSolution sol;
  const std::size_t nb = s_.sizes.size();
  const auto m = static_cast<Eigen::Index>(s_.rows.size());
  Eigen::VectorXd b(m);
  for (Eigen::Index k = 0; k < m; ++k) b(k) = s_.rows[static_cast<std::size_t>(k)].rhs;
  const double norm_b = b.norm();
  const double norm_c = blocks_norm(s_.c);

  build_gram();

  // Initial point after Toh, Todd and Tutuncu.
  Blocks z(nb);
  x.assign(nb, CMatrix());
  double total_n = 0.0;
  for (std::size_t blk = 0; blk < nb; ++blk) {
    const double n = static_cast<double>(s_.sizes[blk]);
    total_n += n;
    double xi = std::max(10.0, std::sqrt(n));
    double eta = std::max({10.0, std::sqrt(n), s_.c[blk].norm()});
    for (std::size_t k : s_.rows_of_block[blk]) {
      for (const Term& t : s_.rows[k].terms) {
        if (t.block != blk) continue;
        const double na = t.coeff.norm();
        xi = std::max(xi, n * (1.0 + std::abs(s_.rows[k].rhs)) / (1.0 + na));
        eta = std::max(eta, na);
      }
    }
    const auto ni = static_cast<Eigen::Index>(s_.sizes[blk]);
    x[blk] = xi * CMatrix::Identity(ni, ni);
    z[blk] = eta * CMatrix::Identity(ni, ni);
  }
  y = Eigen::VectorXd::Zero(m);
  const double initial_scale = std::max({1.0, blocks_norm(x), blocks_norm(z)});

  double step_damping = 0.9;
  int stalls = 0;
  // Best iterate seen, returned when the run ends without converging.
  double best_merit = std::numeric_limits<double>::infinity();
  Blocks best_x;
  Eigen::VectorXd best_y;
  SdpSolution best;
  const auto give_up = [&](std::string detail) {
    x = best_x;
    y = best_y;
    best.status = Status::kMaxIter;
    best.detail = fmt::format("{}; best iterate {}: gap {:.2e}, merit {:.2e}", detail,
                              best.iterations, best.gap, best_merit);
    return best;
  };
  std::vector<Scaling> sc(nb);
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd rp = b - apply_a(s_, x);
    const Blocks aty = apply_at(s_, y);
    Blocks rd(nb);
    for (std::size_t blk = 0; blk < nb; ++blk) rd[blk] = s_.c[blk] - z[blk] - aty[blk];
    const double pobj = blocks_inner(s_.c, x);
    const double dobj = b.dot(y);
    const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pinf = rp.norm() / (1.0 + norm_b);
    const double dinf = blocks_norm(rd) / (1.0 + norm_c);
    const double mu = blocks_inner(x, z) / total_n;

    sol.iterations = iter;
    sol.primal_value = pobj + s_.c0;
    sol.dual_value = dobj + s_.c0;
    sol.gap = rel_gap;
    sol.max_constraint_violation = m > 0 ? rp.cwiseAbs().maxCoeff() : 0.0;
    const double merit = std::max({rel_gap, pinf, dinf});
    if (merit < best_merit) {
      best_merit = merit;
      best_x = x;
      best_y = y;
      best = sol;
    }
    spdlog::debug("sdp iter {:3d}: pobj {:+.10e} dobj {:+.10e} gap {:.2e} pinf {:.2e} "
                  "dinf {:.2e} mu {:.2e}", iter, pobj, dobj, rel_gap, pinf, dinf, mu);

    if (rel_gap <= opt_.tol && pinf <= opt_.tol && dinf <= opt_.tol &&
        sol.max_constraint_violation <= opt_.tol) {
      sol.status = Status::kOptimal;
      sol.detail = fmt::format("converged: gap {:.2e}, pinf {:.2e}, dinf {:.2e}",
                               rel_gap, pinf, dinf);
      return sol;
    }
    if (dobj > 1e8 * initial_scale && pinf > opt_.tol) {
      sol.status = Status::kInfeasible;
      sol.detail = fmt::format("dual objective diverged to {:.3e}", dobj);
      return sol;
    }
    if (-pobj > 1e8 * initial_scale && dinf > opt_.tol) {
      sol.status = Status::kUnbounded;
      sol.detail = fmt::format("primal objective diverged to {:.3e}", pobj);
      return sol;
    }
    if (iter >= opt_.max_iter) {
      return give_up(fmt::format("iteration limit: gap {:.2e}, pinf {:.2e}, dinf {:.2e}",
                                 rel_gap, pinf, dinf));
    }

    bool ok = true;
    for (std::size_t blk = 0; blk < nb && ok; ++blk) ok = scale_block(x[blk], z[blk], sc[blk]);
    if (ok) ok = build_schur(sc);
    if (!ok) {
      return give_up(fmt::format("numerical breakdown at iteration {}: gap {:.2e}, "
                                 "pinf {:.2e}, dinf {:.2e}", iter, rel_gap, pinf, dinf));
    }

    // Predictor.
    Blocks rc(nb);
    for (std::size_t blk = 0; blk < nb; ++blk) rc[blk] = -x[blk];
    Blocks dx, dz;
    Eigen::VectorXd dy;
    direction(sc, rp, rd, rc, dx, dy, dz);
    double ap = 1.0, ad = 1.0;
    for (std::size_t blk = 0; blk < nb; ++blk) {
      ap = std::min(ap, max_step(sc[blk].l, dx[blk]));
      ad = std::min(ad, max_step(sc[blk].r, dz[blk]));
    }
    double mu_aff = 0.0;
    for (std::size_t blk = 0; blk < nb; ++blk) {
      mu_aff += linalg::inner(x[blk] + ap * dx[blk], z[blk] + ad * dz[blk]);
    }
    mu_aff /= total_n;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t blk = 0; blk < nb; ++blk) {
      const Scaling& g = sc[blk];
      const CMatrix dxh = g.g_inv * dx[blk] * g.g_inv.adjoint();
      const CMatrix dzh = g.g.adjoint() * dz[blk] * g.g;
      CMatrix h = -(dxh * dzh + dzh * dxh);
      const auto n = h.rows();
      for (Eigen::Index i = 0; i < n; ++i) {
        h(i, i) += 2.0 * sigma * mu - 2.0 * g.s(i) * g.s(i);
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) h(i, j) /= g.s(i) + g.s(j);
      }
      rc[blk] = g.g * h * g.g.adjoint();
    }
    direction(sc, rp, rd, rc, dx, dy, dz);
    double ap_max = std::numeric_limits<double>::infinity();
    double ad_max = std::numeric_limits<double>::infinity();
    for (std::size_t blk = 0; blk < nb; ++blk) {
      ap_max = std::min(ap_max, max_step(sc[blk].l, dx[blk]));
      ad_max = std::min(ad_max, max_step(sc[blk].r, dz[blk]));
    }
    ap = std::min(1.0, step_damping * ap_max);
    ad = std::min(1.0, step_damping * ad_max);
    step_damping = 0.9 + 0.09 * std::min(ap, ad);

    for (std::size_t blk = 0; blk < nb; ++blk) {
      x[blk] = herm(x[blk] + ap * dx[blk]);
      z[blk] = herm(z[blk] + ad * dz[blk]);
    }
    y += ad * dy;

    if (std::max(ap, ad) < 1e-10) {
      if (++stalls >= 3) {
        return give_up(fmt::format("stalled at iteration {}: gap {:.2e}, pinf {:.2e}, "
                                   "dinf {:.2e}", iter, rel_gap, pinf, dinf));
      }
    } else {
      stalls = 0;
    }
  }
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw ValidationError("solver tolerance must be positive");
  std::vector<double> dropped_rhs;
  const Standard s = lower(problem, dropped_rhs);
  const std::size_t nu = problem.blocks().size();
  const std::size_t mu = problem.constraints().size();

  for (std::size_t k = 0; k < mu; ++k) {
    const auto& c = problem.constraints()[k];
    const double r = dropped_rhs[k];
    const bool violated = (c.sense == Sense::kEqual && std::abs(r) > options.tol) ||
                          (c.sense == Sense::kLessEqual && r < -options.tol) ||
                          (c.sense == Sense::kGreaterEqual && r > options.tol);
    if (violated) {
      SdpSolution sol;
      sol.status = Status::kInfeasible;
      sol.detail = fmt::format("row {} has no terms but right-hand side {}", k, r);
      return sol;
    }
  }

  Blocks x;
  Eigen::VectorXd y;
  InteriorPoint ipm(s, options);
  SdpSolution sol = ipm.run(x, y);

  sol.primal_blocks.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nu));
  sol.dual_multipliers.assign(mu, 0.0);
  for (std::size_t k = 0; k < s.rows.size(); ++k) {
    if (s.source_row[k] != kNone) {
      sol.dual_multipliers[s.source_row[k]] = y(static_cast<Eigen::Index>(k));
    }
  }
  // Effective dual slack of every problem block, i.e. for PPT blocks the
  // decomposable operator Z_X + Z_Y^{T_last}.
  sol.dual_slacks.clear();
  for (std::size_t b = 0; b < nu; ++b) {
    const auto n = static_cast<Eigen::Index>(problem.blocks()[b].size);
    sol.dual_slacks.push_back(CMatrix::Zero(n, n));
  }
  for (const Term& t : problem.objective()) {
    sol.dual_slacks[t.block] += 0.5 * (t.coeff + t.coeff.adjoint());
  }
  for (std::size_t k = 0; k < mu; ++k) {
    for (const Term& t : problem.constraints()[k].terms) {
      sol.dual_slacks[t.block] -=
          sol.dual_multipliers[k] * 0.5 * (t.coeff + t.coeff.adjoint());
    }
  }
  // Report violation over the original rows.
  double viol = 0.0;
  for (std::size_t k = 0; k < mu; ++k) {
    const auto& c = problem.constraints()[k];
    const double v = problem.row_value(k, sol.primal_blocks) - c.rhs;
    const double e = c.sense == Sense::kEqual       ? std::abs(v)
                     : c.sense == Sense::kLessEqual ? std::max(0.0, v)
                                                    : std::max(0.0, -v);
    viol = std::max(viol, e);
  }
  for (std::size_t b = 0; b < nu; ++b) {
    const Block& blk = problem.blocks()[b];
    if (blk.cone != Cone::kPpt || x.empty()) continue;
    const CMatrix pt = linalg::partial_transpose(sol.primal_blocks[b], blk.ppt_dims,
                                                 blk.ppt_dims.size() - 1);
    viol = std::max(viol, -linalg::min_eigenvalue(pt));
  }
  sol.max_constraint_violation = std::max(sol.max_constraint_violation, viol);
  if (sol.status == Status::kOptimal && viol > options.tol) {
    sol.status = Status::kMaxIter;
    sol.detail += fmt::format("; original-row violation {:.2e} exceeds tolerance", viol);
  }
  return sol;
}

}  // namespace telerob::conic
