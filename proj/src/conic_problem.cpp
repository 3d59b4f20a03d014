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

#include <cmath>
#include <iomanip>
#include <ostream>

#include "telerob/conic.hpp"
#include "telerob/errors.hpp"

namespace telerob::conic {
namespace {

// tr(E_r Y) for the r-th element of hermitian_basis(n), without forming E_r.
double basis_pairing(std::size_t r, const CMatrix& y) {
  const auto n = static_cast<std::size_t>(y.rows());
  if (r < n) {
    const auto i = static_cast<Eigen::Index>(r);
    return y(i, i).real();
  }
  std::size_t offset = r - n;
  const std::size_t pair = offset / 2;
  const bool imaginary = offset % 2 == 1;
  // Pair index enumerates (i, j) with i < j in row-major order.
  std::size_t i = 0;
  std::size_t remaining = pair;
  while (remaining >= n - 1 - i) {
    remaining -= n - 1 - i;
    ++i;
  }
  const std::size_t j = i + 1 + remaining;
  const Complex yij = y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  const Complex yji = y(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  const double s = 1.0 / std::sqrt(2.0);
  if (!imaginary) return s * (yij + yji).real();
  return (s * Complex(0.0, 1.0) * (yji - yij)).real();
}

}  // namespace

std::vector<CMatrix> hermitian_basis(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  std::vector<CMatrix> basis;
  basis.reserve(n * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    CMatrix e = CMatrix::Zero(m, m);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      CMatrix re = CMatrix::Zero(m, m);
      re(i, j) = s;
      re(j, i) = s;
      CMatrix im = CMatrix::Zero(m, m);
      im(i, j) = Complex(0.0, s);
      im(j, i) = Complex(0.0, -s);
      basis.push_back(std::move(re));
      basis.push_back(std::move(im));
    }
  }
  return basis;
}

CMatrix gather_hermitian(const HermitianRows& rows,
                         const std::vector<double>& values) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(rows.dim)));
  if (n * n != rows.dim || rows.first + rows.dim > values.size()) {
    throw DimensionError("gather_hermitian: row range does not fit");
  }
  const auto basis = hermitian_basis(n);
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(n),
                              static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < rows.dim; ++r) {
    out += values[rows.first + r] * basis[r];
  }
  return out;
}

void SdpProblem::check_block(std::size_t b) const {
  if (b >= blocks_.size()) throw DimensionError("unknown block index");
}

std::size_t SdpProblem::add_block(std::size_t size) {
  if (size == 0) throw DimensionError("block size must be positive");
  blocks_.push_back(Block{size, Cone::kPsd, Dims{size}});
  return blocks_.size() - 1;
}

std::size_t SdpProblem::add_ppt_block(Dims dims) {
  if (dims.size() < 2) {
    throw DimensionError("PPT block needs at least two subsystems");
  }
  blocks_.push_back(Block{dims.total(), Cone::kPpt, std::move(dims)});
  return blocks_.size() - 1;
}

void SdpProblem::set_objective(std::vector<Term> terms, double constant) {
  for (const Term& t : terms) {
    check_block(t.block);
    if (static_cast<std::size_t>(t.coeff.rows()) != blocks_[t.block].size ||
        t.coeff.rows() != t.coeff.cols()) {
      throw DimensionError("objective coefficient shape mismatch");
    }
  }
  objective_ = std::move(terms);
  objective_constant_ = constant;
}

std::size_t SdpProblem::add_constraint(Constraint c) {
  for (const Term& t : c.terms) {
    check_block(t.block);
    if (static_cast<std::size_t>(t.coeff.rows()) != blocks_[t.block].size ||
        t.coeff.rows() != t.coeff.cols()) {
      throw DimensionError("constraint coefficient shape mismatch");
    }
    if (!t.coeff.allFinite()) throw ValidationError("non-finite coefficient");
  }
  if (!std::isfinite(c.rhs)) throw ValidationError("non-finite right-hand side");
  constraints_.push_back(std::move(c));
  return constraints_.size() - 1;
}

HermitianRows SdpProblem::add_hermitian_equality(
    const std::vector<MapTerm>& terms, const CMatrix& rhs) {
  if (rhs.rows() != rhs.cols()) {
    throw DimensionError("hermitian equality: rhs must be square");
  }
  const auto m = static_cast<std::size_t>(rhs.rows());
  const std::size_t rows = m * m;

  // images[t][p*n + q] = map_t(E_pq)
  std::vector<std::vector<CMatrix>> images(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    check_block(terms[t].block);
    const std::size_t n = blocks_[terms[t].block].size;
    images[t].reserve(n * n);
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        CMatrix unit = CMatrix::Zero(static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(n));
        unit(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = 1.0;
        CMatrix image = terms[t].map(unit);
        if (static_cast<std::size_t>(image.rows()) != m ||
            static_cast<std::size_t>(image.cols()) != m) {
          throw DimensionError("hermitian equality: map output shape mismatch");
        }
        images[t].push_back(std::move(image));
      }
    }
  }

  HermitianRows out{constraints_.size(), rows};
  for (std::size_t r = 0; r < rows; ++r) {
    Constraint c;
    c.sense = Sense::kEqual;
    c.rhs = basis_pairing(r, rhs);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::size_t n = blocks_[terms[t].block].size;
      // K(q,p) = tr(E_r map(E_pq)) so that tr(E_r map(X)) = tr(K X).
      CMatrix k(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
          const CMatrix& img = images[t][p * n + q];
          // tr(E_r Y) for a non-Hermitian Y is complex; recover it from the
          // Hermitian and anti-Hermitian parts.
          const CMatrix herm = 0.5 * (img + img.adjoint());
          const CMatrix anti = Complex(0.0, -0.5) * (img - img.adjoint());
          k(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) =
              Complex(basis_pairing(r, herm), basis_pairing(r, anti));
        }
      }
      if (k.cwiseAbs().maxCoeff() == 0.0) continue;
      // <coeff, X> = Re tr(coeff^dagger X) = Re tr(K X).
      c.terms.push_back(Term{terms[t].block, k.adjoint()});
    }
    constraints_.push_back(std::move(c));
  }
  return out;
}

double SdpProblem::row_value(std::size_t k, const std::vector<CMatrix>& x) const {
  double v = 0.0;
  for (const Term& t : constraints_.at(k).terms) {
    v += linalg::inner(t.coeff, x.at(t.block));
  }
  return v;
}

double SdpProblem::objective_value(const std::vector<CMatrix>& x) const {
  double v = objective_constant_;
  for (const Term& t : objective_) v += linalg::inner(t.coeff, x.at(t.block));
  return v;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kMaxIter: return "max_iter";
  }
  return "unknown";
}

Status status_from_string(const std::string& s) {
  if (s == "optimal") return Status::kOptimal;
  if (s == "infeasible") return Status::kInfeasible;
  if (s == "unbounded") return Status::kUnbounded;
  if (s == "max_iter") return Status::kMaxIter;
  throw ValidationError("unknown solver status '" + s + "'");
}

namespace {

void dump_matrix(std::ostream& os, const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == Complex(0.0)) continue;
      os << "    " << i << ' ' << j << ' ' << m(i, j).real() << ' '
         << m(i, j).imag() << '\n';
    }
  }
}

}  // namespace

void SdpProblem::dump(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  os << "blocks " << blocks_.size() << '\n';
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    os << "block " << b << ' ' << blocks_[b].size << ' '
       << (blocks_[b].cone == Cone::kPpt ? "ppt" : "psd");
    if (blocks_[b].cone == Cone::kPpt) {
      for (std::size_t f : blocks_[b].ppt_dims.factors()) os << ' ' << f;
    }
    os << '\n';
  }
  os << "objective " << objective_constant_ << '\n';
  for (const Term& t : objective_) {
    os << "  term " << t.block << '\n';
    dump_matrix(os, t.coeff);
  }
  os << "constraints " << constraints_.size() << '\n';
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    const Constraint& c = constraints_[k];
    const char* sense = c.sense == Sense::kEqual       ? "="
                        : c.sense == Sense::kLessEqual ? "<="
                                                       : ">=";
    os << "row " << k << ' ' << sense << ' ' << c.rhs << '\n';
    for (const Term& t : c.terms) {
      os << "  term " << t.block << '\n';
      dump_matrix(os, t.coeff);
    }
  }
  os.precision(old_precision);
}

}  // namespace telerob::conic
