#include "wsos/cone.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "wsos/errors.hpp"
#include "wsos/ldlt.hpp"

namespace wsos {

std::string to_string(Basis b) {
  switch (b) {
    case Basis::monomial: return "monomial";
    case Basis::chebyshev: return "chebyshev";
    case Basis::custom: return "custom";
  }
  return "custom";
}

Basis parse_basis(const std::string& name) {
  if (name == "monomial") return Basis::monomial;
  if (name == "chebyshev") return Basis::chebyshev;
  if (name == "custom") return Basis::custom;
  throw ParseError("unknown basis '" + name + "'");
}

ConeOperator::ConeOperator(std::size_t dim, std::vector<std::size_t> block_dims,
                           std::vector<std::vector<TensorEntry>> entries, Basis basis)
    : dim_(dim), block_dims_(std::move(block_dims)), basis_(basis) {
  if (dim_ == 0) throw DimensionMismatch("cone dimension must be positive");
  if (entries.size() != block_dims_.size()) throw DimensionMismatch("one entry list per block expected");

  entries_.resize(block_dims_.size());
  by_coeff_.resize(block_dims_.size());
  for (std::size_t i = 0; i < block_dims_.size(); ++i) {
    const std::size_t side = block_dims_[i];
    if (side == 0) throw DimensionMismatch("block sides must be positive");
    nu_ += side;

    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> merged;
    for (const auto& e : entries[i]) {
      if (e.row >= side || e.col >= side || e.coeff >= dim_)
        throw DimensionMismatch("tensor entry out of range");
      auto key = std::make_tuple(std::min(e.row, e.col), std::max(e.row, e.col), e.coeff);
      merged[key] += e.value;
    }
    by_coeff_[i].resize(dim_);
    for (const auto& [key, value] : merged) {
      if (value == 0) continue;
      auto [r, c, u] = key;
      by_coeff_[i][u].push_back(entries_[i].size());
      entries_[i].push_back(TensorEntry{r, c, u, value, nearest_double(value)});
    }
  }

  one_.assign(dim_, Rational(0));
  one_[0] = 1;
}

void ConeOperator::set_one(RVector one) {
  if (one.size() != dim_) throw DimensionMismatch("one vector has wrong length");
  one_ = std::move(one);
}

void ConeOperator::set_domain_point(RVector functional) {
  if (functional.size() != dim_) throw DimensionMismatch("domain point functional has wrong length");
  domain_point_ = std::move(functional);
}

void ConeOperator::set_interior_hint(DVector x) {
  if (x.size() != dim_) throw DimensionMismatch("interior hint has wrong length");
  interior_hint_ = std::move(x);
}

void ConeOperator::set_one_certificate(RVector x) {
  if (x.size() != dim_) throw DimensionMismatch("one certificate has wrong length");
  one_certificate_ = std::move(x);
}

void ConeOperator::set_nodal(NodalFactor factor) {
  nodal_ = std::make_shared<const NodalFactor>(std::move(factor));
}

template <typename T>
BlockSym<T> ConeOperator::apply(std::span<const T> x) const {
  if (x.size() != dim_) throw DimensionMismatch("lambda_apply: vector length does not match U");
  BlockSym<T> out;
  out.reserve(num_blocks());
  T t;
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    Matrix<T> m(block_dims_[i], block_dims_[i]);
    for (const auto& e : entries_[i]) {
      const T& xu = x[e.coeff];
      if (is_zero(xu)) continue;
      if constexpr (ScalarTraits<T>::exact) {
        t = e.value * xu;
      } else {
        t = e.approx * xu;
      }
      m(e.row, e.col) += t;
    }
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = r + 1; c < m.cols(); ++c) m(c, r) = m(r, c);
    out.push_back(std::move(m));
  }
  return out;
}

template <typename T>
Vector<T> ConeOperator::adjoint(const BlockSym<T>& s) const {
  if (s.size() != num_blocks()) throw DimensionMismatch("lambda_adjoint: block count mismatch");
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i].rows() != block_dims_[i] || s[i].cols() != block_dims_[i])
      throw DimensionMismatch("lambda_adjoint: block shape mismatch");
  Vector<T> out(dim_, T(0));
  T t;
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    for (const auto& e : entries_[i]) {
      if (e.row == e.col) {
        t = s[i](e.row, e.row);
      } else {
        t = s[i](e.row, e.col) + s[i](e.col, e.row);
      }
      if constexpr (ScalarTraits<T>::exact) {
        t *= e.value;
      } else {
        t *= e.approx;
      }
      out[e.coeff] += t;
    }
  }
  return out;
}

template BlockSym<double> ConeOperator::apply<double>(std::span<const double>) const;
template BlockSym<Rational> ConeOperator::apply<Rational>(std::span<const Rational>) const;
template Vector<double> ConeOperator::adjoint<double>(const BlockSym<double>&) const;
template Vector<Rational> ConeOperator::adjoint<Rational>(const BlockSym<Rational>&) const;

RMatrix ConeOperator::trace_gram() const {
  RMatrix m(dim_, dim_);
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    // Group the block's entries by matrix position.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<const TensorEntry*>> by_pos;
    for (const auto& e : entries_[i]) by_pos[{e.row, e.col}].push_back(&e);
    for (const auto& [pos, list] : by_pos) {
      const int mult = pos.first == pos.second ? 1 : 2;
      for (const auto* a : list)
        for (const auto* b : list) m(a->coeff, b->coeff) += mult * a->value * b->value;
    }
  }
  return m;
}

bool ConeOperator::injective() const {
  return Ldlt<Rational>(trace_gram()).positive_definite();
}

namespace {

Rational half(long n) { return Rational(n, 2); }

std::size_t absdiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

void add(std::vector<TensorEntry>& list, std::size_t r, std::size_t c, std::size_t u, const Rational& v) {
  if (r > c) return;  // upper triangle only; the constructor mirrors
  list.push_back(TensorEntry{r, c, u, v, 0.0});
}

double eval_basis(Basis basis, std::size_t u, double z) {
  if (basis == Basis::monomial) return std::pow(z, static_cast<double>(u));
  return std::cos(static_cast<double>(u) * std::acos(std::clamp(z, -1.0, 1.0)));
}

Rational eval_basis_at_zero(Basis basis, std::size_t u) {
  if (basis == Basis::monomial) return u == 0 ? 1 : 0;
  // T_u(0) = cos(u pi / 2)
  if (u % 2 == 1) return 0;
  return (u / 2) % 2 == 0 ? 1 : -1;
}

DVector chebyshev_nodes(std::size_t k) {
  DVector z(k);
  for (std::size_t j = 0; j < k; ++j)
    z[j] = std::cos((2.0 * static_cast<double>(j) + 1.0) * std::numbers::pi / (2.0 * static_cast<double>(k)));
  return z;
}

using WeightFn = double (*)(double);

void attach_interval_metadata(ConeOperator& cone, Basis basis, const std::vector<WeightFn>& weights) {
  const std::size_t u_dim = cone.dim();

  RVector at_zero(u_dim);
  for (std::size_t u = 0; u < u_dim; ++u) at_zero[u] = eval_basis_at_zero(basis, u);
  cone.set_domain_point(std::move(at_zero));

  // Discrete moment vector of a positive measure on the open interval.
  const DVector hint_nodes = chebyshev_nodes(u_dim + 1);
  DVector hint(u_dim, 0.0);
  for (double z : hint_nodes)
    for (std::size_t u = 0; u < u_dim; ++u) hint[u] += eval_basis(basis, u, z) / static_cast<double>(hint_nodes.size());
  cone.set_interior_hint(std::move(hint));

  // The monomial Vandermonde matrix is too ill-conditioned for the nodal form.
  if (basis != Basis::chebyshev) return;
  NodalFactor nf;
  nf.nodes = chebyshev_nodes(u_dim);
  Eigen::MatrixXd v(u_dim, u_dim);
  for (std::size_t k = 0; k < u_dim; ++k)
    for (std::size_t u = 0; u < u_dim; ++u) v(k, u) = eval_basis(basis, u, nf.nodes[k]);
  Eigen::MatrixXd c = v.partialPivLu().inverse();
  nf.coeff_from_nodes = DMatrix(u_dim, u_dim);
  for (std::size_t u = 0; u < u_dim; ++u)
    for (std::size_t k = 0; k < u_dim; ++k) nf.coeff_from_nodes(u, k) = c(u, k);
  for (std::size_t i = 0; i < cone.num_blocks(); ++i) {
    const std::size_t side = cone.block_dims()[i];
    DMatrix p(u_dim, side);
    DVector w(u_dim);
    for (std::size_t k = 0; k < u_dim; ++k) {
      for (std::size_t j = 0; j < side; ++j) p(k, j) = eval_basis(basis, j, nf.nodes[k]);
      w[k] = weights[i](nf.nodes[k]);
    }
    nf.basis_at_nodes.push_back(std::move(p));
    nf.weight_at_nodes.push_back(std::move(w));
  }
  cone.set_nodal(std::move(nf));
}

}  // namespace

ConeOperator build_interval_cone(std::size_t d, Basis basis) {
  if (d < 1) throw InvalidDegree("interval cone requires d >= 1");
  if (basis == Basis::custom) throw InvalidParameter("interval cone basis must be monomial or chebyshev");
  const std::size_t u_dim = 2 * d + 1;
  std::vector<std::vector<TensorEntry>> blocks(2);

  if (basis == Basis::monomial) {
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = i; j <= d; ++j) add(blocks[0], i, j, i + j, 1);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        add(blocks[1], i, j, i + j, 1);
        add(blocks[1], i, j, i + j + 2, -1);
      }
  } else {
    // 2 T_i T_j = T_{i+j} + T_{|i-j|}
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = i; j <= d; ++j) {
        add(blocks[0], i, j, i + j, half(1));
        add(blocks[0], i, j, absdiff(i, j), half(1));
      }
    // (1 - z^2) T_i T_j with 1 - z^2 = (T_0 - T_2) / 2
    const Rational eighth(1, 8);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        const std::size_t s = i + j;
        const std::size_t df = absdiff(i, j);
        add(blocks[1], i, j, s, 2 * eighth);
        add(blocks[1], i, j, df, 2 * eighth);
        add(blocks[1], i, j, s + 2, -eighth);
        add(blocks[1], i, j, absdiff(s, 2), -eighth);
        add(blocks[1], i, j, df + 2, -eighth);
        add(blocks[1], i, j, absdiff(df, 2), -eighth);
      }
  }

  ConeOperator cone(u_dim, {d + 1, d}, std::move(blocks), basis);
  cone.univariate_even_ = true;
  cone.half_degree_ = d;
  attach_interval_metadata(cone, basis, {[](double) { return 1.0; }, [](double z) { return 1.0 - z * z; }});
  if (basis == Basis::chebyshev) {
    RVector x1(u_dim, Rational(0));
    x1[0] = static_cast<long>(2 * d + 1);
    cone.set_one_certificate(std::move(x1));
  }
  return cone;
}

ConeOperator build_interval_cone_odd(std::size_t d, Basis basis) {
  if (basis == Basis::custom) throw InvalidParameter("interval cone basis must be monomial or chebyshev");
  const std::size_t u_dim = 2 * d + 2;
  std::vector<std::vector<TensorEntry>> blocks(2);

  if (basis == Basis::monomial) {
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = i; j <= d; ++j) {
        add(blocks[0], i, j, i + j, 1);
        add(blocks[0], i, j, i + j + 1, -1);
        add(blocks[1], i, j, i + j, 1);
        add(blocks[1], i, j, i + j + 1, 1);
      }
  } else {
    // (1 -+ z) T_i T_j, with z T_a = (T_{a+1} + T_{|a-1|}) / 2
    const Rational quarter(1, 4);
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = i; j <= d; ++j) {
        const std::size_t s = i + j;
        const std::size_t df = absdiff(i, j);
        for (std::size_t b = 0; b < 2; ++b) {
          const Rational sign = b == 0 ? -1 : 1;
          add(blocks[b], i, j, s, half(1));
          add(blocks[b], i, j, df, half(1));
          add(blocks[b], i, j, s + 1, sign * quarter);
          add(blocks[b], i, j, absdiff(s, 1), sign * quarter);
          add(blocks[b], i, j, df + 1, sign * quarter);
          add(blocks[b], i, j, absdiff(df, 1), sign * quarter);
        }
      }
  }

  ConeOperator cone(u_dim, {d + 1, d + 1}, std::move(blocks), basis);
  cone.half_degree_ = d;
  attach_interval_metadata(cone, basis, {[](double z) { return 1.0 - z; }, [](double z) { return 1.0 + z; }});
  return cone;
}

}  // namespace wsos
