#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wsos/matrix.hpp"

namespace wsos {

enum class Basis { monomial, chebyshev, custom };

std::string to_string(Basis b);
Basis parse_basis(const std::string& name);

/// One structural coefficient of the operator: the entry (row, col) of block
/// i picks up value * x[coeff]. Only row <= col is stored; the mirrored entry
/// is implied.
struct TensorEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t coeff = 0;
  Rational value;
  double approx = 0.0;
};

/// Block-diagonal symmetric matrix S_1 (+) ... (+) S_m.
template <typename T>
using BlockSym = std::vector<Matrix<T>>;

/// Rank-one nodal form of the operator used by the fast Hessian kernel:
///   Lambda_i(e_u) = sum_k coeff_from_nodes(u, k) * weight_i(z_k) * p_i(z_k) p_i(z_k)^T
/// where p_i(z_k) is row k of basis_at_nodes[i]. Only available for the
/// built-in interval cones; floating point only.
struct NodalFactor {
  DVector nodes;
  DMatrix coeff_from_nodes;              // U x U
  std::vector<DMatrix> basis_at_nodes;   // per block, U x L_i
  std::vector<DVector> weight_at_nodes;  // per block, length U
};

/// The linear map Lambda : R^U -> S^{L_1} (+) ... (+) S^{L_m} describing a
/// weighted sum-of-squares cone, together with its adjoint.
///
/// Immutable after construction.
class ConeOperator {
 public:
  /// `entries[i]` lists the structural coefficients of block i. Entries with
  /// row > col are mirrored; duplicates are summed; zeros are dropped.
  ConeOperator(std::size_t dim, std::vector<std::size_t> block_dims,
               std::vector<std::vector<TensorEntry>> entries, Basis basis);

  std::size_t dim() const { return dim_; }
  std::size_t num_blocks() const { return block_dims_.size(); }
  const std::vector<std::size_t>& block_dims() const { return block_dims_; }
  std::size_t nu() const { return nu_; }
  Basis basis() const { return basis_; }

  const std::vector<TensorEntry>& entries(std::size_t block) const { return entries_[block]; }
  /// Entry indices of block `block` whose coefficient index is u.
  const std::vector<std::size_t>& entries_for_coeff(std::size_t block, std::size_t u) const {
    return by_coeff_[block][u];
  }

  /// Coefficient vector of the constant-one polynomial.
  const RVector& one() const { return one_; }
  void set_one(RVector one);

  /// Linear functional evaluating a polynomial at a point of the domain, if known.
  const std::optional<RVector>& domain_point() const { return domain_point_; }
  void set_domain_point(RVector functional);

  /// A point with Lambda(x) > 0, used to start Newton iterations.
  const std::optional<DVector>& interior_hint() const { return interior_hint_; }
  void set_interior_hint(DVector x);

  /// Closed-form gradient certificate of the one polynomial, if known.
  const std::optional<RVector>& one_certificate() const { return one_certificate_; }
  void set_one_certificate(RVector x);

  const NodalFactor* nodal() const { return nodal_.get(); }
  void set_nodal(NodalFactor factor);

  /// Even interval cone: closed-form constants are available.
  bool univariate_even() const { return univariate_even_; }
  std::size_t half_degree() const { return half_degree_; }

  template <typename T>
  BlockSym<T> apply(std::span<const T> x) const;

  template <typename T>
  Vector<T> adjoint(const BlockSym<T>& s) const;

  /// Gram matrix M with w^T M w = sum_i trace(Lambda_i(w)^2).
  RMatrix trace_gram() const;

  /// Lambda(w) = 0 only for w = 0; decided exactly.
  bool injective() const;

 private:
  friend ConeOperator build_interval_cone(std::size_t d, Basis basis);
  friend ConeOperator build_interval_cone_odd(std::size_t d, Basis basis);

  std::size_t dim_;
  std::vector<std::size_t> block_dims_;
  std::size_t nu_ = 0;
  Basis basis_;
  std::vector<std::vector<TensorEntry>> entries_;
  std::vector<std::vector<std::vector<std::size_t>>> by_coeff_;
  RVector one_;
  std::optional<RVector> domain_point_;
  std::optional<DVector> interior_hint_;
  std::optional<RVector> one_certificate_;
  std::shared_ptr<const NodalFactor> nodal_;
  bool univariate_even_ = false;
  std::size_t half_degree_ = 0;
};

extern template BlockSym<double> ConeOperator::apply<double>(std::span<const double>) const;
extern template BlockSym<Rational> ConeOperator::apply<Rational>(std::span<const Rational>) const;
extern template Vector<double> ConeOperator::adjoint<double>(const BlockSym<double>&) const;
extern template Vector<Rational> ConeOperator::adjoint<Rational>(const BlockSym<Rational>&) const;

/// Polynomials of degree 2d nonnegative on [-1, 1]: weights (1, 1 - z^2),
/// degrees (d, d - 1). U = 2d + 1, blocks (d + 1, d).
ConeOperator build_interval_cone(std::size_t d, Basis basis);

/// Polynomials of degree 2d + 1 nonnegative on [-1, 1]: weights (1 - z, 1 + z),
/// degrees (d, d). U = 2d + 2, blocks (d + 1, d + 1).
ConeOperator build_interval_cone_odd(std::size_t d, Basis basis);

/// <A, B> = sum_i trace(A_i B_i)
template <typename T>
T block_inner(const BlockSym<T>& a, const BlockSym<T>& b) {
  T acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t r = 0; r < a[i].rows(); ++r)
      for (std::size_t c = 0; c < a[i].cols(); ++c) acc += a[i](r, c) * b[i](c, r);
  return acc;
}

}  // namespace wsos
