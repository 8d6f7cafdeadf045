#pragma once

#include <optional>

#include "wsos/cone.hpp"
#include "wsos/ldlt.hpp"

namespace wsos {

enum class HessianKernel {
  automatic,  // serial reference in exact mode, parallel (nodal if available) in floating mode
  reference,
  tensor,
  nodal,
};

/// Everything the log-det barrier f(x) = -ln det Lambda(x) knows at one
/// interior point: the factored blocks of Lambda(x), their inverses, the
/// gradient, and the factored Hessian.
///
/// In exact mode (T = Rational) every quantity is computed without rounding
/// and positive definiteness is decided, not estimated. Immutable once built.
template <typename T>
class BarrierContext {
 public:
  /// Throws NotInterior if Lambda(x) is not positive definite.
  BarrierContext(const ConeOperator& cone, Vector<T> x, HessianKernel kernel = HessianKernel::automatic);

  /// Returns nullopt instead of throwing when x is outside the domain.
  static std::optional<BarrierContext> try_build(const ConeOperator& cone, Vector<T> x,
                                                 HessianKernel kernel = HessianKernel::automatic);

  const ConeOperator& cone() const { return *cone_; }
  const Vector<T>& x() const { return x_; }
  const BlockSym<T>& lambda() const { return lambda_; }
  const BlockSym<T>& lambda_inverse() const { return lambda_inv_; }
  const std::vector<Ldlt<T>>& lambda_factors() const { return lambda_factors_; }

  /// f(x) = -sum_i ln det Lambda_i(x)
  double value() const;
  /// prod_i det Lambda_i(x), exact in rational mode.
  T lambda_determinant() const;

  const Vector<T>& gradient() const { return gradient_; }
  const Matrix<T>& hessian() const { return hessian_; }
  const Ldlt<T>& hessian_factor() const { return *hessian_factor_; }

  /// H(x)^{-1} s
  Vector<T> solve(std::span<const T> s) const { return hessian_factor_->solve(s); }
  Matrix<T> hessian_inverse() const { return hessian_factor_->inverse(); }

  /// v^T H(x) v
  T local_norm_sq(std::span<const T> v) const;
  /// s^T H(x)^{-1} s
  T dual_local_norm_sq(std::span<const T> s) const;

  double local_norm(std::span<const T> v) const;
  double dual_local_norm(std::span<const T> s) const;

 private:
  BarrierContext(const ConeOperator& cone, Vector<T> x, HessianKernel kernel, bool& ok);

  const ConeOperator* cone_;
  Vector<T> x_;
  BlockSym<T> lambda_;
  std::vector<Ldlt<T>> lambda_factors_;
  BlockSym<T> lambda_inv_;
  Vector<T> gradient_;
  Matrix<T> hessian_;
  std::optional<Ldlt<T>> hessian_factor_;
};

extern template class BarrierContext<double>;
extern template class BarrierContext<Rational>;

using ExactBarrier = BarrierContext<Rational>;
using NumericBarrier = BarrierContext<double>;

/// Pivot tolerance used for Lambda blocks and Hessians in the given mode.
template <typename T>
T pd_tolerance(const Matrix<T>& m) {
  if constexpr (ScalarTraits<T>::exact) {
    return T(0);
  } else {
    return numeric_pivot_tolerance(m);
  }
}

}  // namespace wsos
