#include "wsos/barrier.hpp"

#include <cmath>

#include "wsos/errors.hpp"
#include "wsos/kernels.hpp"

namespace wsos {

template <typename T>
BarrierContext<T>::BarrierContext(const ConeOperator& cone, Vector<T> x, HessianKernel kernel, bool& ok)
    : cone_(&cone), x_(std::move(x)) {
  ok = false;
  if (x_.size() != cone.dim()) throw DimensionMismatch("barrier point has wrong length");
  lambda_ = cone.apply<T>(x_);
  lambda_factors_.reserve(lambda_.size());
  for (const auto& block : lambda_) {
    lambda_factors_.emplace_back(block, pd_tolerance(block));
    if (!lambda_factors_.back().positive_definite()) return;
  }
  lambda_inv_.reserve(lambda_.size());
  for (const auto& f : lambda_factors_) lambda_inv_.push_back(f.inverse());

  gradient_ = kernels::serial::gradient<T>(cone, lambda_inv_);

  if constexpr (ScalarTraits<T>::exact) {
    hessian_ = kernels::serial::hessian<T>(cone, lambda_inv_);
  } else {
    switch (kernel) {
      case HessianKernel::reference: hessian_ = kernels::serial::hessian<T>(cone, lambda_inv_); break;
      case HessianKernel::tensor: hessian_ = kernels::parallel::hessian_tensor(cone, lambda_inv_); break;
      case HessianKernel::nodal: hessian_ = kernels::parallel::hessian_nodal(cone, lambda_inv_); break;
      case HessianKernel::automatic: hessian_ = kernels::parallel::hessian(cone, lambda_inv_); break;
    }
  }
  hessian_factor_.emplace(hessian_, pd_tolerance(hessian_));
  if (!hessian_factor_->positive_definite()) {
    throw NumericFailure("barrier Hessian is not positive definite (is Lambda injective?)");
  }
  ok = true;
}

template <typename T>
BarrierContext<T>::BarrierContext(const ConeOperator& cone, Vector<T> x, HessianKernel kernel)
    : cone_(&cone) {
  bool ok = false;
  *this = BarrierContext(cone, std::move(x), kernel, ok);
  if (!ok) throw NotInterior("Lambda(x) is not positive definite");
}

template <typename T>
std::optional<BarrierContext<T>> BarrierContext<T>::try_build(const ConeOperator& cone, Vector<T> x,
                                                               HessianKernel kernel) {
  bool ok = false;
  BarrierContext ctx(cone, std::move(x), kernel, ok);
  if (!ok) return std::nullopt;
  return ctx;
}

template <typename T>
double BarrierContext<T>::value() const {
  double acc = 0.0;
  for (const auto& f : lambda_factors_) acc -= f.log_det();
  return acc;
}

template <typename T>
T BarrierContext<T>::lambda_determinant() const {
  T acc = 1;
  for (const auto& f : lambda_factors_)
    for (const auto& p : f.d()) acc *= p;
  return acc;
}

template <typename T>
T BarrierContext<T>::local_norm_sq(std::span<const T> v) const {
  return quadratic_form(hessian_, v);
}

template <typename T>
T BarrierContext<T>::dual_local_norm_sq(std::span<const T> s) const {
  Vector<T> w = solve(s);
  return dot<T>(s, w);
}

template <typename T>
double BarrierContext<T>::local_norm(std::span<const T> v) const {
  return std::sqrt(std::max(0.0, ScalarTraits<T>::to_double(local_norm_sq(v))));
}

template <typename T>
double BarrierContext<T>::dual_local_norm(std::span<const T> s) const {
  return std::sqrt(std::max(0.0, ScalarTraits<T>::to_double(dual_local_norm_sq(s))));
}

template class BarrierContext<double>;
template class BarrierContext<Rational>;

}  // namespace wsos
