#pragma once

#include <memory>
#include <optional>

#include "wsos/barrier.hpp"

namespace wsos {

/// A rational interior point of the dual cone. Lambda(x) > 0 is checked
/// exactly on construction, and the exact barrier data is kept for reuse.
class DualCertificate {
 public:
  DualCertificate(const ConeOperator& cone, RVector x);

  const ConeOperator& cone() const { return ctx_->cone(); }
  const RVector& x() const { return ctx_->x(); }
  const ExactBarrier& barrier() const { return *ctx_; }

 private:
  std::shared_ptr<const ExactBarrier> ctx_;
};

struct GramCertificate {
  BlockSym<Rational> gram;
  RVector target;
};

/// Lambda(H(x)^{-1} s) >= 0. Exact for rational contexts; in floating mode the
/// blocks are tested with the numeric pivot tolerance.
template <typename T>
bool certifies(const BarrierContext<T>& ctx, std::span<const T> s);

bool certifies(const DualCertificate& x, const RVector& s);

/// S = Lambda(x)^{-1} Lambda(H(x)^{-1} s) Lambda(x)^{-1}. Lambda^*(S) = s holds
/// for every interior x. Throws NotCertified unless S >= 0.
GramCertificate gram_certificate(const DualCertificate& x, const RVector& s);

/// The Gram matrix without the PSD requirement.
BlockSym<Rational> gram_matrix(const ExactBarrier& ctx, const RVector& s);

/// <t, x>^2 - (nu - 1) t^T H(x)^{-1} t >= 0 and <t, x> > 0. A true result
/// implies that x certifies t.
template <typename T>
bool sufficient_cone_check(const BarrierContext<T>& ctx, std::span<const T> t);

struct NewtonOptions {
  double tol = 1e-12;
  // Below this decrement, a step that fails to halve it ends the iteration.
  double stall_tol = 1e-8;
  // Return the best iterate once it is below stall_floor and has not
  // improved for stall_patience steps.
  double stall_floor = 1e-5;
  int stall_patience = 20;
  int max_iters = 200;
  int max_halvings = 60;
  HessianKernel kernel = HessianKernel::automatic;
};

/// Gradient certificate of s: the x with -g(x) = s, by damped Newton steps
/// x + alpha (x - H(x)^{-1} s). Stops once ||x - H(x)^{-1}s||_x <= tol, which
/// equals ||-g(x) - s||_x^*, or once it stalls (see NewtonOptions). Throws MaxIterations when it does not converge.
DVector gradient_certificate_of(const ConeOperator& cone, std::span<const double> s,
                                std::optional<DVector> x_start = std::nullopt, const NewtonOptions& opts = {});

/// ||x - y||_x < 1/2, evaluated at the context point x.
template <typename T>
bool corollary_guard(const BarrierContext<T>& ctx, std::span<const T> y);

}  // namespace wsos
