#include "wsos/certificates.hpp"

#include <cmath>

#include "wsos/errors.hpp"

namespace wsos {

DualCertificate::DualCertificate(const ConeOperator& cone, RVector x)
    : ctx_(std::make_shared<const ExactBarrier>(cone, std::move(x))) {}

template <typename T>
bool certifies(const BarrierContext<T>& ctx, std::span<const T> s) {
  if (s.size() != ctx.cone().dim()) throw DimensionMismatch("certified vector has wrong length");
  Vector<T> w = ctx.solve(s);
  for (const auto& block : ctx.cone().template apply<T>(w)) {
    if (!Ldlt<T>(block, pd_tolerance(block)).positive_semidefinite()) return false;
  }
  return true;
}

bool certifies(const DualCertificate& x, const RVector& s) { return certifies<Rational>(x.barrier(), s); }

BlockSym<Rational> gram_matrix(const ExactBarrier& ctx, const RVector& s) {
  if (s.size() != ctx.cone().dim()) throw DimensionMismatch("target has wrong length");
  RVector w = ctx.solve(s);
  BlockSym<Rational> mid = ctx.cone().apply<Rational>(w);
  BlockSym<Rational> out;
  out.reserve(mid.size());
  for (std::size_t i = 0; i < mid.size(); ++i) {
    const auto& inv = ctx.lambda_inverse()[i];
    out.push_back(inv * mid[i] * inv);
  }
  return out;
}

GramCertificate gram_certificate(const DualCertificate& x, const RVector& s) {
  GramCertificate g{gram_matrix(x.barrier(), s), s};
  for (const auto& block : g.gram) {
    if (!Ldlt<Rational>(block).positive_semidefinite()) throw NotCertified("Gram matrix is not positive semidefinite");
  }
  return g;
}

template <typename T>
bool sufficient_cone_check(const BarrierContext<T>& ctx, std::span<const T> t) {
  if (t.size() != ctx.cone().dim()) throw DimensionMismatch("target has wrong length");
  const T pairing = dot<T>(t, ctx.x());
  if (!(pairing > 0)) return false;
  const T value = pairing * pairing - T(static_cast<long>(ctx.cone().nu() - 1)) * ctx.dual_local_norm_sq(t);
  return value >= 0;
}

namespace {

// f_s(x) = <s, x> + f(x); its minimizer is the gradient certificate of s.
double shifted_barrier(const NumericBarrier& ctx, std::span<const double> s) {
  return dot<double>(s, ctx.x()) + ctx.value();
}

}  // namespace

DVector gradient_certificate_of(const ConeOperator& cone, std::span<const double> s, std::optional<DVector> x_start,
                                const NewtonOptions& opts) {
  if (s.size() != cone.dim()) throw DimensionMismatch("target has wrong length");
  DVector x;
  if (x_start) {
    x = *x_start;
  } else if (cone.interior_hint()) {
    x = *cone.interior_hint();
  } else {
    throw InvalidStart("no starting point: the cone carries no interior hint");
  }
  auto ctx = NumericBarrier::try_build(cone, x, opts.kernel);
  if (!ctx) throw InvalidStart("starting point is not interior");

  double prev_decrement = HUGE_VAL;
  double best_decrement = HUGE_VAL;
  DVector best_x;
  int best_iter = 0;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    DVector hs = ctx->solve(s);
    DVector dir(x.size());
    for (std::size_t u = 0; u < x.size(); ++u) dir[u] = ctx->x()[u] - hs[u];
    const double decrement = ctx->local_norm(dir);
    // ||x||_x^2 = nu at every interior point; a mismatch means the iterate
    // ran off to where H(x) under- or overflows.
    const double nu = static_cast<double>(cone.nu());
    if (!(std::fabs(ctx->local_norm_sq(ctx->x()) - nu) <= 1e-6 * nu))
      throw NumericFailure("Newton iterate lost accuracy; the target may lie outside the cone interior");
    if (decrement <= opts.tol) return ctx->x();
    // Past the quadratic phase the decrement can stall at the rounding floor
    // of an ill-conditioned Hessian; stop once it no longer halves.
    if (decrement < opts.stall_tol && decrement > 0.5 * prev_decrement) return ctx->x();
    prev_decrement = decrement;
    // Badly conditioned points floor higher and the decrement wanders; hand
    // back the best iterate once it has not improved for a while.
    if (decrement < best_decrement) {
      best_decrement = decrement;
      best_x = ctx->x();
      best_iter = iter;
    } else if (best_decrement < opts.stall_floor && iter - best_iter >= opts.stall_patience) {
      return best_x;
    }

    const double f0 = shifted_barrier(*ctx, s);
    double alpha = 1.0;
    bool moved = false;
    for (int h = 0; h <= opts.max_halvings; ++h, alpha *= 0.5) {
      DVector trial(x.size());
      for (std::size_t u = 0; u < x.size(); ++u) trial[u] = ctx->x()[u] + alpha * dir[u];
      std::optional<NumericBarrier> next;
      try {
        next = NumericBarrier::try_build(cone, trial, opts.kernel);
      } catch (const NumericFailure&) {
        next.reset();
      }
      if (!next) continue;
      // Inside the quadratic convergence region the full step is always taken;
      // there the decrease in f_s is below rounding noise.
      if (decrement < 0.25 || shifted_barrier(*next, s) < f0) {
        ctx = std::move(next);
        moved = true;
        break;
      }
    }
    if (!moved) throw NumericFailure("damped Newton step could not stay in the cone");
  }
  throw MaxIterations("gradient certificate did not converge; the target may lie outside the cone interior");
}

template <typename T>
bool corollary_guard(const BarrierContext<T>& ctx, std::span<const T> y) {
  if (y.size() != ctx.cone().dim()) throw DimensionMismatch("point has wrong length");
  Vector<T> diff(y.size());
  for (std::size_t u = 0; u < y.size(); ++u) diff[u] = ctx.x()[u] - y[u];
  if constexpr (ScalarTraits<T>::exact) {
    return ctx.local_norm_sq(diff) * 4 < 1;
  } else {
    return ctx.local_norm(diff) < 0.5;
  }
}

template bool certifies<double>(const NumericBarrier&, std::span<const double>);
template bool certifies<Rational>(const ExactBarrier&, std::span<const Rational>);
template bool sufficient_cone_check<double>(const NumericBarrier&, std::span<const double>);
template bool sufficient_cone_check<Rational>(const ExactBarrier&, std::span<const Rational>);
template bool corollary_guard<double>(const NumericBarrier&, std::span<const double>);
template bool corollary_guard<Rational>(const ExactBarrier&, std::span<const Rational>);

}  // namespace wsos
