#include "wsos/bounds.hpp"

#include <cmath>

#include "wsos/errors.hpp"

namespace wsos {

namespace {

// Lambda(H^{-1}(t - gamma 1)) = Lambda(a) - gamma Lambda(b), tested exactly.
class Pencil {
 public:
  Pencil(const DualCertificate& x, const RVector& t) {
    const auto& ctx = x.barrier();
    base_ = x.cone().apply<Rational>(ctx.solve(t));
    shift_ = x.cone().apply<Rational>(ctx.solve(x.cone().one()));
  }

  bool certified(const Rational& gamma) const {
    for (std::size_t i = 0; i < base_.size(); ++i) {
      RMatrix m = shift_[i];
      m *= -gamma;
      m += base_[i];
      if (!Ldlt<Rational>(m).positive_semidefinite()) return false;
    }
    return true;
  }

 private:
  BlockSym<Rational> base_, shift_;
};

}  // namespace

Rational best_bound_exact(const DualCertificate& x, const RVector& t, const Rational& c_lo, double tol) {
  const ConeOperator& cone = x.cone();
  if (t.size() != cone.dim()) throw DimensionMismatch("target has wrong length");
  if (!(tol > 0)) throw InvalidParameter("tolerance must be positive");
  Pencil pencil(x, t);
  if (!pencil.certified(c_lo)) throw InvalidStart("t - c_lo 1 is not certified by x");

  Rational lo = c_lo, hi;
  if (cone.domain_point() && dot<Rational>(*cone.domain_point(), cone.one()) == 1) {
    // Any valid bound is at most the value of t at a domain point.
    hi = dot<Rational>(*cone.domain_point(), t);
    if (pencil.certified(hi)) return hi;
  } else {
    Rational step = std::max(Rational(1), Rational(abs(c_lo)));
    hi = c_lo + step;
    int doublings = 0;
    while (pencil.certified(hi)) {
      lo = hi;
      step *= 2;
      hi = c_lo + step;
      if (++doublings > 200) throw NumericFailure("no uncertified upper end found");
    }
  }

  const Rational eps = float_to_rational(tol);
  while (hi - lo > eps) {
    Rational mid = (lo + hi) / 2;
    if (pencil.certified(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

QuadraticBound best_bound_quadratic(const DualCertificate& x, const RVector& t) {
  const ConeOperator& cone = x.cone();
  const auto& ctx = x.barrier();
  if (t.size() != cone.dim()) throw DimensionMismatch("target has wrong length");
  const RVector& one = cone.one();
  const Rational nu1 = static_cast<long>(cone.nu() - 1);

  const RVector ht = ctx.solve(t);
  const RVector h1 = ctx.solve(one);
  const Rational px = dot<Rational>(one, x.x());
  const Rational tx = dot<Rational>(t, x.x());
  const Rational h11 = dot<Rational>(one, h1);
  const Rational h1t = dot<Rational>(one, ht);
  const Rational htt = dot<Rational>(t, ht);

  QuadraticBound out;
  out.a = px * px - nu1 * h11;
  out.b = 2 * nu1 * h1t - 2 * tx * px;
  out.c = tx * tx - nu1 * htt;
  const Rational pairing_limit = tx / px;

  auto q = [&](const Rational& g) -> Rational { return (out.a * g + out.b) * g + out.c; };

  std::vector<double> roots;
  if (out.a == 0) {
    if (out.b != 0) roots.push_back(Rational(-out.c / out.b).get_d());
  } else {
    const Rational disc = out.b * out.b - 4 * out.a * out.c;
    if (disc < 0) throw NoCertifiableBound("the quadratic has no real root");
    const double a = out.a.get_d(), b = out.b.get_d(), c = out.c.get_d();
    const double sq = std::sqrt(disc.get_d());
    const double qq = -0.5 * (b + std::copysign(sq, b));
    roots.push_back(qq / a);
    if (qq != 0) roots.push_back(c / qq);
  }

  const double limit = pairing_limit.get_d();
  bool found = false;
  for (double r : roots) {
    if (r <= limit && (!found || r > out.value)) {
      out.value = r;
      found = true;
    }
  }
  if (!found) throw NoCertifiableBound("no root of the quadratic lies on the admissible branch");

  Rational g = float_to_rational(out.value);
  Rational step = float_to_rational(std::ldexp(std::max(1.0, std::fabs(out.value)), -52));
  for (int k = 0; k < 200; ++k) {
    if (g < pairing_limit && q(g) >= 0) {
      out.certified = g;
      return out;
    }
    g -= step;
    step *= 2;
  }
  throw NoCertifiableBound("could not place a rational point on the admissible branch");
}

}  // namespace wsos
