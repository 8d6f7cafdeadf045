#pragma once

#include "wsos/certificates.hpp"

namespace wsos {

/// Largest gamma with t - gamma 1 certified by x, to within `tol`.
/// Binary search between a certified c_lo and an uncertified upper end; the
/// returned value is always certified exactly. Throws InvalidStart when c_lo
/// is not certified.
Rational best_bound_exact(const DualCertificate& x, const RVector& t, const Rational& c_lo, double tol = 1e-10);

/// Closed-form bound from q(gamma) = (t - gamma 1)^T (x x^T - (nu-1) H(x)^{-1}) (t - gamma 1).
struct QuadraticBound {
  // q(gamma) = a gamma^2 + b gamma + c
  Rational a, b, c;
  // Root of q in floating point.
  double value = 0.0;
  // Largest rational at or below the root found to satisfy q >= 0 and
  // <t - gamma 1, x> > 0 exactly; t - certified 1 is certified by x.
  Rational certified;
};

/// Throws NoCertifiableBound when no gamma below <t,x>/<1,x> satisfies q >= 0.
QuadraticBound best_bound_quadratic(const DualCertificate& x, const RVector& t);

}  // namespace wsos
