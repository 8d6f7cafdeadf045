#pragma once

#include <string>

#include "wsos/cone.hpp"

namespace wsos {

enum class Provenance { closed_form, gershgorin, eigenvalue, user };

std::string to_string(Provenance p);

/// One-sided bounds on the constants behind the linear rate of the bound
/// iteration. k1, k2 and C are lower bounds, k3 is an upper bound. Values that
/// involve square roots are stored as rationals rounded in the safe direction.
struct ConvergenceConstants {
  Rational rho_r;
  Rational k1, k2, k3;
  std::size_t nu = 0;
  Rational one_norm;
  Rational c_lower;
  Provenance k1_from = Provenance::user;
  Provenance k2_from = Provenance::user;
  Provenance k3_from = Provenance::user;
};

/// rho_r = r (1 - 3r - 2r^2) / (1 - r - 2r^2), for 0 < r <= 1/4.
Rational rho(const Rational& r);
double rho(double r);

/// The (2d+1) x (2d+1) matrix whose quadratic form lower-bounds trace(Lambda_1(w)^2)
/// for the Chebyshev interval cone.
RMatrix chebyshev_trace_bound_matrix(std::size_t d);

/// Smallest eigenvalue of chebyshev_trace_bound_matrix(d), numerically.
double chebyshev_trace_bound_min_eigenvalue(std::size_t d);

/// Closed-form constants of the Chebyshev even interval cone of half-degree d,
/// paired with rho(r).
ConvergenceConstants univariate_constants(std::size_t d, const Rational& r = Rational(1, 4));

/// Exact double value sqrt(3 - sqrt 5) / (2 (d+1) (2d+1)).
double univariate_C(std::size_t d);

/// Smallest singular value of Lambda with the trace inner product on its
/// range, scaled down by 1 - 1e-8.
double k2_general(const ConeOperator& cone);

/// Largest absolute row sum over all blocks and all coefficients; bounds
/// lambda_max(Lambda(y)) for ||y||_inf = 1.
Rational k3_gershgorin(const ConeOperator& cone);

/// k1 k2 / (k3 nu ||1||) from user-supplied k1 and computed k2, k3.
ConvergenceConstants general_constants(const ConeOperator& cone, const Rational& k1, const Rational& r = Rational(1, 4));

/// Rational lower (or upper) approximation of a nonnegative double with
/// denominator 2^40.
Rational rational_below(double v);
Rational rational_above(double v);

}  // namespace wsos
