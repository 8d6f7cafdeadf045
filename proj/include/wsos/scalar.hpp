#pragma once

#include <gmpxx.h>

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsos {

/// Exact scalar: arbitrary-precision fraction, always kept in lowest terms.
using Rational = mpq_class;

template <typename T>
using Vector = std::vector<T>;

using RVector = Vector<Rational>;
using DVector = Vector<double>;

/// Double nearest to q (mpq_get_d truncates toward zero).
double nearest_double(const Rational& q);

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double to_double(double v) { return v; }
  static double from_rational(const Rational& q) { return nearest_double(q); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static double to_double(const Rational& v) { return nearest_double(v); }
  static Rational from_rational(const Rational& q) { return q; }
};

template <typename T>
inline bool is_zero(const T& v) {
  return v == 0;
}

inline Rational abs_value(const Rational& v) { return abs(v); }
inline double abs_value(double v) { return std::fabs(v); }

// Exact binary expansion of a finite double. Denominators are powers of two.
Rational float_to_rational(double v);
RVector float_to_rational(std::span<const double> v);

DVector to_double(std::span<const Rational> v);

/// Parses "p/q", "p", or a plain decimal literal such as "-0.125".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Rational nearest to v*n / n, with ties rounded away from zero.
Rational round_to_denominator(const Rational& v, const mpz_class& n);

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  T acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace wsos
