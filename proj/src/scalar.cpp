#include "wsos/scalar.hpp"

#include <stdexcept>

namespace wsos {

Rational float_to_rational(double v) {
  if (!std::isfinite(v)) throw std::domain_error("cannot lift a non-finite value");
  // mpq_set_d is exact for finite doubles.
  Rational q(v);
  q.canonicalize();
  return q;
}

RVector float_to_rational(std::span<const double> v) {
  RVector out;
  out.reserve(v.size());
  for (double e : v) out.push_back(float_to_rational(e));
  return out;
}

double nearest_double(const Rational& q) {
  const double d = q.get_d();
  if (q == 0 || !std::isfinite(d)) return d;
  const double away = std::nextafter(d, q > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(away)) return d;
  const Rational lo_err = abs(q - float_to_rational(d));
  const Rational hi_err = abs(float_to_rational(away) - q);
  return hi_err < lo_err ? away : d;
}

DVector to_double(std::span<const Rational> v) {
  DVector out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(nearest_double(e));
  return out;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("empty rational literal");
  s = s.substr(first, last - first + 1);

  auto dot_pos = s.find('.');
  if (dot_pos != std::string::npos || s.find_first_of("eE") != std::string::npos) {
    // Decimal literal, parsed exactly (no binary rounding).
    if (s.find('/') != std::string::npos) throw std::invalid_argument("bad rational literal: " + s);
    std::string mant = s;
    long exp10 = 0;
    auto e_pos = mant.find_first_of("eE");
    if (e_pos != std::string::npos) {
      exp10 = std::stol(mant.substr(e_pos + 1));
      mant = mant.substr(0, e_pos);
    }
    dot_pos = mant.find('.');
    if (dot_pos != std::string::npos) {
      exp10 -= static_cast<long>(mant.size() - dot_pos - 1);
      mant.erase(dot_pos, 1);
    }
    mpz_class num;
    if (num.set_str(mant, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational q = exp10 < 0 ? Rational(num, scale) : Rational(num * scale);
    q.canonicalize();
    return q;
  }

  Rational q;
  if (s.front() == '+') s.erase(0, 1);
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + std::string(text));
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational round_to_denominator(const Rational& v, const mpz_class& n) {
  // floor(v*n + 1/2) for v >= 0, mirrored for v < 0.
  Rational scaled = v * n;
  mpz_class two_num = 2 * scaled.get_num();
  mpz_class den2 = 2 * scaled.get_den();
  mpz_class k;
  if (scaled >= 0) {
    mpz_fdiv_q(k.get_mpz_t(), mpz_class(two_num + scaled.get_den()).get_mpz_t(), den2.get_mpz_t());
  } else {
    mpz_class pos = -two_num + scaled.get_den();
    mpz_fdiv_q(k.get_mpz_t(), pos.get_mpz_t(), den2.get_mpz_t());
    k = -k;
  }
  Rational out(k, n);
  out.canonicalize();
  return out;
}

}  // namespace wsos
