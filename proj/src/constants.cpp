#include "wsos/constants.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "wsos/errors.hpp"

namespace wsos {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed-form";
    case Provenance::gershgorin: return "gershgorin";
    case Provenance::eigenvalue: return "eigenvalue";
    case Provenance::user: return "user";
  }
  return "user";
}

Rational rho(const Rational& r) {
  if (r <= 0 || r > Rational(1, 4)) throw InvalidParameter("r must lie in (0, 1/4]");
  const Rational r2 = r * r;
  Rational out = r * (1 - 3 * r - 2 * r2) / (1 - r - 2 * r2);
  out.canonicalize();
  return out;
}

double rho(double r) { return nearest_double(rho(float_to_rational(r))); }

RMatrix chebyshev_trace_bound_matrix(std::size_t d) {
  if (d < 1) throw InvalidDegree("half-degree must be at least 1");
  const std::size_t n = 2 * d + 1;
  RMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < d) m(i, i) = Rational(5, 4);
    else if (i == d) m(i, i) = 2;
    else m(i, i) = Rational(1, 4);
    const std::size_t j = 2 * d - i;
    if (j != i) m(i, j) = Rational(1, 4);
  }
  return m;
}

namespace {

Eigen::MatrixXd dense(const RMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

double min_eigenvalue(const RMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

const mpz_class& scale() {
  static const mpz_class s = mpz_class(1) << 40;
  return s;
}

}  // namespace

double chebyshev_trace_bound_min_eigenvalue(std::size_t d) { return min_eigenvalue(chebyshev_trace_bound_matrix(d)); }

Rational rational_below(double v) {
  mpz_class n;
  mpz_set_d(n.get_mpz_t(), std::floor(std::ldexp(v, 40)));
  Rational out(n, scale());
  out.canonicalize();
  return out;
}

Rational rational_above(double v) {
  mpz_class n;
  mpz_set_d(n.get_mpz_t(), std::ceil(std::ldexp(v, 40)));
  Rational out(n, scale());
  out.canonicalize();
  return out;
}

double univariate_C(std::size_t d) {
  if (d < 1) throw InvalidDegree("half-degree must be at least 1");
  const double dd = static_cast<double>(d);
  return std::sqrt(3.0 - std::sqrt(5.0)) / (2.0 * (dd + 1.0) * (2.0 * dd + 1.0));
}

ConvergenceConstants univariate_constants(std::size_t d, const Rational& r) {
  if (d < 1) throw InvalidDegree("half-degree must be at least 1");
  ConvergenceConstants out;
  out.rho_r = rho(r);
  out.k1 = 1;
  // Pad the rounding: k2 and C must stay lower bounds.
  out.k2 = rational_below(0.5 * std::sqrt(3.0 - std::sqrt(5.0)) * (1.0 - 1e-12));
  out.k3 = static_cast<long>(d + 1);
  out.nu = 2 * d + 1;
  out.one_norm = 1;
  out.c_lower = out.k1 * out.k2 / (out.k3 * static_cast<long>(out.nu) * out.one_norm);
  out.c_lower.canonicalize();
  out.k1_from = Provenance::closed_form;
  out.k2_from = Provenance::closed_form;
  out.k3_from = Provenance::closed_form;
  return out;
}

double k2_general(const ConeOperator& cone) {
  const double lmin = min_eigenvalue(cone.trace_gram());
  return std::sqrt(std::max(0.0, lmin)) * (1.0 - 1e-8);
}

Rational k3_gershgorin(const ConeOperator& cone) {
  Rational best = 0;
  for (std::size_t i = 0; i < cone.num_blocks(); ++i) {
    std::vector<Rational> rows(cone.block_dims()[i], Rational(0));
    for (const auto& e : cone.entries(i)) {
      const Rational a = abs(e.value);
      rows[e.row] += a;
      if (e.row != e.col) rows[e.col] += a;
    }
    for (const auto& s : rows)
      if (s > best) best = s;
  }
  return best;
}

ConvergenceConstants general_constants(const ConeOperator& cone, const Rational& k1, const Rational& r) {
  if (k1 <= 0) throw InvalidParameter("k1 must be positive");
  ConvergenceConstants out;
  out.rho_r = rho(r);
  out.k1 = k1;
  out.k2 = rational_below(k2_general(cone));
  out.k3 = k3_gershgorin(cone);
  out.nu = cone.nu();
  double sq = 0;
  for (const auto& v : cone.one()) sq += v.get_d() * v.get_d();
  out.one_norm = rational_above(std::sqrt(sq) * (1.0 + 1e-12));
  if (out.k2 <= 0 || out.k3 <= 0) throw NumericFailure("degenerate operator: k2 or k3 vanishes");
  out.c_lower = out.k1 * out.k2 / (out.k3 * static_cast<long>(out.nu) * out.one_norm);
  out.c_lower.canonicalize();
  out.k1_from = Provenance::user;
  out.k2_from = Provenance::eigenvalue;
  out.k3_from = Provenance::gershgorin;
  return out;
}

}  // namespace wsos
