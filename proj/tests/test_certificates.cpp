#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "wsos/certificates.hpp"
#include "wsos/errors.hpp"

using namespace wsos;
using namespace wsos::testing;

namespace {

const RVector kExampleX = rv({"5", "0", "5/2", "0", "15/8"});
const RVector kExampleT = rv({"1", "-1", "1", "1", "-1"});

RVector negated(RVector v) {
  for (auto& e : v) e = -e;
  return v;
}

RVector axpy(const RVector& x, const Rational& a, const RVector& y) {
  RVector out(x);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * y[i];
  return out;
}

}  // namespace

TEST_CASE("the worked certificate certifies t") {
  auto cone = build_interval_cone(2, Basis::monomial);
  DualCertificate x(cone, kExampleX);
  CHECK(certifies(x, kExampleT));

  auto blocks = cone.apply<Rational>(x.barrier().solve(kExampleT));
  blocks[0] *= Rational(128, 5);
  blocks[1] *= Rational(128, 5);
  CHECK(blocks[0] == rmat(3, 3, {144, -20, 72, -20, 72, -5, 72, -5, 49}));
  CHECK(blocks[1] == rmat(2, 2, {72, -15, -15, 23}));

  CHECK_FALSE(certifies(x, rv({"-1", "0", "0", "0", "0"})));
  CHECK_THROWS_AS(certifies(x, rv({"1"})), DimensionMismatch);
}

TEST_CASE("gram certificate of the worked example") {
  auto cone = build_interval_cone(2, Basis::monomial);
  DualCertificate x(cone, kExampleX);
  GramCertificate g = gram_certificate(x, kExampleT);
  CHECK(g.gram[0] == rmat(3, 3, {22, -5, -26, -5, 18, 5, -26, 5, 52}, Rational(1, 40)));
  CHECK(g.gram[1] == rmat(2, 2, {18, -15, -15, 92}, Rational(1, 40)));
  CHECK(cone.adjoint(g.gram) == kExampleT);
  CHECK_THROWS_AS(gram_certificate(x, rv({"-1", "0", "0", "0", "0"})), NotCertified);
}

TEST_CASE("the gradient is certified by its own point, with Gram matrix Lambda(x)^{-1}") {
  std::mt19937 rng(201);
  for (Basis b : {Basis::monomial, Basis::chebyshev}) {
    auto cone = build_interval_cone(3, b);
    RVector xv = random_interior(cone, rng);
    DualCertificate x(cone, xv);
    RVector s = negated(x.barrier().gradient());
    CHECK(x.barrier().solve(s) == xv);
    CHECK(certifies(x, s));
    CHECK(gram_certificate(x, s).gram == x.barrier().lambda_inverse());
  }
}

TEST_CASE("property: Lambda^*(S(x, s)) = s for 50 random rational pairs") {
  std::mt19937 rng(203);
  int checked = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t d = 1 + k % 4;
    auto cone = k % 2 ? build_interval_cone(d, Basis::chebyshev) : build_interval_cone_odd(d, Basis::monomial);
    ExactBarrier ctx(cone, random_interior(cone, rng));
    RVector s = random_rational_vector(cone.dim(), rng);
    CHECK(cone.adjoint(gram_matrix(ctx, s)) == s);
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("property: certification is invariant under positive scaling of x") {
  std::mt19937 rng(205);
  auto cone = build_interval_cone(2, Basis::chebyshev);
  for (int k = 0; k < 20; ++k) {
    RVector xv = random_interior(cone, rng);
    RVector s = random_rational_vector(cone.dim(), rng);
    const bool base = certifies(DualCertificate(cone, xv), s);
    for (Rational a : {Rational(1, 2), Rational(3)}) {
      RVector scaled(xv);
      for (auto& v : scaled) v *= a;
      CHECK(certifies(DualCertificate(cone, scaled), s) == base);
    }
  }
}

TEST_CASE("sufficient cone check") {
  auto cone = build_interval_cone(2, Basis::monomial);
  ExactBarrier ctx(cone, kExampleX);
  // (t^T x)^2 - 4 t^T H^{-1} t = 205/64 at gamma = 0
  const Rational pairing = dot<Rational>(kExampleT, kExampleX);
  CHECK(pairing * pairing - 4 * ctx.dual_local_norm_sq(kExampleT) == Rational(205, 64));
  CHECK(sufficient_cone_check<Rational>(ctx, kExampleT));

  RVector minus_g = negated(ctx.gradient());
  CHECK(sufficient_cone_check<Rational>(ctx, minus_g));

  RVector shifted = axpy(kExampleT, Rational(-1, 2), cone.one());
  CHECK_FALSE(sufficient_cone_check<Rational>(ctx, shifted));
  // Negative pairing: the displayed inequality alone would accept -t.
  CHECK_FALSE(sufficient_cone_check<Rational>(ctx, negated(minus_g)));
}

TEST_CASE("property: sufficient cone check implies certification") {
  std::mt19937 rng(207);
  int accepted = 0;
  for (int k = 0; k < 120; ++k) {
    const std::size_t d = 1 + k % 3;
    auto cone = build_interval_cone(d, k % 2 ? Basis::chebyshev : Basis::monomial);
    ExactBarrier ctx(cone, random_interior(cone, rng));
    // Perturb the gradient so roughly half the samples pass the check.
    RVector t = negated(ctx.gradient());
    RVector noise = random_rational_vector(cone.dim(), rng);
    t = axpy(t, Rational(1, 2 + k % 5), noise);
    if (sufficient_cone_check<Rational>(ctx, t)) {
      ++accepted;
      CHECK(certifies<Rational>(ctx, t));
    }
  }
  CHECK(accepted > 10);
}

TEST_CASE("gradient certificates by damped Newton") {
  auto mono = build_interval_cone(2, Basis::monomial);
  DVector x = gradient_certificate_of(mono, DVector{1, 0, 0, 0, 0});
  const DVector expected{5, 0, 2.5, 0, 1.875};
  for (std::size_t u = 0; u < x.size(); ++u) CHECK(x[u] == doctest::Approx(expected[u]).scale(1.0).epsilon(1e-10));

  DVector x2 = gradient_certificate_of(mono, DVector{2, 0, 0, 0, 0});
  for (std::size_t u = 0; u < x.size(); ++u) CHECK(x2[u] == doctest::Approx(x[u] / 2).scale(1.0).epsilon(1e-10));

  for (std::size_t d = 1; d <= 10; ++d) {
    auto cheb = build_interval_cone(d, Basis::chebyshev);
    DVector one(cheb.dim(), 0.0);
    one[0] = 1;
    DVector y = gradient_certificate_of(cheb, one);
    CHECK(y[0] == doctest::Approx(2.0 * d + 1).epsilon(1e-10));
    for (std::size_t u = 1; u < y.size(); ++u) CHECK(std::fabs(y[u]) < 1e-9);
  }
}

TEST_CASE("gradient certificate of a non-interior target fails") {
  auto cone = build_interval_cone(2, Basis::monomial);
  NewtonOptions opts;
  opts.max_iters = 50;
  CHECK_THROWS_AS(gradient_certificate_of(cone, DVector{-1, 0, 0, 0, 0}, std::nullopt, opts), wsos::Error);
}

TEST_CASE("property: neighbourhood of a gradient certificate") {
  std::mt19937 rng(211);
  int checked = 0;
  for (int k = 0; k < 30; ++k) {
    const std::size_t d = 1 + k % 3;
    auto cone = build_interval_cone(d, k % 2 ? Basis::chebyshev : Basis::monomial);
    ExactBarrier ctx(cone, random_interior(cone, rng));
    const RVector s = negated(ctx.gradient());
    RVector delta = random_rational_vector(cone.dim(), rng);
    const double norm = std::sqrt(ctx.dual_local_norm_sq(delta).get_d());
    // ||t - s||_x^* = 0.999 up to rounding of the scale factor.
    RVector t = axpy(s, float_to_rational(0.999 / norm), delta);
    CHECK(ctx.dual_local_norm_sq(axpy(t, -1, s)) <= 1);
    CHECK(certifies<Rational>(ctx, t));
    ++checked;
  }
  CHECK(checked == 30);
}

TEST_CASE("corollary guard") {
  std::mt19937 rng(213);
  std::normal_distribution<double> normal;
  auto cone = build_interval_cone(3, Basis::chebyshev);
  DVector x = to_double(random_interior(cone, rng));
  NumericBarrier ctx(cone, x);
  CHECK(corollary_guard<double>(ctx, x));
  DVector v(x.size());
  for (auto& e : v) e = normal(rng);
  const double n = ctx.local_norm(v);
  for (auto& e : v) e /= n;
  DVector y4(x), y6(x);
  for (std::size_t u = 0; u < x.size(); ++u) {
    y4[u] += 0.4 * v[u];
    y6[u] += 0.6 * v[u];
  }
  CHECK(corollary_guard<double>(ctx, y4));
  CHECK_FALSE(corollary_guard<double>(ctx, y6));
}

TEST_CASE("property: the corollary guard is consistent with exact certification") {
  std::mt19937 rng(217);
  std::normal_distribution<double> normal;
  int guarded = 0;
  for (int k = 0; k < 40; ++k) {
    auto cone = build_interval_cone(1 + k % 3, Basis::chebyshev);
    // y is the gradient certificate of t = -g(y), exactly.
    const RVector yr = random_interior(cone, rng);
    ExactBarrier ycx(cone, yr);
    const RVector t = negated(ycx.gradient());
    DVector v(cone.dim());
    for (auto& e : v) e = normal(rng);
    NumericBarrier ycd(cone, to_double(yr));
    const double n = ycd.local_norm(v);
    DVector x = to_double(yr);
    const double radius = 0.1 + 0.02 * k;
    for (std::size_t u = 0; u < x.size(); ++u) x[u] += radius * v[u] / n;
    auto xc = ExactBarrier::try_build(cone, float_to_rational(x));
    if (!xc) continue;
    if (corollary_guard<Rational>(*xc, yr)) {
      ++guarded;
      CHECK(certifies<Rational>(*xc, t));
    }
  }
  CHECK(guarded > 5);
}
