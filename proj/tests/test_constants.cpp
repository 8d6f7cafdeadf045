#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "wsos/constants.hpp"
#include "wsos/errors.hpp"

using namespace wsos;
using namespace wsos::testing;

namespace {

// Lambda(x) = diag(x): sum_i trace(Lambda_i(w)^2) = ||w||^2.
ConeOperator diagonal_cone(std::size_t n, long scale = 1) {
  std::vector<std::vector<TensorEntry>> blocks(n);
  for (std::size_t u = 0; u < n; ++u) blocks[u] = {{0, 0, u, Rational(scale)}};
  return ConeOperator(n, std::vector<std::size_t>(n, 1), blocks, Basis::custom);
}

ConeOperator scaled_cone(const ConeOperator& base, long factor) {
  std::vector<std::vector<TensorEntry>> blocks;
  for (std::size_t i = 0; i < base.num_blocks(); ++i) {
    auto e = base.entries(i);
    for (auto& t : e) t.value *= factor;
    blocks.push_back(e);
  }
  return ConeOperator(base.dim(), base.block_dims(), blocks, Basis::custom);
}

double lambda_max(const DMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

}  // namespace

TEST_CASE("contraction factor") {
  CHECK(rho(Rational(1, 4)) == Rational(1, 20));
  CHECK(rho(Rational(1, 6)) == Rational(2, 21));
  CHECK(rho(0.25) == 0.05);
  CHECK(rho(1e-9) < 2e-9);
  CHECK(rho(1e-9) > 0);
  CHECK_THROWS_AS(rho(Rational(0)), InvalidParameter);
  CHECK_THROWS_AS(rho(Rational(1, 3)), InvalidParameter);
}

TEST_CASE("property: 0 < rho(r) < r on (0, 1/4]") {
  for (long k = 1; k <= 40; ++k) {
    Rational r(k, 160);
    r.canonicalize();
    Rational v = rho(r);
    CHECK(v > 0);
    CHECK(v < r);
  }
}

TEST_CASE("univariate convergence constant") {
  for (std::size_t d = 1; d <= 50; ++d) {
    const double dd = static_cast<double>(d);
    const double expected = std::sqrt(3.0 - std::sqrt(5.0)) / (2.0 * (dd + 1) * (2 * dd + 1));
    CHECK(std::fabs(univariate_C(d) - expected) <= 1e-12 * expected);

    auto k = univariate_constants(d);
    CHECK(k.nu == 2 * d + 1);
    CHECK(k.k3 == static_cast<long>(d + 1));
    CHECK(k.k1 == 1);
    CHECK(k.c_lower.get_d() <= univariate_C(d));
    CHECK(k.c_lower.get_d() >= univariate_C(d) * (1 - 1e-10));
    CHECK(k.rho_r == Rational(1, 20));
  }
  CHECK_THROWS_AS(univariate_C(0), InvalidDegree);
}

TEST_CASE("trace bound matrix has smallest eigenvalue (3 - sqrt 5)/4") {
  // Independent oracle: M splits into 2x2 blocks [[5/4, 1/4], [1/4, 1/4]]
  // with eigenvalues (3 +- sqrt 5)/4, plus the middle diagonal entry 2.
  const double expected = (3.0 - std::sqrt(5.0)) / 4.0;
  for (std::size_t d = 1; d <= 10; ++d) {
    RMatrix m = chebyshev_trace_bound_matrix(d);
    CHECK(m.is_symmetric());
    CHECK(m(d, d) == 2);
    CHECK(std::fabs(chebyshev_trace_bound_min_eigenvalue(d) - expected) <= 1e-12);
  }
}

TEST_CASE("property: the trace bound matrix lower-bounds trace(Lambda_1(w)^2)") {
  std::mt19937 rng(401);
  for (std::size_t d = 1; d <= 6; ++d) {
    auto cone = build_interval_cone(d, Basis::chebyshev);
    RMatrix m = chebyshev_trace_bound_matrix(d);
    for (int k = 0; k < 10; ++k) {
      RVector w = random_rational_vector(cone.dim(), rng);
      auto blocks = cone.apply<Rational>(w);
      Rational tr = 0;
      for (std::size_t r = 0; r < blocks[0].rows(); ++r)
        for (std::size_t c = 0; c < blocks[0].cols(); ++c) tr += blocks[0](r, c) * blocks[0](r, c);
      CHECK(dot<Rational>(w, m * w) <= tr);
    }
  }
}

TEST_CASE("gershgorin k3") {
  for (std::size_t d = 1; d <= 20; ++d) {
    CHECK(k3_gershgorin(build_interval_cone(d, Basis::chebyshev)) <= static_cast<long>(d + 1));
  }
  CHECK(k3_gershgorin(diagonal_cone(1)) == 1);
  auto base = build_interval_cone(3, Basis::chebyshev);
  CHECK(k3_gershgorin(scaled_cone(base, 2)) == 2 * k3_gershgorin(base));
}

TEST_CASE("property: k3 bounds lambda_max(Lambda(y)) for ||y||_inf <= 1") {
  std::mt19937 rng(403);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 1 + k % 6;
    auto cone = k % 3 ? build_interval_cone(d, Basis::chebyshev) : build_interval_cone_odd(d, Basis::monomial);
    const double k3 = k3_gershgorin(cone).get_d();
    DVector y(cone.dim());
    for (auto& v : y) v = unit(rng);
    for (const auto& block : cone.apply<double>(y)) CHECK(lambda_max(block) <= k3 * (1 + 1e-12));
  }
}

TEST_CASE("eigenvalue k2") {
  CHECK(k2_general(diagonal_cone(4)) == doctest::Approx(1.0).epsilon(1e-7));
  auto base = build_interval_cone(3, Basis::chebyshev);
  CHECK(k2_general(scaled_cone(base, 3)) == doctest::Approx(3 * k2_general(base)).epsilon(1e-10));
  for (std::size_t d = 1; d <= 10; ++d) {
    CHECK(k2_general(build_interval_cone(d, Basis::chebyshev)) >= 0.5 * std::sqrt(3.0 - std::sqrt(5.0)));
  }
}

TEST_CASE("general constants") {
  auto cone = build_interval_cone(3, Basis::chebyshev);
  auto k = general_constants(cone, Rational(1, 2));
  CHECK(k.k1 == Rational(1, 2));
  CHECK(k.k1_from == Provenance::user);
  CHECK(k.k2_from == Provenance::eigenvalue);
  CHECK(k.k3_from == Provenance::gershgorin);
  CHECK(k.nu == 7);
  CHECK(k.c_lower == k.k1 * k.k2 / (k.k3 * 7 * k.one_norm));
  CHECK_THROWS_AS(general_constants(cone, Rational(0)), InvalidParameter);
}

TEST_CASE("safe rational rounding") {
  for (double v : {0.0, 1.0 / 3.0, std::sqrt(2.0), 12345.678}) {
    CHECK(rational_below(v).get_d() <= v);
    CHECK(rational_above(v).get_d() >= v);
    CHECK(Rational(rational_above(v) - rational_below(v)).get_d() <= std::ldexp(1.0, -40) * 1.000001);
  }
}
