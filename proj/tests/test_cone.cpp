#include <random>

#include "doctest.h"
#include "support.hpp"
#include "wsos/errors.hpp"

using namespace wsos;
using namespace wsos::testing;

namespace {

// Independent oracle for the operator: expand g * p_i * p_j as a polynomial
// (exactly, by sampling and interpolation-free coefficient arithmetic) and
// read off the coefficient of q_u. Monomial basis only.
RMatrix monomial_block_oracle(const RVector& x, std::size_t side, const std::vector<long>& weight) {
  RMatrix m(side, side);
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j)
      for (std::size_t k = 0; k < weight.size(); ++k) {
        const std::size_t u = i + j + k;
        if (weight[k] != 0 && u < x.size()) m(i, j) += weight[k] * x[u];
      }
  return m;
}

}  // namespace

TEST_CASE("monomial d=2 operator matches the displayed Hankel form") {
  auto cone = build_interval_cone(2, Basis::monomial);
  CHECK(cone.dim() == 5);
  CHECK(cone.nu() == 5);
  CHECK(cone.block_dims() == std::vector<std::size_t>{3, 2});
  RVector x = rv({"1", "2", "3", "4", "5"});
  auto l = cone.apply<Rational>(x);
  CHECK(l[0] == rmat(3, 3, {1, 2, 3, 2, 3, 4, 3, 4, 5}));
  CHECK(l[1] == rmat(2, 2, {1 - 3, 2 - 4, 2 - 4, 3 - 5}));
}

TEST_CASE("monomial d=2 block 2 at the gradient certificate of one") {
  auto cone = build_interval_cone(2, Basis::monomial);
  auto l = cone.apply<Rational>(rv({"5", "0", "5/2", "0", "15/8"}));
  CHECK(l[1] == RMatrix(rmat(2, 2, {20, 0, 0, 5}, q(1, 8))));
}

TEST_CASE("monomial d=1 operator") {
  auto cone = build_interval_cone(1, Basis::monomial);
  auto l = cone.apply<Rational>(rv({"7", "3", "2"}));
  CHECK(l[0] == rmat(2, 2, {7, 3, 3, 2}));
  CHECK(l[1] == rmat(1, 1, {7 - 2}));
}

TEST_CASE("chebyshev d=2 zeroth row is (w0, w1, w2)") {
  auto cone = build_interval_cone(2, Basis::chebyshev);
  RVector w = rv({"3", "5", "7", "11", "13"});
  auto l = cone.apply<Rational>(w);
  CHECK(l[0](0, 0) == 3);
  CHECK(l[0](0, 1) == 5);
  CHECK(l[0](0, 2) == 7);
  CHECK(l[0](1, 0) == 5);
}

TEST_CASE("chebyshev block structure: half-sum of w_{i+j} and w_{|i-j|}") {
  std::mt19937 rng(3);
  for (std::size_t d = 1; d <= 6; ++d) {
    auto cone = build_interval_cone(d, Basis::chebyshev);
    RVector w = random_rational_vector(cone.dim(), rng);
    auto l = cone.apply<Rational>(w);
    CHECK(l[0](0, 0) == w[0]);
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j <= d; ++j) {
        if (i + j == 0) continue;
        const std::size_t df = i > j ? i - j : j - i;
        CHECK(l[0](i, j) == (w[i + j] + w[df]) / 2);
      }
  }
}

TEST_CASE("monomial even cone is Hankel in block 1") {
  std::mt19937 rng(5);
  auto cone = build_interval_cone(4, Basis::monomial);
  RVector x = random_rational_vector(cone.dim(), rng);
  auto l = cone.apply<Rational>(x);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(l[0](i, j) == x[i + j]);
  CHECK(l[1] == monomial_block_oracle(x, 4, {1, 0, -1}));
}

TEST_CASE("odd cone, monomial") {
  auto c0 = build_interval_cone_odd(0, Basis::monomial);
  CHECK(c0.dim() == 2);
  auto l0 = c0.apply<Rational>(rv({"5", "2"}));
  CHECK(l0[0] == rmat(1, 1, {3}));
  CHECK(l0[1] == rmat(1, 1, {7}));

  auto c1 = build_interval_cone_odd(1, Basis::monomial);
  CHECK(c1.dim() == 4);
  CHECK(c1.nu() == 4);
  RVector x = rv({"1", "2", "4", "8"});
  auto l1 = c1.apply<Rational>(x);
  CHECK(l1[0](0, 0) == x[0] - x[1]);
  CHECK(l1[0](0, 1) == x[1] - x[2]);
  CHECK(l1[0] == monomial_block_oracle(x, 2, {1, -1}));
  CHECK(l1[1] == monomial_block_oracle(x, 2, {1, 1}));
}

TEST_CASE("odd cone injectivity for d <= 10, both bases") {
  for (std::size_t d = 0; d <= 10; ++d) {
    CHECK(build_interval_cone_odd(d, Basis::monomial).injective());
    CHECK(build_interval_cone_odd(d, Basis::chebyshev).injective());
  }
}

TEST_CASE("even cone injectivity up to d = 50") {
  for (std::size_t d = 1; d <= 50; ++d) {
    CHECK(build_interval_cone(d, Basis::chebyshev).injective());
    CHECK(build_interval_cone(d, Basis::monomial).injective());
  }
}

TEST_CASE("degenerate custom cone is not injective") {
  // Lambda(x) = [x0 + x1]: the direction (1, -1) is in the kernel.
  std::vector<std::vector<TensorEntry>> blocks(1);
  blocks[0].push_back({0, 0, 0, 1});
  blocks[0].push_back({0, 0, 1, 1});
  ConeOperator cone(2, {1}, blocks, Basis::custom);
  CHECK_FALSE(cone.injective());
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(build_interval_cone(0, Basis::monomial), InvalidDegree);
  auto cone = build_interval_cone(2, Basis::monomial);
  CHECK_THROWS_AS(cone.apply<Rational>(rv({"1", "2"})), DimensionMismatch);
  BlockSym<Rational> bad{RMatrix(3, 3)};
  CHECK_THROWS_AS(cone.adjoint(bad), DimensionMismatch);
  std::vector<std::vector<TensorEntry>> blocks(1);
  blocks[0].push_back({0, 2, 0, 1});
  CHECK_THROWS_AS(ConeOperator(1, {2}, blocks, Basis::custom), DimensionMismatch);
}

TEST_CASE("adjoint matches the displayed formula for monomial d=2") {
  auto cone = build_interval_cone(2, Basis::monomial);
  std::mt19937 rng(17);
  for (int k = 0; k < 10; ++k) {
    RMatrix s1(3, 3), s2(2, 2);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) s1(i, j) = s1(j, i) = random_rational_vector(1, rng)[0];
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = i; j < 2; ++j) s2(i, j) = s2(j, i) = random_rational_vector(1, rng)[0];
    RVector got = cone.adjoint(BlockSym<Rational>{s1, s2});
    RVector expected = {s1(0, 0) + s2(0, 0), 2 * s1(0, 1) + 2 * s2(0, 1),
                        2 * s1(0, 2) + s1(1, 1) - s2(0, 0) + s2(1, 1), 2 * s1(1, 2) - 2 * s2(0, 1),
                        s1(2, 2) - s2(1, 1)};
    CHECK(got == expected);
  }
  BlockSym<Rational> zero{RMatrix(3, 3), RMatrix(2, 2)};
  CHECK(cone.adjoint(zero) == RVector(5, Rational(0)));
  CHECK(cone.apply<Rational>(RVector(5, Rational(0)))[0] == RMatrix(3, 3));
}

TEST_CASE("property: exact adjointness and linearity on random rationals") {
  std::mt19937 rng(23);
  int checked = 0;
  for (std::size_t d = 1; d <= 5; ++d) {
    for (Basis b : {Basis::monomial, Basis::chebyshev}) {
      for (bool odd : {false, true}) {
        auto cone = odd ? build_interval_cone_odd(d, b) : build_interval_cone(d, b);
        for (int k = 0; k < 5; ++k) {
          RVector x = random_rational_vector(cone.dim(), rng);
          RVector y = random_rational_vector(cone.dim(), rng);
          BlockSym<Rational> s;
          for (auto side : cone.block_dims()) {
            RMatrix m(side, side);
            for (std::size_t i = 0; i < side; ++i)
              for (std::size_t j = i; j < side; ++j) m(i, j) = m(j, i) = random_rational_vector(1, rng)[0];
            s.push_back(m);
          }
          CHECK(block_inner(cone.apply<Rational>(x), s) == dot<Rational>(x, cone.adjoint(s)));

          Rational alpha = q(3, 7), beta = q(-2, 5);
          RVector combo(x.size());
          for (std::size_t u = 0; u < x.size(); ++u) combo[u] = alpha * x[u] + beta * y[u];
          auto lhs = cone.apply<Rational>(combo);
          auto lx = cone.apply<Rational>(x), ly = cone.apply<Rational>(y);
          for (std::size_t i = 0; i < lhs.size(); ++i) {
            lx[i] *= alpha;
            ly[i] *= beta;
            lx[i] += ly[i];
            CHECK(lhs[i] == lx[i]);
          }
          ++checked;
        }
      }
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("nodal factor reproduces the tensor operator") {
  std::mt19937 rng(29);
  for (std::size_t d : {1, 3, 8}) {
    for (bool odd : {false, true}) {
      auto cone = odd ? build_interval_cone_odd(d, Basis::chebyshev) : build_interval_cone(d, Basis::chebyshev);
      const NodalFactor* nf = cone.nodal();
      REQUIRE(nf != nullptr);
      DVector x = to_double(random_rational_vector(cone.dim(), rng));
      auto l = cone.apply<double>(x);
      // Lambda_i(x) = P^T diag(g_i * (C^T x)) P
      DVector nodal_x(cone.dim(), 0.0);
      for (std::size_t k = 0; k < cone.dim(); ++k)
        for (std::size_t u = 0; u < cone.dim(); ++u) nodal_x[k] += nf->coeff_from_nodes(u, k) * x[u];
      for (std::size_t i = 0; i < cone.num_blocks(); ++i) {
        const auto& p = nf->basis_at_nodes[i];
        for (std::size_t a = 0; a < p.cols(); ++a)
          for (std::size_t b = 0; b < p.cols(); ++b) {
            double acc = 0;
            for (std::size_t k = 0; k < cone.dim(); ++k)
              acc += p(k, a) * p(k, b) * nf->weight_at_nodes[i][k] * nodal_x[k];
            CHECK(acc == doctest::Approx(l[i](a, b)).epsilon(1e-10).scale(10));
          }
      }
    }
  }
}

TEST_CASE("domain point functional evaluates at z = 0") {
  auto cheb = build_interval_cone(3, Basis::chebyshev);
  REQUIRE(cheb.domain_point());
  CHECK(*cheb.domain_point() == rv({"1", "0", "-1", "0", "1", "0", "-1"}));
  auto mono = build_interval_cone(3, Basis::monomial);
  CHECK(*mono.domain_point() == rv({"1", "0", "0", "0", "0", "0", "0"}));
}
