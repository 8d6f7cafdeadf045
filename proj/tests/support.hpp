#pragma once

// Shared helpers for the test suites: exact random instances and small
// independent oracles.

#include <Eigen/Dense>

#include <random>

#include "wsos/barrier.hpp"
#include "wsos/cone.hpp"

namespace wsos::testing {

inline RVector rv(std::initializer_list<const char*> items) {
  RVector out;
  for (const char* s : items) out.push_back(parse_rational(s));
  return out;
}

inline Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline RMatrix rmat(std::size_t n, std::size_t m, std::initializer_list<long> entries, const Rational& scale = 1) {
  RMatrix out(n, m);
  std::size_t k = 0;
  for (long v : entries) {
    out(k / m, k % m) = scale * v;
    ++k;
  }
  return out;
}

/// Exact value of basis function u at rational z.
inline Rational basis_value(Basis basis, std::size_t u, const Rational& z) {
  if (basis == Basis::monomial) {
    Rational acc = 1;
    for (std::size_t k = 0; k < u; ++k) acc *= z;
    return acc;
  }
  Rational t0 = 1, t1 = z;
  if (u == 0) return t0;
  for (std::size_t k = 1; k < u; ++k) {
    Rational t2 = 2 * z * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

/// Random interior point of the dual cone of an interval cone: a positive
/// combination of point evaluations at distinct rational nodes inside (-1, 1).
/// Lambda(x) = sum_k w_k g(z_k) p(z_k) p(z_k)^T is positive definite as soon
/// as there are at least max L_i distinct nodes.
inline RVector random_interior(const ConeOperator& cone, std::mt19937& rng) {
  const std::size_t n = cone.dim();
  std::uniform_int_distribution<int> num(-15, 15);
  std::uniform_int_distribution<int> wdist(1, 9);
  std::vector<int> nodes;
  while (nodes.size() < n) {
    int z = num(rng);
    if (std::find(nodes.begin(), nodes.end(), z) == nodes.end()) nodes.push_back(z);
  }
  RVector x(n, Rational(0));
  for (int zi : nodes) {
    Rational z = q(zi, 16);
    Rational w = q(wdist(rng), 4);
    for (std::size_t u = 0; u < n; ++u) x[u] += w * basis_value(cone.basis(), u, z);
  }
  return x;
}

inline RVector random_rational_vector(std::size_t n, std::mt19937& rng, int range = 9, int den = 4) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> dd(1, den);
  RVector out(n);
  for (auto& v : out) v = q(num(rng), dd(rng));
  return out;
}

inline Eigen::MatrixXd to_eigen(const DMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

/// Dense determinant by fraction-preserving Gaussian elimination (oracle).
inline Rational determinant(RMatrix m) {
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

inline bool all_equal(const RVector& a, const RVector& b) { return a == b; }

}  // namespace wsos::testing
