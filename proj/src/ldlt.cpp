#include "wsos/ldlt.hpp"

#include <algorithm>

namespace wsos {

template <typename T>
Ldlt<T>::Ldlt(const Matrix<T>& m, T pivot_tol) : l_(m.rows(), m.cols()), d_(m.rows(), T(0)) {
  if (m.rows() != m.cols()) throw std::invalid_argument("LDL^T requires a square matrix");
  if (!m.is_symmetric()) throw std::invalid_argument("LDL^T requires a symmetric matrix");
  const std::size_t n = m.rows();

  // Lower triangle of the running Schur complement.
  Matrix<T> s = m;
  T t;
  for (std::size_t k = 0; k < n; ++k) {
    const T pivot = s(k, k);
    l_(k, k) = 1;
    if (pivot > pivot_tol) {
      d_[k] = pivot;
      for (std::size_t i = k + 1; i < n; ++i) l_(i, k) = s(i, k) / pivot;
      for (std::size_t i = k + 1; i < n; ++i) {
        const T& lik = l_(i, k);
        if (is_zero(lik)) continue;
        for (std::size_t j = k + 1; j <= i; ++j) {
          const T& sjk = s(j, k);
          if (is_zero(sjk)) continue;
          t = lik * sjk;
          s(i, j) -= t;
        }
      }
      continue;
    }
    if (pivot < -pivot_tol) {
      definiteness_ = Definiteness::indefinite;
      record_witness(s, k, std::nullopt);
      return;
    }
    // Numerically zero pivot: the rest of the column must vanish too.
    for (std::size_t i = k + 1; i < n; ++i) {
      if (abs_value(s(i, k)) > pivot_tol) {
        definiteness_ = Definiteness::indefinite;
        record_witness(s, k, i);
        return;
      }
    }
    d_[k] = 0;
    definiteness_ = Definiteness::positive_semidefinite;
  }
}

template <typename T>
void Ldlt<T>::record_witness(const Matrix<T>& s, std::size_t k, std::optional<std::size_t> partner) {
  const std::size_t n = s.rows();
  // Witness in Schur-complement coordinates (indices >= k).
  Vector<T> v(n, T(0));
  if (!partner) {
    v[k] = 1;
  } else {
    const std::size_t j = *partner;
    const T& beta = s(j, k);
    const T& alpha = s(j, j);
    v[j] = 1;
    v[k] = -(alpha + T(1)) / (T(2) * beta);
  }
  // Lift: x_{<k} = -L11^{-T} L21^T x_{>=k}, so that x^T M x = v^T S v.
  for (std::size_t c = k; c-- > 0;) {
    T acc = 0;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (!is_zero(l_(i, c)) && !is_zero(v[i])) acc += l_(i, c) * v[i];
    }
    v[c] = -acc;
  }
  witness_ = std::move(v);
}

template <typename T>
Vector<T> Ldlt<T>::solve(std::span<const T> b) const {
  if (!positive_definite()) throw std::domain_error("solve requires a positive definite factorization");
  const std::size_t n = size();
  if (b.size() != n) throw std::invalid_argument("right-hand side has wrong length");
  Vector<T> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    T acc = y[i];
    for (std::size_t j = 0; j < i; ++j)
      if (!is_zero(l_(i, j))) acc -= l_(i, j) * y[j];
    y[i] = acc;
  }
  for (std::size_t i = 0; i < n; ++i) y[i] /= d_[i];
  for (std::size_t i = n; i-- > 0;) {
    T acc = y[i];
    for (std::size_t j = i + 1; j < n; ++j)
      if (!is_zero(l_(j, i))) acc -= l_(j, i) * y[j];
    y[i] = acc;
  }
  return y;
}

template <typename T>
Matrix<T> Ldlt<T>::inverse() const {
  const std::size_t n = size();
  Matrix<T> inv(n, n);
  Vector<T> e(n, T(0));
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1;
    Vector<T> col = solve(e);
    e[c] = 0;
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  // Symmetrize exactly: the two triangles agree in exact mode and are
  // averaged in floating point.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      T avg = (inv(i, j) + inv(j, i)) / T(2);
      inv(i, j) = avg;
      inv(j, i) = avg;
    }
  return inv;
}

template <typename T>
double Ldlt<T>::log_det() const {
  if (!positive_definite()) throw std::domain_error("log_det requires a positive definite factorization");
  double acc = 0.0;
  for (const auto& p : d_) acc += std::log(ScalarTraits<T>::to_double(p));
  return acc;
}

double numeric_pivot_tolerance(const DMatrix& m) {
  double mx = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) mx = std::max(mx, std::fabs(m(i, i)));
  return 1e-12 * mx;
}

template class Ldlt<double>;
template class Ldlt<Rational>;

}  // namespace wsos
