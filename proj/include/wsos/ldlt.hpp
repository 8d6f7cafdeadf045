#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "wsos/matrix.hpp"

namespace wsos {

enum class Definiteness { positive_definite, positive_semidefinite, indefinite };

/// Unpivoted LDL^T factorization of a symmetric matrix that doubles as a
/// definiteness test.
///
/// Pivots are compared against `pivot_tol`; in exact mode the tolerance is
/// zero, so the verdict is a decision rather than an estimate. A zero pivot
/// is accepted only if the remaining column of the Schur complement is zero,
/// otherwise the matrix is indefinite. When the matrix is indefinite the
/// factorization stops and a witness v with v^T M v < 0 is recorded.
template <typename T>
class Ldlt {
 public:
  explicit Ldlt(const Matrix<T>& m, T pivot_tol = T(0));

  Definiteness definiteness() const { return definiteness_; }
  bool positive_definite() const { return definiteness_ == Definiteness::positive_definite; }
  bool positive_semidefinite() const { return definiteness_ != Definiteness::indefinite; }

  /// Unit lower triangular factor; columns past a failure are zero.
  const Matrix<T>& l() const { return l_; }
  const Vector<T>& d() const { return d_; }
  const std::optional<Vector<T>>& witness() const { return witness_; }
  std::size_t size() const { return l_.rows(); }

  /// Solves M x = b. Requires a positive definite factorization.
  Vector<T> solve(std::span<const T> b) const;
  Matrix<T> inverse() const;

  /// Sum of log pivots; requires positive definiteness.
  double log_det() const;

 private:
  void record_witness(const Matrix<T>& schur, std::size_t k, std::optional<std::size_t> partner);

  Matrix<T> l_;
  Vector<T> d_;
  Definiteness definiteness_ = Definiteness::positive_definite;
  std::optional<Vector<T>> witness_;
};

extern template class Ldlt<double>;
extern template class Ldlt<Rational>;

/// Pivot tolerance for numeric positive-definiteness checks: 1e-12 times the
/// largest diagonal magnitude.
double numeric_pivot_tolerance(const DMatrix& m);

}  // namespace wsos
