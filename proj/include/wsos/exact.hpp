#pragma once

#include <optional>
#include <string>

#include "wsos/certificates.hpp"

namespace wsos {

enum class RejectReason { none, not_interior, not_psd };

std::string to_string(RejectReason r);

struct Verdict {
  bool certified = false;
  RejectReason reason = RejectReason::none;
  // Block index and vector v with v^T Lambda_i(H^{-1}(t - c 1)) v < 0.
  std::optional<std::size_t> block;
  std::optional<RVector> witness;
};

/// Decides in rational arithmetic whether x certifies t - c 1. A certified
/// verdict proves t - c >= 0 on the domain of the cone.
Verdict verify_exact(const ConeOperator& cone, const RVector& t, const Rational& c, const RVector& x);

struct SosTerm {
  std::size_t weight_index = 0;
  Rational lambda;
  // Coefficients over the basis of block weight_index.
  RVector square;
};

struct SosDecomposition {
  std::vector<SosTerm> terms;
  RVector target;
  Rational bound;
};

/// Splits each Gram block by LDL^T: lambda = D_jj, square = column j of L.
/// The result is re-expanded through the cone and compared with
/// gram.target exactly; a mismatch throws NumericFailure.
SosDecomposition sos_decomposition(const ConeOperator& cone, const GramCertificate& gram, const RVector& t,
                                   const Rational& bound);

/// Coefficient vector of sum_j lambda_j g_i q_j^2 through Lambda^*.
RVector expand(const ConeOperator& cone, const std::vector<SosTerm>& terms);

/// Smallest N with sqrt(lambda_max H(x)) <= (2N / sqrt U) (r2 - r1) / (1 + r2),
/// with a small upward margin.
mpz_class minimum_denominator(const NumericBarrier& ctx, double r1, double r2);

/// Rounds x component-wise to denominator n after checking the admissibility
/// of n, then re-verifies t - c 1 exactly. Throws InvalidDenominator when n is
/// too small and NotCertified when the rounded vector fails verification.
RVector round_certificate(const ConeOperator& cone, const RVector& t, const Rational& c, const RVector& x, double r1,
                          double r2, const mpz_class& n);

}  // namespace wsos
