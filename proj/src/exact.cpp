#include "wsos/exact.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "wsos/errors.hpp"

namespace wsos {

std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::not_interior: return "not-interior";
    case RejectReason::not_psd: return "not-psd";
  }
  return "none";
}

Verdict verify_exact(const ConeOperator& cone, const RVector& t, const Rational& c, const RVector& x) {
  if (t.size() != cone.dim() || x.size() != cone.dim()) throw DimensionMismatch("verify: vector length mismatch");
  Verdict v;
  auto ctx = ExactBarrier::try_build(cone, x);
  if (!ctx) {
    v.reason = RejectReason::not_interior;
    return v;
  }
  RVector s(t.size());
  for (std::size_t u = 0; u < t.size(); ++u) s[u] = t[u] - c * cone.one()[u];
  const auto blocks = cone.apply<Rational>(ctx->solve(s));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Ldlt<Rational> f(blocks[i]);
    if (!f.positive_semidefinite()) {
      v.reason = RejectReason::not_psd;
      v.block = i;
      v.witness = f.witness();
      return v;
    }
  }
  v.certified = true;
  return v;
}

RVector expand(const ConeOperator& cone, const std::vector<SosTerm>& terms) {
  BlockSym<Rational> acc;
  for (auto side : cone.block_dims()) acc.emplace_back(side, side);
  for (const auto& term : terms) {
    if (term.weight_index >= acc.size() || term.square.size() != cone.block_dims()[term.weight_index])
      throw DimensionMismatch("SOS term does not match the cone's blocks");
    auto& m = acc[term.weight_index];
    for (std::size_t a = 0; a < term.square.size(); ++a) {
      if (term.square[a] == 0) continue;
      const Rational la = term.lambda * term.square[a];
      for (std::size_t b = 0; b < term.square.size(); ++b) m(a, b) += la * term.square[b];
    }
  }
  return cone.adjoint(acc);
}

SosDecomposition sos_decomposition(const ConeOperator& cone, const GramCertificate& gram, const RVector& t,
                                   const Rational& bound) {
  SosDecomposition out;
  out.target = t;
  out.bound = bound;
  for (std::size_t i = 0; i < gram.gram.size(); ++i) {
    Ldlt<Rational> f(gram.gram[i]);
    if (!f.positive_semidefinite()) throw NotCertified("Gram block is not positive semidefinite");
    const std::size_t side = gram.gram[i].rows();
    for (std::size_t j = 0; j < side; ++j) {
      if (f.d()[j] == 0) continue;
      SosTerm term;
      term.weight_index = i;
      term.lambda = f.d()[j];
      term.square.resize(side);
      for (std::size_t k = 0; k < side; ++k) term.square[k] = f.l()(k, j);
      out.terms.push_back(std::move(term));
    }
  }
  RVector expected(t.size());
  for (std::size_t u = 0; u < t.size(); ++u) expected[u] = t[u] - bound * cone.one()[u];
  if (expand(cone, out.terms) != expected || gram.target != expected)
    throw NumericFailure("SOS decomposition does not re-expand to t - c 1");
  return out;
}

namespace {

double hessian_spectral_radius(const NumericBarrier& ctx) {
  const DMatrix& h = ctx.hessian();
  Eigen::MatrixXd m(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) m(i, j) = h(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

void check_radii(double r1, double r2) {
  if (!(r1 >= 0 && r1 < r2 && r2 <= 0.5)) throw InvalidParameter("radii must satisfy 0 <= r1 < r2 <= 1/2");
}

// Safety margin on the numerically computed eigenvalue.
constexpr double margin = 1.0 + 1e-9;

}  // namespace

mpz_class minimum_denominator(const NumericBarrier& ctx, double r1, double r2) {
  check_radii(r1, r2);
  const double root = std::sqrt(hessian_spectral_radius(ctx)) * margin;
  const double u = static_cast<double>(ctx.cone().dim());
  const double n = std::ceil(root * std::sqrt(u) * (1 + r2) / (2 * (r2 - r1)));
  mpz_class out;
  mpz_set_d(out.get_mpz_t(), std::max(1.0, n));
  return out;
}

RVector round_certificate(const ConeOperator& cone, const RVector& t, const Rational& c, const RVector& x, double r1,
                          double r2, const mpz_class& n) {
  check_radii(r1, r2);
  if (n <= 0) throw InvalidDenominator("denominator must be positive");
  if (x.size() != cone.dim()) throw DimensionMismatch("certificate has wrong length");
  const NumericBarrier ctx(cone, to_double(x));
  const double lhs = std::sqrt(hessian_spectral_radius(ctx)) * margin;
  const double rhs = 2 * n.get_d() / std::sqrt(static_cast<double>(cone.dim())) * (r2 - r1) / (1 + r2);
  if (!(lhs <= rhs)) throw InvalidDenominator("denominator too small for the rounding radius");

  RVector rounded(x.size());
  for (std::size_t u = 0; u < x.size(); ++u) rounded[u] = round_to_denominator(x[u], n);
  if (!verify_exact(cone, t, c, rounded).certified) throw NotCertified("rounded certificate was rejected");
  return rounded;
}

}  // namespace wsos
