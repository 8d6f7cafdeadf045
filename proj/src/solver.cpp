#include "wsos/solver.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "wsos/certificates.hpp"
#include "wsos/errors.hpp"
#include "wsos/exact.hpp"

namespace wsos {

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::max_iterations: return "max-iterations";
    case SolverStatus::numeric_failure: return "numeric-failure";
  }
  return "converged";
}

void write_trace_jsonl(std::ostream& out, const SolverTrace& trace) {
  for (const auto& r : trace.records) {
    nlohmann::ordered_json j;
    j["iter"] = r.iter;
    j["c"] = r.c;
    j["delta_c"] = r.delta_c;
    j["residual_norm"] = r.residual_norm;
    out << j.dump() << '\n';
  }
}

DVector one_certificate(const ConeOperator& cone, HessianKernel kernel) {
  if (cone.one_certificate()) return to_double(*cone.one_certificate());
  NewtonOptions opts;
  opts.kernel = kernel;
  return gradient_certificate_of(cone, to_double(cone.one()), std::nullopt, opts);
}

InitialPoint initialize(const ConeOperator& cone, std::span<const double> t, double r, std::span<const double> x1,
                        HessianKernel kernel) {
  if (!(r > 0 && r <= 0.25)) throw InvalidParameter("r must lie in (0, 1/4]");
  InitialPoint out;
  out.x.assign(x1.begin(), x1.end());
  bool zero = true;
  for (double v : t) zero = zero && v == 0.0;
  if (zero) return out;
  NumericBarrier ctx(cone, out.x, kernel);
  out.c0 = -((1 + r) / r) * ctx.dual_local_norm(t);
  for (auto& v : out.x) v /= -out.c0;
  return out;
}

DVector newton_step(const NumericBarrier& ctx, std::span<const double> t, double c) {
  const RVector& one = ctx.cone().one();
  DVector s(t.size());
  for (std::size_t u = 0; u < t.size(); ++u) s[u] = t[u] - c * nearest_double(one[u]);
  DVector w = ctx.solve(s);
  DVector out(t.size());
  for (std::size_t u = 0; u < t.size(); ++u) out[u] = 2 * ctx.x()[u] - w[u];
  return out;
}

double bound_update(const NumericBarrier& ctx, std::span<const double> t, double r, double center) {
  const DVector one = to_double(ctx.cone().one());
  DVector s(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) s[k] = t[k] - center * one[k];
  const DVector hs = ctx.solve(s);
  const DVector v = ctx.solve(one);
  // w = x - H^{-1}(t - center 1); ||w + delta v||_x^2 = a delta^2 + b delta + c
  // with <w, v>_x = w^T 1. Expanding around the current bound keeps the
  // coefficients free of cancellation near convergence.
  DVector w(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) w[k] = ctx.x()[k] - hs[k];
  const double radius = r / (r + 1);
  const double a = dot<double>(one, v);
  const double b = 2 * dot<double>(w, one);
  const double c = ctx.local_norm_sq(w) - radius * radius;
  const double disc = b * b - 4 * a * c;
  if (!(a > 0) || disc < 0) throw NumericFailure("bound update has no real solution");
  const double sq = std::sqrt(disc);
  const double delta = b <= 0 ? (-b + sq) / (2 * a) : (2 * c) / (-b - sq);
  return center + delta;
}

namespace {

struct Pair {
  double c;
  DVector x;
};

bool lift_and_verify(const ConeOperator& cone, const RVector& t, const Pair& p) {
  return verify_exact(cone, t, float_to_rational(p.c), float_to_rational(p.x)).certified;
}

}  // namespace

SolverResult solve(const ConeOperator& cone, const RVector& t, const SolverConfig& config) {
  if (t.size() != cone.dim()) throw DimensionMismatch("polynomial has wrong length for the cone");
  if (!(config.r > 0 && config.r <= 0.25)) throw InvalidParameter("r must lie in (0, 1/4]");
  if (!(config.epsilon > 0)) throw InvalidParameter("epsilon must be positive");
  if (config.C && !(*config.C > 0)) throw InvalidParameter("C must be positive");
  if (config.max_iters < 1) throw InvalidParameter("max_iters must be positive");

  SolverResult result;
  const DVector tf = to_double(t);
  const DVector x1 = one_certificate(cone, config.kernel);

  if (config.C) {
    result.C = config.C;
  } else if (config.auto_C && cone.univariate_even() && cone.basis() == Basis::chebyshev) {
    result.C = univariate_C(cone.half_degree());
  }
  double threshold;
  if (result.C) {
    result.stop_rule = StopRule::gap_guarantee;
    result.gap_guarantee = true;
    threshold = rho(config.r) * *result.C * config.epsilon;
  } else {
    result.stop_rule = StopRule::absolute_step;
    threshold = config.epsilon_abs.value_or(config.epsilon * 1e-2);
  }

  InitialPoint init = initialize(cone, tf, config.r, x1, config.kernel);
  std::vector<Pair> history{{init.c0, init.x}};
  auto& trace = result.trace;
  bool initial_ok = true;
  if (config.verify == Verification::every) initial_ok = lift_and_verify(cone, t, history[0]);

  bool zero = true;
  for (const auto& v : t) zero = zero && v == 0;
  if (!zero) {
    auto ctx = NumericBarrier::try_build(cone, init.x, config.kernel);
    if (!ctx) throw NumericFailure("initial certificate is not interior");
    double c = init.c0;
    trace.status = SolverStatus::max_iterations;
    for (int iter = 1; iter <= config.max_iters; ++iter) {
      const auto start = std::chrono::steady_clock::now();
      const DVector full = newton_step(*ctx, tf, c);
      std::optional<NumericBarrier> next;
      double alpha = 1.0;
      for (int h = 0; h <= config.max_step_halvings && !next; ++h, alpha *= 0.5) {
        DVector trial(full.size());
        for (std::size_t u = 0; u < full.size(); ++u) trial[u] = ctx->x()[u] + alpha * (full[u] - ctx->x()[u]);
        try {
          next = NumericBarrier::try_build(cone, std::move(trial), config.kernel);
        } catch (const NumericFailure&) {
          next.reset();
        }
      }
      if (!next) {
        trace.status = SolverStatus::numeric_failure;
        break;
      }

      DVector shifted(tf.size());
      for (std::size_t u = 0; u < tf.size(); ++u) shifted[u] = tf[u] - c * nearest_double(cone.one()[u]);
      const DVector hs = next->solve(shifted);
      DVector res(tf.size());
      for (std::size_t u = 0; u < tf.size(); ++u) res[u] = next->x()[u] - hs[u];
      const double residual = next->local_norm(res);

      double c_plus;
      try {
        c_plus = bound_update(*next, tf, config.r, c);
      } catch (const NumericFailure&) {
        trace.status = SolverStatus::numeric_failure;
        break;
      }
      if (!(c_plus > c)) {
        trace.status = SolverStatus::numeric_failure;
        break;
      }
      Pair candidate{c_plus, next->x()};
      if (config.verify == Verification::every && !lift_and_verify(cone, t, candidate)) {
        trace.status = SolverStatus::numeric_failure;
        break;
      }
      const double delta = c_plus - c;
      c = c_plus;
      ctx = std::move(next);
      history.push_back(std::move(candidate));
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      trace.records.push_back({iter, c, delta, residual, took.count()});
      if (delta <= threshold) {
        trace.status = SolverStatus::converged;
        break;
      }
    }
  } else {
    trace.status = SolverStatus::converged;
  }

  result.iterations = static_cast<int>(trace.records.size());
  // Walk back from the last iterate until a pair survives exact verification.
  std::size_t pick = history.size() - 1;
  if (config.verify == Verification::every) {
    result.verified = initial_ok;
  } else if (config.verify == Verification::final) {
    while (true) {
      if (lift_and_verify(cone, t, history[pick])) {
        result.verified = true;
        break;
      }
      if (pick == 0) break;
      --pick;
    }
    if (pick + 1 != history.size() && trace.status == SolverStatus::converged)
      trace.status = SolverStatus::numeric_failure;
  }
  if (!result.verified && config.verify != Verification::none) pick = history.size() - 1;
  result.c_float = history[pick].c;
  result.x_float = history[pick].x;
  result.c = float_to_rational(result.c_float);
  result.x = float_to_rational(result.x_float);
  return result;
}

}  // namespace wsos
