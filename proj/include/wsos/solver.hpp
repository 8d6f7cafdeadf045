#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "wsos/barrier.hpp"
#include "wsos/constants.hpp"

namespace wsos {

enum class StopRule { gap_guarantee, absolute_step };

enum class Verification {
  none,   // trust the floating iterate (fast; for benchmarks)
  final,  // lift and verify the returned pair; fall back to earlier iterates
  every,  // lift and verify every iterate
};

struct SolverConfig {
  double r = 0.25;
  double epsilon = 1e-7;
  // Convergence constant. Unset: closed form for the Chebyshev even interval
  // cone, otherwise the absolute-step rule.
  std::optional<double> C;
  bool auto_C = true;
  // Step threshold when no C is available; defaults to epsilon * 1e-2.
  std::optional<double> epsilon_abs;
  int max_iters = 10000;
  int max_step_halvings = 30;
  Verification verify = Verification::final;
  HessianKernel kernel = HessianKernel::automatic;
};

struct TraceRecord {
  int iter = 0;
  double c = 0.0;
  double delta_c = 0.0;
  // ||x_+ - H(x_+)^{-1}(t - c 1)||_{x_+} after the certificate update, with
  // the bound of the previous iteration.
  double residual_norm = 0.0;
  double seconds = 0.0;
};

enum class SolverStatus { converged, max_iterations, numeric_failure };

std::string to_string(SolverStatus s);

struct SolverTrace {
  std::vector<TraceRecord> records;
  SolverStatus status = SolverStatus::converged;
};

/// JSON lines {iter, c, delta_c, residual_norm}; no timing so the output is
/// reproducible.
void write_trace_jsonl(std::ostream& out, const SolverTrace& trace);

struct SolverResult {
  // Certified bound and certificate, as exact lifts of the floating iterate.
  Rational c;
  RVector x;
  double c_float = 0.0;
  DVector x_float;
  // True when (c, x) passed verify_exact.
  bool verified = false;
  // True when the stop rule used a convergence constant C.
  bool gap_guarantee = false;
  std::optional<double> C;
  StopRule stop_rule = StopRule::absolute_step;
  int iterations = 0;
  SolverTrace trace;
};

struct InitialPoint {
  double c0 = 0.0;
  DVector x;
};

/// Gradient certificate of the constant one polynomial in floating point.
DVector one_certificate(const ConeOperator& cone, HessianKernel kernel = HessianKernel::automatic);

/// c0 = -((1+r)/r) ||t||^*_{x1} and x = -x1 / c0. For t = 0 returns (0, x1).
InitialPoint initialize(const ConeOperator& cone, std::span<const double> t, double r, std::span<const double> x1,
                        HessianKernel kernel = HessianKernel::automatic);

/// x_+ = 2x - H(x)^{-1}(t - c 1).
DVector newton_step(const NumericBarrier& ctx, std::span<const double> t, double c);

/// Largest c_+ with ||x - H(x)^{-1}(t - c_+ 1)||_x = r/(r+1). `center` is
/// where the quadratic is expanded (the current bound, for accuracy). Throws
/// NumericFailure on a negative discriminant.
double bound_update(const NumericBarrier& ctx, std::span<const double> t, double r, double center = 0.0);

/// The bound iteration. Never throws on numeric trouble: the result carries
/// the last certified pair and the status.
SolverResult solve(const ConeOperator& cone, const RVector& t, const SolverConfig& config = {});

}  // namespace wsos
