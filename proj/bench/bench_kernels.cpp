// Hessian kernel timings: serial reference vs the OpenMP tensor and nodal
// kernels, plus whole solver iterations, on Chebyshev interval cones.
//
//   bench_kernels [max_half_degree=64] [repeats=5]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "wsos/barrier.hpp"
#include "wsos/kernels.hpp"
#include "wsos/solver.hpp"

namespace {

using namespace wsos;
using Clock = std::chrono::steady_clock;

double best_of(int repeats, const std::function<void()>& f) {
  double best = HUGE_VAL;
  for (int k = 0; k < repeats; ++k) {
    const auto start = Clock::now();
    f();
    const std::chrono::duration<double> took = Clock::now() - start;
    best = std::min(best, took.count());
  }
  return best;
}

double max_abs_diff(const DMatrix& a, const DMatrix& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t max_d = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 64;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  std::printf("threads: %d\n\n", kernels::max_threads());
  std::printf("%5s %5s %12s %12s %12s %9s %9s %10s\n", "d", "U", "serial[s]", "tensor[s]", "nodal[s]", "tensor-x",
              "nodal-x", "max|diff|");

  for (std::size_t d = 4; d <= max_d; d *= 2) {
    auto cone = build_interval_cone(d, Basis::chebyshev);
    DVector x = to_double(*cone.one_certificate());
    // Move off the symmetric point so the blocks are dense.
    for (std::size_t u = 1; u < x.size(); ++u) x[u] = 0.3 / static_cast<double>(u + 1);
    NumericBarrier ctx(cone, x, HessianKernel::tensor);
    const auto& inv = ctx.lambda_inverse();

    DMatrix h_ref, h_tensor, h_nodal;
    const double ts = best_of(repeats, [&] { h_ref = kernels::serial::hessian<double>(cone, inv); });
    const double tt = best_of(repeats, [&] { h_tensor = kernels::parallel::hessian_tensor(cone, inv); });
    const double tn = best_of(repeats, [&] { h_nodal = kernels::parallel::hessian_nodal(cone, inv); });
    const double diff = std::max(max_abs_diff(h_ref, h_tensor), max_abs_diff(h_ref, h_nodal));
    std::printf("%5zu %5zu %12.3e %12.3e %12.3e %9.2f %9.2f %10.2e\n", d, cone.dim(), ts, tt, tn, ts / tt, ts / tn,
                diff);
  }

  std::printf("\nsolver iterations (t = T_1, nodal kernel, no exact verification)\n");
  std::printf("%5s %8s %14s\n", "d", "iters", "s/iteration");
  for (std::size_t d = 8; d <= max_d; d *= 2) {
    auto cone = build_interval_cone(d, Basis::chebyshev);
    RVector t(cone.dim(), Rational(0));
    t[1] = 1;
    SolverConfig cfg;
    cfg.verify = Verification::none;
    cfg.kernel = HessianKernel::nodal;
    cfg.max_iters = 50;
    SolverResult res = solve(cone, t, cfg);
    double total = 0;
    for (const auto& r : res.trace.records) total += r.seconds;
    std::printf("%5zu %8d %14.3e\n", d, res.iterations, total / std::max(1, res.iterations));
  }
  return 0;
}
