// wsos: certified lower bounds for polynomials on intervals and custom cones.
//
//   wsos bound      <problem.json> [--r R] [--epsilon E] [--C C] [--trace PATH] [--mode float|exact]
//   wsos verify     <problem.json> --certificate FILE [--bound B]
//   wsos decompose  <problem.json> --certificate FILE [--bound B]
//   wsos constants  <problem.json> [--r R] [--k1 K]
//
// Exit codes: 0 success or certified, 1 rejected, 2 input error, 3 partial result.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "wsos/errors.hpp"
#include "wsos/exact.hpp"
#include "wsos/io.hpp"
#include "wsos/solver.hpp"

namespace {

using namespace wsos;
using io::Json;

enum Exit { ok = 0, rejected = 1, input_error = 2, partial = 3 };

// Accepts "p/q", integers, and decimal literals (converted exactly).
Rational parse_number(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw ParseError("not a number: '" + text + "'");
  }
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

struct CertificateInput {
  Rational bound;
  RVector x;
};

// Reads {bound, certificate} as written by `wsos bound`.
CertificateInput read_certificate(const std::string& path, const std::string& bound_override) {
  Json j = io::read_json(path);
  if (!j.is_object() || !j.contains("certificate")) throw ParseError(path + ": missing 'certificate'");
  CertificateInput in;
  in.x = io::vector_from_json(j.at("certificate"));
  if (!bound_override.empty()) {
    in.bound = parse_number(bound_override);
  } else if (j.contains("bound")) {
    in.bound = io::rational_from_json(j.at("bound"));
  } else {
    throw ParseError(path + ": missing 'bound' (or pass --bound)");
  }
  return in;
}

int cmd_bound(const io::Problem& p, const std::string& r, const std::string& eps, const std::string& C,
              const std::string& trace_path, const std::string& mode) {
  SolverConfig cfg = p.solver;
  if (!r.empty()) cfg.r = nearest_double(parse_number(r));
  if (!eps.empty()) cfg.epsilon = nearest_double(parse_number(eps));
  if (C == "auto") {
    cfg.C.reset();
    cfg.auto_C = true;
  } else if (C == "none") {
    cfg.C.reset();
    cfg.auto_C = false;
  } else if (!C.empty()) {
    cfg.C = nearest_double(parse_number(C));
  }
  cfg.verify = mode == "exact" ? Verification::every : Verification::final;

  SolverResult res = solve(*p.cone, p.coeffs, cfg);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw ParseError("cannot write trace to " + trace_path);
    write_trace_jsonl(out, res.trace);
  }
  // Self-check: the emitted pair must pass the verifier.
  const bool certified = verify_exact(*p.cone, p.coeffs, res.c, res.x).certified;

  Json j;
  j["status"] = to_string(res.trace.status);
  j["certified"] = certified;
  j["bound"] = io::to_json(res.c);
  j["certificate"] = io::to_json(res.x);
  j["gap_guarantee"] = res.gap_guarantee;
  j["C"] = res.C ? Json(*res.C) : Json(nullptr);
  j["iterations"] = res.iterations;
  j["trace_path"] = trace_path.empty() ? Json(nullptr) : Json(trace_path);
  emit(j);
  if (!certified) return rejected;
  return res.trace.status == SolverStatus::converged ? ok : partial;
}

int cmd_verify(const io::Problem& p, const CertificateInput& in) {
  Verdict v = verify_exact(*p.cone, p.coeffs, in.bound, in.x);
  Json j;
  j["certified"] = v.certified;
  j["bound"] = io::to_json(in.bound);
  if (!v.certified) {
    j["reason"] = to_string(v.reason);
    if (v.block) j["block"] = *v.block;
    if (v.witness) j["witness"] = io::to_json(*v.witness);
  }
  emit(j);
  return v.certified ? ok : rejected;
}

int cmd_decompose(const io::Problem& p, const CertificateInput& in) {
  Verdict v = verify_exact(*p.cone, p.coeffs, in.bound, in.x);
  if (!v.certified) {
    emit(Json{{"certified", false}, {"reason", to_string(v.reason)}});
    return rejected;
  }
  RVector s(p.coeffs);
  for (std::size_t u = 0; u < s.size(); ++u) s[u] -= in.bound * p.cone->one()[u];
  DualCertificate x(*p.cone, in.x);
  // sos_decomposition re-expands its terms and compares exactly.
  SosDecomposition sos = sos_decomposition(*p.cone, gram_certificate(x, s), p.coeffs, in.bound);
  emit(io::to_json(sos));
  return ok;
}

int cmd_constants(const io::Problem& p, const std::string& r, const std::string& k1) {
  const Rational rr = r.empty() ? Rational(1, 4) : parse_number(r);
  ConvergenceConstants k;
  if (p.cone->univariate_even() && p.cone->basis() == Basis::chebyshev && k1.empty()) {
    k = univariate_constants(p.cone->half_degree(), rr);
  } else {
    if (k1.empty()) throw InvalidParameter("this cone has no closed-form k1; pass --k1");
    k = general_constants(*p.cone, parse_number(k1), rr);
  }
  emit(io::to_json(k));
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified lower bounds via weighted sum-of-squares dual certificates"};
  app.require_subcommand(1);

  std::string problem_path, r, eps, C, trace_path, mode = "float", cert_path, bound, k1;

  auto* bound_cmd = app.add_subcommand("bound", "Run the bound iteration and emit a certified bound");
  bound_cmd->add_option("problem", problem_path, "Problem file")->required();
  bound_cmd->add_option("--r", r, "Neighbourhood radius in (0, 1/4]");
  bound_cmd->add_option("--epsilon", eps, "Target accuracy");
  bound_cmd->add_option("--C", C, "Convergence constant, 'auto' or 'none'");
  bound_cmd->add_option("--trace", trace_path, "Write the per-iteration trace as JSON lines");
  bound_cmd->add_option("--mode", mode, "float: verify the result; exact: verify every iterate")
      ->check(CLI::IsMember({"float", "exact"}));

  auto* verify_cmd = app.add_subcommand("verify", "Verify a bound and certificate exactly");
  auto* decompose_cmd = app.add_subcommand("decompose", "Emit a rational SOS decomposition");
  for (auto* sub : {verify_cmd, decompose_cmd}) {
    sub->add_option("problem", problem_path, "Problem file")->required();
    sub->add_option("--certificate", cert_path, "JSON file with 'certificate' (and 'bound')")->required();
    sub->add_option("--bound", bound, "Bound to verify, overriding the file");
    sub->add_option("--mode", mode, "Ignored; verification is always exact")->check(CLI::IsMember({"float", "exact"}));
  }

  auto* constants_cmd = app.add_subcommand("constants", "Emit the convergence constants of the cone");
  constants_cmd->add_option("problem", problem_path, "Problem file")->required();
  constants_cmd->add_option("--r", r, "Neighbourhood radius in (0, 1/4]");
  constants_cmd->add_option("--k1", k1, "User-supplied k1 for cones without a closed form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : input_error;
  }

  io::Problem problem;
  try {
    problem = io::read_problem(problem_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return input_error;
  }

  try {
    if (*bound_cmd) return cmd_bound(problem, r, eps, C, trace_path, mode);
    if (*constants_cmd) return cmd_constants(problem, r, k1);
    CertificateInput in = read_certificate(cert_path, bound);
    if (in.x.size() != problem.cone->dim())
      throw DimensionMismatch("certificate has " + std::to_string(in.x.size()) + " entries, expected " +
                              std::to_string(problem.cone->dim()));
    if (*verify_cmd) return cmd_verify(problem, in);
    return cmd_decompose(problem, in);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return input_error;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return input_error;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return input_error;
  } catch (const InvalidDegree& e) {
    std::cerr << "error: " << e.what() << '\n';
    return input_error;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return partial;
  }
}
