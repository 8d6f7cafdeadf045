#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "wsos/exact.hpp"
#include "wsos/solver.hpp"

namespace wsos::io {

using Json = nlohmann::ordered_json;

/// {"num": "p", "den": "q", "decimal": p/q as a double}
Json to_json(const Rational& q);
Json to_json(const RVector& v);
Json to_json(const SosDecomposition& sos);
Json to_json(const ConvergenceConstants& k);

/// Accepts "p/q" strings, integers, and {"num", "den"} objects. Floating
/// point JSON numbers are rejected so that inputs stay exact.
Rational rational_from_json(const Json& j);
RVector vector_from_json(const Json& j);

/// Custom cone file: {U, block_dims, entries: [{block, row, col, coeff_index,
/// value_num, value_den}], one?, domain_point?, interior_point?}.
ConeOperator read_cone(const std::filesystem::path& path);
ConeOperator cone_from_json(const Json& j);
Json cone_to_json(const ConeOperator& cone);

struct Problem {
  std::shared_ptr<const ConeOperator> cone;
  RVector coeffs;
  SolverConfig solver;
  std::string cone_kind;
  std::size_t degree = 0;
};

/// Throws ParseError (or a more specific wsos::Error) on malformed input.
Problem read_problem(const std::filesystem::path& path);
Problem problem_from_json(const Json& j, const std::filesystem::path& base_dir = ".");

Json read_json(const std::filesystem::path& path);

}  // namespace wsos::io
