#include "wsos/io.hpp"

#include <fstream>

#include "wsos/errors.hpp"

namespace wsos::io {

Json to_json(const Rational& q) {
  Json j;
  j["num"] = q.get_num().get_str();
  j["den"] = q.get_den().get_str();
  j["decimal"] = nearest_double(q);
  return j;
}

Json to_json(const RVector& v) {
  Json j = Json::array();
  for (const auto& q : v) j.push_back(to_json(q));
  return j;
}

Json to_json(const SosDecomposition& sos) {
  Json j;
  j["bound"] = to_json(sos.bound);
  j["target"] = to_json(sos.target);
  Json terms = Json::array();
  for (const auto& t : sos.terms) {
    Json term;
    term["weight_index"] = t.weight_index;
    term["lambda"] = to_json(t.lambda);
    term["square"] = to_json(t.square);
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  return j;
}

Json to_json(const ConvergenceConstants& k) {
  Json j;
  j["rho_r"] = to_json(k.rho_r);
  j["k1"] = to_json(k.k1);
  j["k2"] = to_json(k.k2);
  j["k3"] = to_json(k.k3);
  j["nu"] = k.nu;
  j["one_norm"] = to_json(k.one_norm);
  j["C_lower"] = to_json(k.c_lower);
  j["provenance"] = {{"k1", to_string(k.k1_from)}, {"k2", to_string(k.k2_from)}, {"k3", to_string(k.k3_from)}};
  return j;
}

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()), 10);
    if (j.is_number_unsigned()) return Rational(std::to_string(j.get<unsigned long long>()), 10);
    if (j.is_object() && j.contains("num") && j.contains("den")) {
      Rational num = rational_from_json(j.at("num"));
      Rational den = rational_from_json(j.at("den"));
      if (den == 0) throw ParseError("zero denominator");
      Rational out = num / den;
      out.canonicalize();
      return out;
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad rational: ") + e.what());
  }
  throw ParseError("expected a rational as \"p/q\", an integer, or {num, den}; got " + j.dump());
}

RVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals");
  RVector out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(rational_from_json(item));
  return out;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

namespace {

std::size_t index_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0)
    throw ParseError(std::string("missing or invalid integer field '") + key + "'");
  return j.at(key).get<std::size_t>();
}

}  // namespace

ConeOperator cone_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("cone file must hold a JSON object");
  const std::size_t dim = index_field(j, "U");
  if (!j.contains("block_dims") || !j.at("block_dims").is_array()) throw ParseError("missing 'block_dims'");
  std::vector<std::size_t> dims;
  for (const auto& d : j.at("block_dims")) {
    if (!d.is_number_integer() || d.get<long long>() <= 0) throw ParseError("block sides must be positive integers");
    dims.push_back(d.get<std::size_t>());
  }
  if (!j.contains("entries") || !j.at("entries").is_array()) throw ParseError("missing 'entries'");
  std::vector<std::vector<TensorEntry>> entries(dims.size());
  for (const auto& e : j.at("entries")) {
    const std::size_t block = index_field(e, "block");
    if (block >= dims.size()) throw ParseError("entry refers to a missing block");
    TensorEntry t;
    t.row = index_field(e, "row");
    t.col = index_field(e, "col");
    t.coeff = index_field(e, "coeff_index");
    if (!e.contains("value_num")) throw ParseError("entry without 'value_num'");
    Json frac = {{"num", e.at("value_num")}, {"den", e.value("value_den", Json(1))}};
    t.value = rational_from_json(frac);
    entries[block].push_back(std::move(t));
  }
  Basis basis = Basis::custom;
  if (j.contains("basis")) basis = parse_basis(j.at("basis").get<std::string>());
  ConeOperator cone(dim, dims, std::move(entries), basis);
  if (j.contains("one")) cone.set_one(vector_from_json(j.at("one")));
  if (j.contains("domain_point")) cone.set_domain_point(vector_from_json(j.at("domain_point")));
  if (j.contains("interior_point")) cone.set_interior_hint(to_double(vector_from_json(j.at("interior_point"))));
  return cone;
}

Json cone_to_json(const ConeOperator& cone) {
  Json j;
  j["U"] = cone.dim();
  j["block_dims"] = cone.block_dims();
  j["basis"] = to_string(cone.basis());
  Json entries = Json::array();
  for (std::size_t i = 0; i < cone.num_blocks(); ++i)
    for (const auto& e : cone.entries(i))
      entries.push_back({{"block", i},
                         {"row", e.row},
                         {"col", e.col},
                         {"coeff_index", e.coeff},
                         {"value_num", e.value.get_num().get_str()},
                         {"value_den", e.value.get_den().get_str()}});
  j["entries"] = std::move(entries);
  Json one = Json::array();
  for (const auto& v : cone.one()) one.push_back(to_string(v));
  j["one"] = std::move(one);
  return j;
}

ConeOperator read_cone(const std::filesystem::path& path) { return cone_from_json(read_json(path)); }

Problem problem_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ParseError("problem file must hold a JSON object");
  Problem p;
  if (!j.contains("coeffs")) throw ParseError("missing 'coeffs'");
  p.coeffs = vector_from_json(j.at("coeffs"));

  const Json cone_spec = j.value("cone", Json("interval-even"));
  if (cone_spec.is_object()) {
    if (!cone_spec.contains("custom")) throw ParseError("cone object must be {\"custom\": path}");
    std::filesystem::path path = cone_spec.at("custom").get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    p.cone = std::make_shared<const ConeOperator>(read_cone(path));
    p.cone_kind = "custom";
  } else if (cone_spec.is_string()) {
    p.cone_kind = cone_spec.get<std::string>();
    if (!j.contains("basis")) throw ParseError("missing 'basis'");
    const Basis basis = parse_basis(j.at("basis").get<std::string>());
    if (basis == Basis::custom) throw ParseError("interval cones need basis monomial or chebyshev");
    if (!j.contains("degree") || !j.at("degree").is_number_integer() || j.at("degree").get<long long>() < 0)
      throw ParseError("missing or invalid 'degree'");
    p.degree = j.at("degree").get<std::size_t>();
    if (p.cone_kind == "interval-even") {
      if (p.degree % 2 != 0 || p.degree < 2) throw InvalidDegree("interval-even needs an even degree >= 2");
      p.cone = std::make_shared<const ConeOperator>(build_interval_cone(p.degree / 2, basis));
    } else if (p.cone_kind == "interval-odd") {
      if (p.degree % 2 != 1) throw InvalidDegree("interval-odd needs an odd degree");
      p.cone = std::make_shared<const ConeOperator>(build_interval_cone_odd((p.degree - 1) / 2, basis));
    } else {
      throw ParseError("unknown cone kind '" + p.cone_kind + "'");
    }
  } else {
    throw ParseError("'cone' must be a string or {\"custom\": path}");
  }
  if (p.coeffs.size() != p.cone->dim())
    throw DimensionMismatch("expected " + std::to_string(p.cone->dim()) + " coefficients, got " +
                            std::to_string(p.coeffs.size()));

  if (j.contains("solver")) {
    const Json& s = j.at("solver");
    if (!s.is_object()) throw ParseError("'solver' must be an object");
    if (s.contains("r")) p.solver.r = nearest_double(rational_from_json(s.at("r")));
    if (s.contains("epsilon")) p.solver.epsilon = nearest_double(rational_from_json(s.at("epsilon")));
    if (s.contains("C")) {
      const Json& c = s.at("C");
      if (c.is_string() && c.get<std::string>() == "auto") {
        p.solver.auto_C = true;
      } else if (c.is_null() || (c.is_string() && c.get<std::string>() == "none")) {
        p.solver.auto_C = false;
      } else {
        p.solver.C = nearest_double(rational_from_json(c));
      }
    }
    if (s.contains("max_iters")) {
      if (!s.at("max_iters").is_number_integer()) throw ParseError("'max_iters' must be an integer");
      p.solver.max_iters = s.at("max_iters").get<int>();
    }
  }
  return p;
}

Problem read_problem(const std::filesystem::path& path) {
  return problem_from_json(read_json(path), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace wsos::io
