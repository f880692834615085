#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hfix/core.hpp"
#include "hfix/fixpoint.hpp"
#include "hfix/harmonic.hpp"

namespace hfix {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

struct DocumentInput {
  std::optional<std::string> f, h, g, c;
  // canonical re-printing of each parsed expression, keyed like the inputs
  std::optional<std::string> f_canonical, h_canonical, g_canonical;
  std::string format = "table";
  std::optional<std::string> check;
};

struct ConjectureVerdict {
  bool applies = false;
  bool pass = true;
  std::string hypothesis;
  std::vector<std::size_t> witnesses;      // indices into h_fixed_points, Re >= 1
  std::vector<std::size_t> witnesses_le1;  // Re <= 1
};

struct RemarkVerdict {
  std::vector<std::size_t> le1;
  std::vector<ExtendedComplex> im_nonneg_h;
  std::vector<ExtendedComplex> im_nonneg_g;
  bool h_all_simple = true;
  bool g_all_simple = true;
};

struct PolynomialSumsVerdict {
  bool skipped = false;
  std::optional<Complex> multiplier_one_witness;
  std::optional<Complex> finite_index_sum;
  std::optional<double> real_part_sum;
  std::optional<double> imag_part_sum;
  std::vector<std::size_t> re_ge1, re_le1, im_nonneg;  // indices into fixed_points
  bool pass = true;
};

struct QuadraticVerdict {
  Complex c;
  bool single_point = false;
  bool re_exactly_one = false;
  bool c_real = false;
  bool c_real_ge_quarter = false;
  bool equivalence_holds = true;
};

struct Verdicts {
  std::optional<Complex> index_sum;
  std::optional<double> index_sum_deviation;
  std::optional<bool> index_sum_pass;
  std::optional<bool> index_oracle_pass;
  std::optional<double> index_oracle_max_deviation;
  std::optional<ConjectureVerdict> conjecture;
  std::optional<RemarkVerdict> remark;
  std::optional<PolynomialSumsVerdict> polynomial_sums;
  std::optional<QuadraticVerdict> quadratic;
};

struct Diagnostics {
  Tolerances tolerances;
  std::size_t iterations = 0;  // root-finder sweeps, summed over solves
  std::vector<std::string> warnings;
};

/// Everything one CLI invocation computed; serialised as the JSON output and
/// read back by `plot`.
struct AnalysisDocument {
  std::string schema_version = kSchemaVersion;
  std::string command;
  DocumentInput input;
  std::vector<FixedPoint> fixed_points;
  std::vector<HFixedPoint> h_fixed_points;
  Verdicts verdicts;
  Diagnostics diagnostics;
};

// ---- encoding -------------------------------------------------------------

inline json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline double json_double(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

inline Complex complex_from_json(const json& j) { return {json_double(j.at("re")), json_double(j.at("im"))}; }

inline json point_json(const ExtendedComplex& p) {
  return p.is_infinite() ? json("inf") : complex_json(p.value());
}

inline ExtendedComplex point_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") throw Error(ErrorCode::invalid_argument, "point must be {re, im} or \"inf\"");
    return ExtendedComplex::infinity();
  }
  return complex_from_json(j);
}

inline FixedPointClass class_from_string(const std::string& s) {
  for (auto c : {FixedPointClass::super_attracting, FixedPointClass::attracting, FixedPointClass::indifferent,
                 FixedPointClass::repelling})
    if (s == to_string(c)) return c;
  throw Error(ErrorCode::invalid_argument, "unknown classification '" + s + "'");
}

inline HFixedKind hkind_from_string(const std::string& s) {
  for (auto k : {HFixedKind::finite, HFixedKind::infinite_mu_fixed, HFixedKind::infinite_omega_fixed,
                 HFixedKind::infinite_both})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::invalid_argument, "unknown h-fixed point kind '" + s + "'");
}

inline json to_json_value(const FixedPoint& p) {
  return json{{"location", point_json(p.location)},
              {"multiplier", complex_json(p.multiplier)},
              {"multiplicity", p.multiplicity},
              {"index", complex_json(p.index)},
              {"class", to_string(p.classification)},
              {"weakly_repelling", p.weakly_repelling},
              {"simple", p.simple},
              {"multiplier_one", p.multiplier_one},
              {"rationally_indifferent", p.rationally_indifferent},
              {"rational_period", p.rational_period}};
}

inline FixedPoint fixed_point_from_json(const json& j) {
  FixedPoint p;
  p.location = point_from_json(j.at("location"));
  p.multiplier = complex_from_json(j.at("multiplier"));
  p.multiplicity = j.at("multiplicity").get<std::size_t>();
  p.index = complex_from_json(j.at("index"));
  p.classification = class_from_string(j.at("class").get<std::string>());
  p.weakly_repelling = j.at("weakly_repelling").get<bool>();
  p.simple = j.at("simple").get<bool>();
  p.multiplier_one = j.value("multiplier_one", false);
  p.rationally_indifferent = j.value("rationally_indifferent", false);
  p.rational_period = j.value("rational_period", 0);
  return p;
}

inline json to_json_value(const HFixedPoint& p) {
  return json{{"mu", point_json(p.mu)},
              {"omega", point_json(p.omega)},
              {"zeta", point_json(p.zeta)},
              {"lambda", complex_json(p.lambda)},
              {"theta", complex_json(p.theta)},
              {"kind", to_string(p.kind)},
              {"multiplicity", json::array({p.multiplicity_h, p.multiplicity_g})}};
}

inline HFixedPoint h_fixed_point_from_json(const json& j) {
  HFixedPoint p;
  p.mu = point_from_json(j.at("mu"));
  p.omega = point_from_json(j.at("omega"));
  p.zeta = point_from_json(j.at("zeta"));
  p.lambda = complex_from_json(j.at("lambda"));
  p.theta = complex_from_json(j.at("theta"));
  p.kind = hkind_from_string(j.at("kind").get<std::string>());
  if (j.contains("multiplicity")) {
    p.multiplicity_h = j["multiplicity"].at(0).get<std::size_t>();
    p.multiplicity_g = j["multiplicity"].at(1).get<std::size_t>();
  }
  return p;
}

inline json to_json_value(const Tolerances& t) {
  return json{{"root", t.root},
              {"cluster", t.cluster},
              {"multiplier_one", t.multiplier_one},
              {"index_agreement", t.index_agreement},
              {"sum_pass", t.sum_pass},
              {"super_attracting", t.super_attracting},
              {"unit_circle", t.unit_circle},
              {"rational_indifferent", t.rational_indifferent},
              {"rational_period_max", t.rational_period_max},
              {"identity", t.identity},
              {"contour", t.contour},
              {"contour_max_points", t.contour_max_points},
              {"max_sweeps", t.max_sweeps},
              {"fixed_residual", t.fixed_residual},
              {"witness", t.witness}};
}

inline Tolerances tolerances_from_json(const json& j) {
  Tolerances t;
  t.root = j.value("root", t.root);
  t.cluster = j.value("cluster", t.cluster);
  t.multiplier_one = j.value("multiplier_one", t.multiplier_one);
  t.index_agreement = j.value("index_agreement", t.index_agreement);
  t.sum_pass = j.value("sum_pass", t.sum_pass);
  t.super_attracting = j.value("super_attracting", t.super_attracting);
  t.unit_circle = j.value("unit_circle", t.unit_circle);
  t.rational_indifferent = j.value("rational_indifferent", t.rational_indifferent);
  t.rational_period_max = j.value("rational_period_max", t.rational_period_max);
  t.identity = j.value("identity", t.identity);
  t.contour = j.value("contour", t.contour);
  t.contour_max_points = j.value("contour_max_points", t.contour_max_points);
  t.max_sweeps = j.value("max_sweeps", t.max_sweeps);
  t.fixed_residual = j.value("fixed_residual", t.fixed_residual);
  t.witness = j.value("witness", t.witness);
  return t;
}

namespace detail {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

inline void put_optional(json& j, const char* key, const std::optional<Complex>& v) {
  if (v) j[key] = complex_json(*v);
}

inline std::optional<std::string> opt_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<std::string>();
}

inline std::optional<Complex> opt_complex(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return complex_from_json(j[key]);
}

inline std::optional<double> opt_double(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return json_double(j[key]);
}

inline std::vector<std::size_t> indices(const json& j, const char* key) {
  return j.contains(key) ? j[key].get<std::vector<std::size_t>>() : std::vector<std::size_t>{};
}

}  // namespace detail

inline json to_json(const AnalysisDocument& d) {
  json input = json::object();
  detail::put_optional(input, "f", d.input.f);
  detail::put_optional(input, "h", d.input.h);
  detail::put_optional(input, "g", d.input.g);
  detail::put_optional(input, "c", d.input.c);
  detail::put_optional(input, "f_canonical", d.input.f_canonical);
  detail::put_optional(input, "h_canonical", d.input.h_canonical);
  detail::put_optional(input, "g_canonical", d.input.g_canonical);
  json options{{"format", d.input.format}};
  detail::put_optional(options, "check", d.input.check);
  input["options"] = options;

  json fps = json::array();
  for (const auto& p : d.fixed_points) fps.push_back(to_json_value(p));
  json hfps = json::array();
  for (const auto& p : d.h_fixed_points) hfps.push_back(to_json_value(p));

  const Verdicts& v = d.verdicts;
  json verdicts = json::object();
  detail::put_optional(verdicts, "index_sum", v.index_sum);
  detail::put_optional(verdicts, "index_sum_deviation", v.index_sum_deviation);
  detail::put_optional(verdicts, "index_sum_pass", v.index_sum_pass);
  detail::put_optional(verdicts, "index_oracle_pass", v.index_oracle_pass);
  detail::put_optional(verdicts, "index_oracle_max_deviation", v.index_oracle_max_deviation);
  if (v.conjecture) {
    const auto& c = *v.conjecture;
    verdicts["conjecture"] = json{{"applies", c.applies},
                                  {"pass", c.pass},
                                  {"hypothesis", c.hypothesis},
                                  {"witnesses", c.witnesses},
                                  {"witnesses_le1", c.witnesses_le1}};
  }
  if (v.remark) {
    const auto& r = *v.remark;
    json h = json::array(), g = json::array();
    for (const auto& p : r.im_nonneg_h) h.push_back(point_json(p));
    for (const auto& p : r.im_nonneg_g) g.push_back(point_json(p));
    verdicts["remark"] = json{{"le1", r.le1},
                              {"im_nonneg_h", h},
                              {"im_nonneg_g", g},
                              {"h_all_simple", r.h_all_simple},
                              {"g_all_simple", r.g_all_simple}};
  }
  if (v.polynomial_sums) {
    const auto& s = *v.polynomial_sums;
    json j{{"skipped", s.skipped}};
    detail::put_optional(j, "multiplier_one_witness", s.multiplier_one_witness);
    detail::put_optional(j, "finite_index_sum", s.finite_index_sum);
    detail::put_optional(j, "real_part_sum", s.real_part_sum);
    detail::put_optional(j, "imag_part_sum", s.imag_part_sum);
    j["re_ge1"] = s.re_ge1;
    j["re_le1"] = s.re_le1;
    j["im_nonneg"] = s.im_nonneg;
    j["pass"] = s.pass;
    verdicts["polynomial_sums"] = j;
  }
  if (v.quadratic) {
    const auto& q = *v.quadratic;
    verdicts["quadratic"] = json{{"c", complex_json(q.c)},
                                 {"single_point", q.single_point},
                                 {"re_exactly_one", q.re_exactly_one},
                                 {"c_real", q.c_real},
                                 {"c_real_ge_quarter", q.c_real_ge_quarter},
                                 {"equivalence_holds", q.equivalence_holds}};
  }

  return json{{"schema_version", d.schema_version},
              {"command", d.command},
              {"input", input},
              {"fixed_points", fps},
              {"h_fixed_points", hfps},
              {"verdicts", verdicts},
              {"diagnostics",
               json{{"tolerances", to_json_value(d.diagnostics.tolerances)},
                    {"iterations", d.diagnostics.iterations},
                    {"warnings", d.diagnostics.warnings}}}};
}

inline AnalysisDocument document_from_json(const json& j) {
  AnalysisDocument d;
  d.schema_version = j.at("schema_version").get<std::string>();
  if (d.schema_version != kSchemaVersion)
    throw Error(ErrorCode::invalid_argument, "unsupported schema_version '" + d.schema_version + "'");
  d.command = j.value("command", std::string{});
  const json& in = j.at("input");
  d.input.f = detail::opt_string(in, "f");
  d.input.h = detail::opt_string(in, "h");
  d.input.g = detail::opt_string(in, "g");
  d.input.c = detail::opt_string(in, "c");
  d.input.f_canonical = detail::opt_string(in, "f_canonical");
  d.input.h_canonical = detail::opt_string(in, "h_canonical");
  d.input.g_canonical = detail::opt_string(in, "g_canonical");
  if (in.contains("options")) {
    d.input.format = in["options"].value("format", std::string{"table"});
    d.input.check = detail::opt_string(in["options"], "check");
  }
  for (const auto& p : j.at("fixed_points")) d.fixed_points.push_back(fixed_point_from_json(p));
  for (const auto& p : j.at("h_fixed_points")) d.h_fixed_points.push_back(h_fixed_point_from_json(p));

  const json& v = j.at("verdicts");
  d.verdicts.index_sum = detail::opt_complex(v, "index_sum");
  d.verdicts.index_sum_deviation = detail::opt_double(v, "index_sum_deviation");
  if (v.contains("index_sum_pass")) d.verdicts.index_sum_pass = v["index_sum_pass"].get<bool>();
  if (v.contains("index_oracle_pass")) d.verdicts.index_oracle_pass = v["index_oracle_pass"].get<bool>();
  d.verdicts.index_oracle_max_deviation = detail::opt_double(v, "index_oracle_max_deviation");
  if (v.contains("conjecture")) {
    const json& c = v["conjecture"];
    d.verdicts.conjecture = ConjectureVerdict{c.at("applies").get<bool>(), c.at("pass").get<bool>(),
                                              c.value("hypothesis", std::string{}), detail::indices(c, "witnesses"),
                                              detail::indices(c, "witnesses_le1")};
  }
  if (v.contains("remark")) {
    const json& r = v["remark"];
    RemarkVerdict rv;
    rv.le1 = detail::indices(r, "le1");
    for (const auto& p : r.at("im_nonneg_h")) rv.im_nonneg_h.push_back(point_from_json(p));
    for (const auto& p : r.at("im_nonneg_g")) rv.im_nonneg_g.push_back(point_from_json(p));
    rv.h_all_simple = r.value("h_all_simple", true);
    rv.g_all_simple = r.value("g_all_simple", true);
    d.verdicts.remark = rv;
  }
  if (v.contains("polynomial_sums")) {
    const json& s = v["polynomial_sums"];
    PolynomialSumsVerdict sv;
    sv.skipped = s.at("skipped").get<bool>();
    sv.multiplier_one_witness = detail::opt_complex(s, "multiplier_one_witness");
    sv.finite_index_sum = detail::opt_complex(s, "finite_index_sum");
    sv.real_part_sum = detail::opt_double(s, "real_part_sum");
    sv.imag_part_sum = detail::opt_double(s, "imag_part_sum");
    sv.re_ge1 = detail::indices(s, "re_ge1");
    sv.re_le1 = detail::indices(s, "re_le1");
    sv.im_nonneg = detail::indices(s, "im_nonneg");
    sv.pass = s.value("pass", true);
    d.verdicts.polynomial_sums = sv;
  }
  if (v.contains("quadratic")) {
    const json& q = v["quadratic"];
    d.verdicts.quadratic = QuadraticVerdict{complex_from_json(q.at("c")), q.at("single_point").get<bool>(),
                                            q.at("re_exactly_one").get<bool>(), q.at("c_real").get<bool>(),
                                            q.at("c_real_ge_quarter").get<bool>(),
                                            q.at("equivalence_holds").get<bool>()};
  }

  const json& dg = j.at("diagnostics");
  d.diagnostics.tolerances = tolerances_from_json(dg.at("tolerances"));
  d.diagnostics.iterations = dg.value("iterations", std::size_t{0});
  d.diagnostics.warnings = dg.value("warnings", std::vector<std::string>{});
  return d;
}

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace hfix
