#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "hfix/document.hpp"
#include "hfix/expr.hpp"
#include "hfix/fixpoint.hpp"
#include "hfix/harmonic.hpp"
#include "hfix/svg.hpp"

namespace hfix {

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

namespace cli {

inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kUsage = 2;

/// Thrown for bad input; carries the exit code and message for stderr.
struct UsageError {
  std::string message;
};

inline std::string fmt_complex(Complex z) {
  const double scale = std::max(1.0, std::abs(z));
  const double re = std::abs(z.real()) < 1e-12 * scale ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 1e-12 * scale ? 0.0 : z.imag();
  char buf[80];
  if (im == 0.0)
    std::snprintf(buf, sizeof buf, "%.10g", re);
  else if (re == 0.0)
    std::snprintf(buf, sizeof buf, "%.10gi", im);
  else
    std::snprintf(buf, sizeof buf, "%.10g%+.10gi", re, im);
  return buf;
}

inline std::string fmt_point(const ExtendedComplex& p) { return p.is_infinite() ? "inf" : fmt_complex(p.value()); }

inline std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

inline std::string csv_complex(Complex z) { return format_number(z.real()) + "," + format_number(z.imag()); }

inline std::string csv_point(const ExtendedComplex& p) { return p.is_infinite() ? "inf," : csv_complex(p.value()); }

inline FunctionExpr parse_option(const std::string& flag, const std::string& text) {
  try {
    return parse_function_expr(text);
  } catch (const ParseError& e) {
    std::string msg = "cannot parse " + flag + " at offset " + std::to_string(e.offset()) + ": " + e.message() +
                      "\n  " + text + "\n  " + std::string(std::min(e.offset(), text.size()), ' ') + "^";
    throw UsageError{msg};
  }
}

// ---- document builders ----------------------------------------------------

inline void fill_fixed_points(AnalysisDocument& doc, const FixedPointReport& r, const Tolerances& tol) {
  doc.fixed_points = r.points;
  doc.verdicts.index_sum = r.index_sum;
  doc.verdicts.index_sum_deviation = r.index_sum_deviation;
  doc.verdicts.index_sum_pass = r.index_sum_deviation <= tol.sum_pass;
  doc.diagnostics.iterations += r.solver_sweeps;
  doc.diagnostics.warnings.insert(doc.diagnostics.warnings.end(), r.warnings.begin(), r.warnings.end());
}

inline AnalysisDocument analyze_document(const std::string& f_text, const Tolerances& tol, const std::string& format) {
  AnalysisDocument doc;
  doc.command = "analyze";
  doc.input.f = f_text;
  doc.input.format = format;
  doc.diagnostics.tolerances = tol;
  const FunctionExpr f = parse_option("--f", f_text);
  doc.input.f_canonical = format_function(f.value);
  fill_fixed_points(doc, fixed_points(f.value, tol), tol);
  return doc;
}

inline AnalysisDocument verify_document(const std::string& f_text, const Tolerances& tol, const std::string& format) {
  AnalysisDocument doc = analyze_document(f_text, tol, format);
  doc.command = "verify";
  const RationalMap map = parse_function(f_text);

  double worst = 0.0;
  for (const auto& p : doc.fixed_points) {
    if (std::abs(p.multiplier - 1.0) <= tol.multiplier_one) continue;
    Complex contour;
    if (p.location.is_infinite()) {
      const RationalMap chart = inversion_chart(map);
      contour = residue_index_contour(chart, 0.0, default_contour_radius(chart, 0.0, tol), 64, tol);
    } else {
      const Complex z = p.location.value();
      contour = residue_index_contour(map, z, default_contour_radius(map, z, tol), 64, tol);
    }
    worst = std::max(worst, std::abs(contour - 1.0 / (1.0 - p.multiplier)));
  }
  doc.verdicts.index_oracle_max_deviation = worst;
  doc.verdicts.index_oracle_pass = worst <= tol.index_agreement;

  if (map.is_polynomial() && map.degree() >= 2) {
    const PolynomialSumsReport s = verify_polynomial_sums(map.num(), tol);
    PolynomialSumsVerdict v;
    v.skipped = s.skipped;
    v.multiplier_one_witness = s.multiplier_one_witness;
    if (!s.skipped) {
      v.finite_index_sum = s.finite_index_sum;
      v.real_part_sum = s.real_part_sum;
      v.imag_part_sum = s.imag_part_sum;
      v.pass = std::abs(s.finite_index_sum) <= tol.index_agreement && std::abs(s.real_part_sum) <= tol.index_agreement &&
               std::abs(s.imag_part_sum) <= tol.index_agreement;
    }
    v.re_ge1 = s.re_ge1;
    v.re_le1 = s.re_le1;
    v.im_nonneg = s.im_nonneg;
    doc.verdicts.polynomial_sums = v;
  }
  return doc;
}

inline AnalysisDocument harmonic_document(const std::string& h_text, const std::string& g_text,
                                          const std::string& check, const Tolerances& tol, const std::string& format) {
  AnalysisDocument doc;
  doc.command = "harmonic";
  doc.input.h = h_text;
  doc.input.g = g_text;
  doc.input.format = format;
  doc.input.check = check;
  doc.diagnostics.tolerances = tol;
  const FunctionExpr h = parse_option("--h", h_text);
  const FunctionExpr g = parse_option("--g", g_text);
  doc.input.h_canonical = format_function(h.value);
  doc.input.g_canonical = format_function(g.value);
  const HarmonicMap f{h.value, g.value};

  const FixedPointReport hr = fixed_points(f.h, tol);
  const FixedPointReport gr = fixed_points(f.g, tol);
  doc.diagnostics.iterations = hr.solver_sweeps + gr.solver_sweeps;
  for (const auto& w : hr.warnings) doc.diagnostics.warnings.push_back("h: " + w);
  for (const auto& w : gr.warnings) doc.diagnostics.warnings.push_back("g: " + w);
  doc.h_fixed_points = induced_h_fixed_points(hr, gr);

  auto index_of = [&](const HFixedPoint& p) {
    for (std::size_t k = 0; k < doc.h_fixed_points.size(); ++k) {
      const auto& q = doc.h_fixed_points[k];
      if (q.mu == p.mu && q.omega == p.omega) return k;
    }
    return doc.h_fixed_points.size();
  };

  if (f.kind() == HarmonicKind::low_degree) {
    doc.diagnostics.warnings.push_back("deg h or deg g below 2: conjecture and remark checks skipped");
    return doc;
  }
  if (check == "conjecture" || check == "all") {
    const ConjectureReport c = conjecture_witness(f, hr, gr, tol);
    ConjectureVerdict v{c.theorem_applies, c.pass, c.hypothesis, {}, {}};
    for (const auto& p : c.witnesses_ge1) v.witnesses.push_back(index_of(p));
    for (const auto& p : c.witnesses_le1) v.witnesses_le1.push_back(index_of(p));
    doc.verdicts.conjecture = v;
  }
  if (check == "remark" || check == "all") {
    const RemarkReport r = remark_witnesses(f, hr, gr, tol);
    RemarkVerdict v;
    for (const auto& p : r.le1) v.le1.push_back(index_of(p));
    for (const auto& p : r.im_nonneg_h) v.im_nonneg_h.push_back(p.location);
    for (const auto& p : r.im_nonneg_g) v.im_nonneg_g.push_back(p.location);
    v.h_all_simple = r.h_all_simple;
    v.g_all_simple = r.g_all_simple;
    doc.verdicts.remark = v;
  }
  return doc;
}

inline AnalysisDocument quadratic_document(const std::string& c_text, const Tolerances& tol, const std::string& format) {
  AnalysisDocument doc;
  doc.command = "quadratic";
  doc.input.c = c_text;
  doc.input.format = format;
  doc.diagnostics.tolerances = tol;
  const FunctionExpr ce = parse_option("--c", c_text);
  if (ce.kind != FunctionKind::polynomial || !ce.value.num().is_constant())
    throw UsageError{"--c must be a complex constant such as \"0.25\" or \"1+2i\""};
  const Complex c = ce.value.num().coeff(0);

  const QuadraticReport q = quadratic_family_analyze(c);
  const RationalMap p = RationalMap::polynomial(Polynomial({c, 0.0, 1.0}));
  for (std::size_t k = 0; k < q.fixed_points.size(); ++k) {
    FixedPoint fp = make_fixed_point(q.fixed_points[k], q.multipliers[k], q.multiplicities[k], tol);
    fp.index = residue_index(p, fp, tol);
    doc.fixed_points.push_back(fp);
  }
  doc.h_fixed_points = q.h_fixed_points;
  doc.verdicts.quadratic =
      QuadraticVerdict{c, q.single_point, q.re_exactly_one, q.c_real, q.c_real_ge_quarter, q.equivalence_holds};

  // Cross-check the closed forms against the generic pipeline.
  const FixedPointReport generic = fixed_points(p, tol);
  doc.diagnostics.iterations = generic.solver_sweeps;
  std::size_t finite = 0;
  for (const auto& g : generic.points) {
    if (g.location.is_infinite()) continue;
    ++finite;
    double best = INFINITY;
    for (std::size_t k = 0; k < q.fixed_points.size(); ++k)
      best = std::min(best, std::abs(g.location.value() - q.fixed_points[k]) + std::abs(g.multiplier - q.multipliers[k]));
    if (best > 1e-10)
      doc.diagnostics.warnings.push_back("closed form and root finder disagree at " + fmt_point(g.location));
  }
  if (finite != q.fixed_points.size())
    doc.diagnostics.warnings.push_back("closed form and root finder report different numbers of fixed points");
  return doc;
}

inline int exit_code_for(const AnalysisDocument& doc) {
  const Verdicts& v = doc.verdicts;
  if (v.index_sum_pass && !*v.index_sum_pass) return kVerificationFailed;
  if (v.index_oracle_pass && !*v.index_oracle_pass) return kVerificationFailed;
  if (v.polynomial_sums && !v.polynomial_sums->pass) return kVerificationFailed;
  if (v.conjecture && !v.conjecture->pass) return kVerificationFailed;
  if (v.quadratic && !v.quadratic->equivalence_holds) return kVerificationFailed;
  return kOk;
}

// ---- rendering --------------------------------------------------------------

inline std::string yes(bool b) { return b ? "yes" : "no"; }

inline std::string fixed_point_table(const std::vector<FixedPoint>& pts) {
  std::string s = pad("id", 7) + pad("location", 28) + pad("multiplier", 28) + pad("m", 4) + pad("index", 28) +
                  pad("class", 18) + "flags\n";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& p = pts[k];
    std::string flags = p.simple ? "simple" : "multiple";
    if (p.weakly_repelling) flags += " weakly-repelling";
    if (p.multiplier_one) flags += " multiplier-one";
    if (p.rationally_indifferent) flags += " rationally-indifferent(k=" + std::to_string(p.rational_period) + ")";
    s += pad("fp-" + std::to_string(k), 7) + pad(fmt_point(p.location), 28) + pad(fmt_complex(p.multiplier), 28) +
         pad(std::to_string(p.multiplicity), 4) + pad(fmt_complex(p.index), 28) +
         pad(to_string(p.classification), 18) + flags + "\n";
  }
  return s;
}

inline std::string table(const AnalysisDocument& doc) {
  std::string s;
  const Verdicts& v = doc.verdicts;
  if (doc.command == "analyze" || doc.command == "verify") {
    s += "f(z) = " + doc.input.f_canonical.value_or("") + "\n";
    std::size_t msum = 0;
    for (const auto& p : doc.fixed_points) msum += p.multiplicity;
    s += std::to_string(doc.fixed_points.size()) + " fixed points, multiplicity sum " + std::to_string(msum) + "\n";
    s += fixed_point_table(doc.fixed_points);
    if (v.index_sum)
      s += "index sum: " + fmt_complex(*v.index_sum) + "  |sum - 1| = " + format_number(*v.index_sum_deviation) +
           "  " + (*v.index_sum_pass ? "PASS" : "FAIL") + "\n";
    if (v.index_oracle_pass)
      s += "contour vs 1/(1-lambda): max deviation " + format_number(*v.index_oracle_max_deviation) + "  " +
           (*v.index_oracle_pass ? "PASS" : "FAIL") + "\n";
    if (v.polynomial_sums) {
      const auto& ps = *v.polynomial_sums;
      if (ps.skipped) {
        s += "polynomial sums skipped: multiple fixed point with multiplier 1 at " +
             fmt_complex(*ps.multiplier_one_witness) + "\n";
      } else {
        s += "sum 1/(1-l) = " + fmt_complex(*ps.finite_index_sum) + "\n";
        s += "sum (1-Re l)/|1-l|^2 = " + format_number(*ps.real_part_sum) + "\n";
        s += "sum Im l/|1-l|^2 = " + format_number(*ps.imag_part_sum) + "\n";
        s += std::string("polynomial sums: ") + (ps.pass ? "PASS" : "FAIL") + "\n";
      }
    }
  } else if (doc.command == "harmonic") {
    s += "h(z) = " + doc.input.h_canonical.value_or("") + "\n";
    s += "g(z) = " + doc.input.g_canonical.value_or("") + "\n";
    std::size_t finite = 0;
    for (const auto& p : doc.h_fixed_points) finite += p.kind == HFixedKind::finite;
    s += std::to_string(finite) + " finite h-fixed points, " + std::to_string(doc.h_fixed_points.size() - finite) +
         " infinite\n";
    std::vector<bool> ge1(doc.h_fixed_points.size(), false);
    if (v.conjecture)
      for (auto k : v.conjecture->witnesses) ge1[k] = true;
    s += pad("id", 8) + pad("zeta", 22) + pad("mu", 22) + pad("omega", 22) + pad("lambda", 22) + pad("theta", 22) +
         pad("kind", 22) + "witness\n";
    for (std::size_t k = 0; k < doc.h_fixed_points.size(); ++k) {
      const auto& p = doc.h_fixed_points[k];
      s += pad("hfp-" + std::to_string(k), 8) + pad(fmt_point(p.zeta), 22) + pad(fmt_point(p.mu), 22) +
           pad(fmt_point(p.omega), 22) + pad(fmt_complex(p.lambda), 22) + pad(fmt_complex(p.theta), 22) +
           pad(to_string(p.kind), 22) + (ge1[k] ? "Re>=1" : "") + "\n";
    }
    if (v.conjecture) {
      const auto& c = *v.conjecture;
      s += "conjecture: hypothesis " + std::string(c.applies ? "met (" + c.hypothesis + ")" : "not met") + "; " +
           std::to_string(c.witnesses.size()) + " witnesses with Re(lambda) >= 1 and Re(theta) >= 1";
      if (!c.witnesses.empty()) {
        s += " at zeta =";
        for (auto k : c.witnesses) s += " " + fmt_point(doc.h_fixed_points[k].zeta);
      }
      s += std::string("; ") + (c.applies ? (c.pass ? "PASS" : "FAIL") : "no claim") + "\n";
    }
    if (v.remark) {
      const auto& r = *v.remark;
      s += "remark: " + std::to_string(r.le1.size()) + " h-fixed points with Re(lambda) <= 1 and Re(theta) <= 1\n";
      s += "remark: h fixed points with Im(multiplier) >= 0: " +
           (r.h_all_simple ? std::to_string(r.im_nonneg_h.size()) : std::string("n/a (multiple fixed point)")) +
           "; g: " +
           (r.g_all_simple ? std::to_string(r.im_nonneg_g.size()) : std::string("n/a (multiple fixed point)")) + "\n";
    }
  } else if (doc.command == "quadratic") {
    const auto& q = *v.quadratic;
    s += "P(z) = z^2 + c + conj(z^2 + c),  c = " + fmt_complex(q.c) + "\n";
    if (q.single_point)
      s += "single h-fixed point, multiplier 1\n";
    else
      s += "two simple fixed points of z^2 + c\n";
    s += fixed_point_table(doc.fixed_points);
    s += "h-fixed points:\n";
    for (std::size_t k = 0; k < doc.h_fixed_points.size(); ++k) {
      const auto& p = doc.h_fixed_points[k];
      s += "  hfp-" + std::to_string(k) + "  zeta = " + fmt_point(p.zeta) + "  lambda = " + fmt_complex(p.lambda) +
           "  theta = " + fmt_complex(p.theta) + "\n";
    }
    s += "all multipliers have real part 1: " + yes(q.re_exactly_one) + "\n";
    s += "c real and c >= 1/4: " + yes(q.c_real_ge_quarter) + "\n";
    if (q.c_real) s += std::string("equivalence: ") + (q.equivalence_holds ? "holds" : "VIOLATED") + "\n";
  }
  for (const auto& w : doc.diagnostics.warnings) s += "warning: " + w + "\n";
  return s;
}

inline std::string csv(const AnalysisDocument& doc) {
  std::string s;
  if (!doc.fixed_points.empty()) {
    s += "id,location_re,location_im,multiplier_re,multiplier_im,multiplicity,index_re,index_im,class,"
         "weakly_repelling,simple\n";
    for (std::size_t k = 0; k < doc.fixed_points.size(); ++k) {
      const auto& p = doc.fixed_points[k];
      s += "fp-" + std::to_string(k) + "," + csv_point(p.location) + "," + csv_complex(p.multiplier) + "," +
           std::to_string(p.multiplicity) + "," + csv_complex(p.index) + "," + to_string(p.classification) + "," +
           (p.weakly_repelling ? "true" : "false") + "," + (p.simple ? "true" : "false") + "\n";
    }
  }
  if (!doc.h_fixed_points.empty()) {
    if (!s.empty()) s += "\n";
    s += "id,zeta_re,zeta_im,mu_re,mu_im,omega_re,omega_im,lambda_re,lambda_im,theta_re,theta_im,kind\n";
    for (std::size_t k = 0; k < doc.h_fixed_points.size(); ++k) {
      const auto& p = doc.h_fixed_points[k];
      s += "hfp-" + std::to_string(k) + "," + csv_point(p.zeta) + "," + csv_point(p.mu) + "," + csv_point(p.omega) +
           "," + csv_complex(p.lambda) + "," + csv_complex(p.theta) + "," + to_string(p.kind) + "\n";
    }
  }
  if (doc.verdicts.index_sum) {
    s += "\nverdict,re,im,pass\n";
    s += "index_sum," + csv_complex(*doc.verdicts.index_sum) + "," +
         (*doc.verdicts.index_sum_pass ? "true" : "false") + "\n";
  }
  return s;
}

inline std::string render(const AnalysisDocument& doc, const std::string& format) {
  if (format == "json") return to_json(doc).dump(2) + "\n";
  if (format == "csv") return csv(doc);
  return table(doc);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError{"cannot write " + path};
  f << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError{"cannot read " + path};
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---- batch ------------------------------------------------------------------

inline Complex unit_disk_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const Complex z{u(rng), u(rng)};
    if (std::norm(z) <= 1.0) return z;
  }
}

inline std::vector<std::string> random_expressions(std::size_t n, std::uint64_t seed, std::size_t degree,
                                                   bool rational) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  auto poly = [&](std::size_t d) {
    std::vector<Complex> c(d + 1);
    for (auto& a : c) a = unit_disk_sample(rng);
    while (std::abs(c[d]) < 1e-3) c[d] = unit_disk_sample(rng);
    return Polynomial(std::move(c));
  };
  while (out.size() < n) {
    const Polynomial num = poly(degree);
    const RationalMap m = rational ? RationalMap(num, poly(degree)) : RationalMap::polynomial(num);
    const Polynomial f = m.fixed_point_polynomial();
    if (f.max_abs_coeff() <= 1e-6 * std::max(m.num().max_abs_coeff(), m.den().max_abs_coeff())) continue;
    out.push_back(format_function(m));
  }
  return out;
}

struct BatchEntry {
  std::string expr;
  std::optional<AnalysisDocument> doc;
  std::string error;
  int exit_code = kOk;
};

inline std::vector<BatchEntry> run_batch(const std::vector<std::string>& exprs, const Tolerances& tol) {
  std::vector<BatchEntry> entries(exprs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < exprs.size();) {
      BatchEntry& e = entries[k];
      e.expr = exprs[k];
      try {
        e.doc = analyze_document(exprs[k], tol, "json");
        e.exit_code = exit_code_for(*e.doc);
      } catch (const UsageError& u) {
        e.error = u.message;
        e.exit_code = kUsage;
      } catch (const Error& x) {
        e.error = x.what();
        const bool usage = x.code() == ErrorCode::identity_map || x.code() == ErrorCode::degree_too_low;
        e.exit_code = usage ? kUsage : kVerificationFailed;
      }
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::min<std::size_t>(8, exprs.size() + 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return entries;
}

}  // namespace cli

/// Runs one CLI invocation. `args` excludes the program name. Output is a
/// deterministic function of `args` (and of files named in them).
inline CommandResult run_command(const std::vector<std::string>& args) {
  using namespace cli;
  CommandResult res;
  std::ostringstream out, err;

  CLI::App app{"Fixed points of rational maps and h-fixed points of harmonic maps f = h + conj(g)", "hfix"};
  app.require_subcommand(1, 1);

  std::string format = "table";
  std::string f_text, h_text, g_text, c_text, check = "all", svg_out, json_in, batch_file;
  Tolerances tol;
  std::size_t random_n = 0, degree = 3;
  std::uint64_t seed = 1;
  bool rational = false;

  auto common = [&](CLI::App* sub, bool svg) {
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"table", "json", "csv"}));
    sub->add_option("--tol-root", tol.root, "root-finder correction tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-cluster", tol.cluster, "root clustering radius (relative)")->check(CLI::PositiveNumber);
    sub->add_option("--tol-one", tol.multiplier_one, "|lambda - 1| band for multiplier one")
        ->check(CLI::PositiveNumber);
    if (svg) sub->add_option("--out", svg_out, "also write an SVG plot to FILE");
  };

  auto* analyze = app.add_subcommand("analyze", "fixed points, multipliers and indices of a rational map");
  analyze->add_option("--f", f_text, "rational map in z")->required();
  common(analyze, true);

  auto* verify = app.add_subcommand("verify", "index-sum theorem, index oracle and polynomial identities");
  verify->add_option("--f", f_text, "rational map in z")->required();
  common(verify, true);

  auto* harmonic = app.add_subcommand("harmonic", "induced h-fixed points of f = h + conj(g)");
  harmonic->set_help_flag("--help", "Print this help message and exit");
  harmonic->add_option("--h", h_text, "analytic part h")->required();
  harmonic->add_option("--g", g_text, "co-analytic part g")->required();
  harmonic->add_option("--check", check, "which checks to run")->check(CLI::IsMember({"conjecture", "remark", "all"}));
  common(harmonic, true);

  auto* quadratic = app.add_subcommand("quadratic", "closed-form analysis of z^2 + c + conj(z^2 + c)");
  quadratic->add_option("--c", c_text, "complex parameter, \"a+bi\" or \"a\"")->required();
  common(quadratic, true);

  auto* plot = app.add_subcommand("plot", "render a JSON document from another command as SVG");
  plot->add_option("--in", json_in, "JSON document")->required();
  plot->add_option("--out", svg_out, "SVG output file (default stdout)");

  auto* batch = app.add_subcommand("batch", "analyze many maps");
  batch->add_option("--file", batch_file, "newline-delimited expressions ('#' starts a comment line)");
  batch->add_option("--random", random_n, "generate N random maps instead of reading a file");
  batch->add_option("--seed", seed, "generator seed");
  batch->add_option("--degree", degree, "degree of generated maps")->check(CLI::Range(1, 64));
  batch->add_flag("--rational", rational, "generate rational maps instead of polynomials");
  common(batch, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    res.exit_code = code == 0 ? kOk : kUsage;
    res.out = out.str();
    res.err = err.str();
    return res;
  }

  try {
    std::optional<AnalysisDocument> doc;
    if (analyze->parsed()) doc = analyze_document(f_text, tol, format);
    if (verify->parsed()) doc = verify_document(f_text, tol, format);
    if (harmonic->parsed()) doc = harmonic_document(h_text, g_text, check, tol, format);
    if (quadratic->parsed()) doc = quadratic_document(c_text, tol, format);

    if (doc) {
      out << render(*doc, format);
      if (!svg_out.empty()) write_file(svg_out, render_plot(*doc));
      res.exit_code = exit_code_for(*doc);
    } else if (plot->parsed()) {
      AnalysisDocument d;
      try {
        d = document_from_json(json::parse(read_file(json_in)));
      } catch (const json::exception& e) {
        throw UsageError{"invalid document " + json_in + ": " + e.what()};
      }
      const std::string svg = render_plot(d);
      if (svg_out.empty())
        out << svg;
      else
        write_file(svg_out, svg);
    } else if (batch->parsed()) {
      std::vector<std::string> exprs;
      if (random_n > 0) {
        exprs = random_expressions(random_n, seed, degree, rational);
      } else if (!batch_file.empty()) {
        std::istringstream in(read_file(batch_file));
        for (std::string line; std::getline(in, line);) {
          const auto first = line.find_first_not_of(" \t\r");
          if (first == std::string::npos || line[first] == '#') continue;
          if (line.back() == '\r') line.pop_back();
          exprs.push_back(line);
        }
      } else {
        throw UsageError{"batch needs --file FILE or --random N"};
      }
      const auto entries = run_batch(exprs, tol);
      int code = kOk;
      for (const auto& e : entries) code = std::max(code, e.exit_code);
      if (format == "json") {
        json docs = json::array();
        for (const auto& e : entries) {
          if (e.doc) {
            json j = to_json(*e.doc);
            j["input"]["options"]["format"] = format;
            docs.push_back(j);
          } else {
            docs.push_back(json{{"input", json{{"f", e.expr}}}, {"error", e.error}});
          }
        }
        json j{{"schema_version", kSchemaVersion},
               {"command", "batch"},
               {"input",
                json{{"file", batch_file}, {"random", random_n}, {"seed", seed}, {"degree", degree},
                     {"rational", rational}}},
               {"documents", docs},
               {"diagnostics", json{{"tolerances", to_json_value(tol)}}}};
        out << j.dump(2) << "\n";
      } else if (format == "csv") {
        out << "id,f,fixed_points,index_sum_re,index_sum_im,deviation,pass,error\n";
        for (std::size_t k = 0; k < entries.size(); ++k) {
          const auto& e = entries[k];
          out << k << ",\"" << e.expr << "\",";
          if (e.doc) {
            const auto& v = e.doc->verdicts;
            out << e.doc->fixed_points.size() << "," << csv_complex(*v.index_sum) << ","
                << format_number(*v.index_sum_deviation) << "," << (*v.index_sum_pass ? "true" : "false") << ",\n";
          } else {
            std::string msg = e.error;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            out << ",,,,false,\"" << msg << "\"\n";
          }
        }
      } else {
        for (std::size_t k = 0; k < entries.size(); ++k) {
          const auto& e = entries[k];
          out << pad(std::to_string(k), 6);
          if (e.doc) {
            const auto& v = e.doc->verdicts;
            out << pad(std::to_string(e.doc->fixed_points.size()) + " points", 11) << "index sum "
                << pad(fmt_complex(*v.index_sum), 26) << (*v.index_sum_pass ? "PASS  " : "FAIL  ") << e.expr << "\n";
          } else {
            out << "error: " << e.error << "  [" << e.expr << "]\n";
          }
        }
      }
      res.exit_code = code;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.message << "\n";
    res.exit_code = kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::no_convergence:
      case ErrorCode::pole_on_contour:
      case ErrorCode::indeterminate:
        res.exit_code = kVerificationFailed;
        break;
      default:
        res.exit_code = kUsage;
    }
  }
  res.out = out.str();
  res.err = err.str();
  return res;
}

}  // namespace hfix
