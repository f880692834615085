#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hfix/core.hpp"
#include "hfix/poly.hpp"
#include "hfix/roots.hpp"

namespace hfix {

enum class FixedPointClass { super_attracting, attracting, indifferent, repelling };

inline const char* to_string(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::super_attracting: return "super-attracting";
    case FixedPointClass::attracting: return "attracting";
    case FixedPointClass::indifferent: return "indifferent";
    case FixedPointClass::repelling: return "repelling";
  }
  return "?";
}

struct MultiplierClass {
  FixedPointClass kind = FixedPointClass::indifferent;
  bool weakly_repelling = false;
  bool multiplier_one = false;
  bool rationally_indifferent = false;
  int rational_period = 0;  // smallest k with lambda^k ~ 1, or 0
};

inline MultiplierClass classify_multiplier(Complex lambda, const Tolerances& tol = {}) {
  MultiplierClass out;
  const double r = std::abs(lambda);
  if (r <= tol.super_attracting)
    out.kind = FixedPointClass::super_attracting;
  else if (r < 1.0 - tol.unit_circle)
    out.kind = FixedPointClass::attracting;
  else if (r > 1.0 + tol.unit_circle)
    out.kind = FixedPointClass::repelling;
  else
    out.kind = FixedPointClass::indifferent;

  out.multiplier_one = std::abs(lambda - 1.0) <= tol.multiplier_one;
  out.weakly_repelling = out.kind == FixedPointClass::repelling || out.multiplier_one;

  if (out.kind == FixedPointClass::indifferent) {
    Complex power = 1.0;
    for (int k = 1; k <= tol.rational_period_max; ++k) {
      power *= lambda;
      if (std::abs(power - 1.0) <= tol.rational_indifferent) {
        out.rationally_indifferent = true;
        out.rational_period = k;
        break;
      }
    }
  }
  return out;
}

struct FixedPoint {
  ExtendedComplex location;
  Complex multiplier;
  std::size_t multiplicity = 1;
  Complex index;
  FixedPointClass classification = FixedPointClass::indifferent;
  bool weakly_repelling = false;
  bool simple = true;
  bool multiplier_one = false;
  bool rationally_indifferent = false;
  int rational_period = 0;
};

struct FixedPointReport {
  RationalMap map;
  std::vector<FixedPoint> points;
  Complex index_sum;
  double index_sum_deviation = 0.0;
  std::size_t solver_sweeps = 0;
  bool solver_converged = true;
  std::vector<std::string> warnings;

  std::size_t total_multiplicity() const {
    std::size_t n = 0;
    for (const auto& p : points) n += p.multiplicity;
    return n;
  }
};

namespace detail {

inline void require_nondegenerate(const RationalMap& map, const Tolerances& tol) {
  if (map.num().is_zero() || map.degree() < 1)
    throw Error(ErrorCode::degree_too_low, "constant map: fixed-point analysis needs degree >= 1");
  const Polynomial f = map.fixed_point_polynomial();
  const double scale = std::max(map.num().max_abs_coeff(), map.den().max_abs_coeff());
  if (f.max_abs_coeff() <= tol.identity * scale)
    throw Error(ErrorCode::identity_map, "identity map excluded: every point is fixed");
}

inline std::string format_complex_short(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

}  // namespace detail

/// Multiplicity of infinity as a fixed point, read off the inversion chart:
/// the order of vanishing at 0 of chart_num(w) - w chart_den(w). Coefficients
/// below tol.identity relative to the largest one count as zero.
inline std::size_t infinity_multiplicity(const RationalMap& map, const Tolerances& tol = {}) {
  if (!map.fixes_infinity()) return 0;
  const RationalMap chart = inversion_chart(map);
  const Polynomial g = chart.fixed_point_polynomial();
  const double cut = tol.identity * g.max_abs_coeff();
  std::size_t m = 0;
  while (m < g.size() && std::abs(g.coeff(m)) <= cut) ++m;
  return m;
}

namespace detail {

/// R'(z) by the quotient rule on point values. Expanding N'D - ND' into a
/// polynomial first loses digits wherever |D(z)| is small.
inline Complex multiplier_value(const RationalMap& map, Complex z) {
  const Complex dz = map.den()(z);
  if (dz == Complex{}) return {std::numeric_limits<double>::infinity(), 0.0};
  return (map.num().derivative()(z) * dz - map.num()(z) * map.den().derivative()(z)) / (dz * dz);
}

}  // namespace detail

inline Complex multiplier_at(const RationalMap& map, const ExtendedComplex& location,
                             const Tolerances& tol = {}) {
  if (location.is_infinite()) {
    if (!map.fixes_infinity())
      throw Error(ErrorCode::not_a_fixed_point, "infinity is not fixed: deg num <= deg den");
    if (map.num_degree() >= map.den_degree() + 2) return 0.0;
    return map.den().leading() / map.num().leading();
  }
  const Complex z = location.value();
  const ExtendedComplex image = evaluate(map, z);
  if (image.is_infinite() || std::abs(image.value() - z) > tol.fixed_residual * (1.0 + std::abs(z)))
    throw Error(ErrorCode::not_a_fixed_point, "point " + detail::format_complex_short(z) + " is not fixed");
  return detail::multiplier_value(map, z);
}

inline std::size_t multiplicity_at(const RationalMap& map, const ExtendedComplex& location,
                                   const Tolerances& tol = {}) {
  detail::require_nondegenerate(map, tol);
  if (location.is_infinite()) {
    const std::size_t m = infinity_multiplicity(map, tol);
    if (m == 0) throw Error(ErrorCode::not_a_fixed_point, "infinity is not fixed: deg num <= deg den");
    return m;
  }
  const Complex z = location.value();
  const ExtendedComplex image = evaluate(map, z);
  if (image.is_infinite() || std::abs(image.value() - z) > tol.fixed_residual * (1.0 + std::abs(z)))
    throw Error(ErrorCode::not_a_fixed_point, "point " + detail::format_complex_short(z) + " is not fixed");
  const Polynomial f = map.fixed_point_polynomial().trimmed(tol.identity);
  if (f.is_constant())
    throw Error(ErrorCode::not_a_fixed_point, "map has no finite fixed points");
  const RootSet rs = find_roots(f, tol.root, tol.cluster, tol.max_sweeps);
  const Root* best = nullptr;
  for (const auto& r : rs.roots)
    if (!best || std::abs(r.location - z) < std::abs(best->location - z)) best = &r;
  return best->multiplicity;
}

/// (1/2 pi i) * contour integral of dz / (z - R(z)) over |z - center| = radius,
/// by the trapezoidal rule with n_points doubled until two successive values
/// agree within tol.contour * max(1, |value|).
inline Complex residue_index_contour(const RationalMap& map, Complex center, double radius,
                                     std::size_t n_points = 64, const Tolerances& tol = {}) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "contour radius must be positive");
  if (n_points < 4) n_points = 4;
  const Polynomial& num = map.num();
  const Polynomial& den = map.den();
  auto sample = [&](std::size_t k, std::size_t n) {
    const Complex w = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    const Complex z = center + w;
    const Complex d = den(z);
    if (std::abs(d) < 1e-12)
      throw Error(ErrorCode::pole_on_contour, "pole of the map on or near the integration contour");
    return w * d / (z * d - num(z));
  };

  Complex sum{};
  for (std::size_t k = 0; k < n_points; ++k) sum += sample(k, n_points);
  Complex value = sum / static_cast<double>(n_points);
  std::size_t n = n_points;
  while (2 * n <= tol.contour_max_points) {
    for (std::size_t k = 1; k < 2 * n; k += 2) sum += sample(k, 2 * n);
    n *= 2;
    const Complex next = sum / static_cast<double>(n);
    if (std::abs(next - value) <= tol.contour * std::max(1.0, std::abs(next))) return next;
    value = next;
  }
  throw Error(ErrorCode::no_convergence, "contour quadrature did not converge");
}

/// Half the distance from `center` to the nearest other fixed point or pole
/// of `map`; 0.5 when there is none.
inline double default_contour_radius(const RationalMap& map, Complex center, const Tolerances& tol = {}) {
  double nearest = std::numeric_limits<double>::infinity();
  const double same = 1e-6 * (1.0 + std::abs(center));
  const Polynomial f = map.fixed_point_polynomial().trimmed(tol.identity);
  if (!f.is_constant()) {
    for (const auto& r : find_roots(f, tol.root, tol.cluster, tol.max_sweeps).roots) {
      const double dist = std::abs(r.location - center);
      if (dist > same) nearest = std::min(nearest, dist);
    }
  }
  if (!map.den().is_constant()) {
    for (const auto& r : find_roots(map.den(), tol.root, tol.cluster, tol.max_sweeps).roots)
      nearest = std::min(nearest, std::abs(r.location - center));
  }
  return std::isfinite(nearest) ? 0.5 * nearest : 0.5;
}

inline Complex residue_index(const RationalMap& map, const ExtendedComplex& location, Complex lambda,
                             const Tolerances& tol = {}) {
  if (std::abs(lambda - 1.0) > tol.multiplier_one) return 1.0 / (1.0 - lambda);
  if (location.is_infinite()) {
    const RationalMap chart = inversion_chart(map);
    return residue_index_contour(chart, 0.0, default_contour_radius(chart, 0.0, tol), 64, tol);
  }
  const Complex z = location.value();
  return residue_index_contour(map, z, default_contour_radius(map, z, tol), 64, tol);
}

inline Complex residue_index(const RationalMap& map, const FixedPoint& fp, const Tolerances& tol = {}) {
  return residue_index(map, fp.location, fp.multiplier, tol);
}

inline FixedPoint make_fixed_point(ExtendedComplex location, Complex lambda, std::size_t multiplicity,
                                   const Tolerances& tol) {
  FixedPoint fp;
  fp.location = location;
  fp.multiplier = lambda;
  fp.multiplicity = multiplicity;
  const MultiplierClass c = classify_multiplier(lambda, tol);
  fp.classification = c.kind;
  fp.weakly_repelling = c.weakly_repelling;
  fp.multiplier_one = c.multiplier_one;
  fp.rationally_indifferent = c.rationally_indifferent;
  fp.rational_period = c.rational_period;
  fp.simple = multiplicity == 1;
  return fp;
}

/// All fixed points on the Riemann sphere with multiplier, multiplicity,
/// residue index and classification. Finite points are the clustered roots
/// of num - z den; infinity is handled through the inversion chart.
inline FixedPointReport fixed_points(const RationalMap& map, const Tolerances& tol = {}) {
  detail::require_nondegenerate(map, tol);
  FixedPointReport report;
  report.map = map;

  const std::size_t d = map.degree();
  const Polynomial f = map.fixed_point_polynomial().trimmed(tol.identity);

  if (!f.is_constant()) {
    const RootSet rs = find_roots(f, tol.root, tol.cluster, tol.max_sweeps);
    report.solver_sweeps = rs.sweeps;
    report.solver_converged = rs.converged;
    if (!rs.converged)
      report.warnings.push_back("root finder hit the sweep limit; best iterate used");
    for (const auto& r : rs.roots) {
      const Complex den_at = map.den()(r.location);
      if (std::abs(den_at) <= 1e-8 * (1.0 + map.den().max_abs_coeff())) {
        report.warnings.push_back("fixed point " + detail::format_complex_short(r.location) +
                                  " is near a pole: numerator and denominator may share a root");
      }
      const Complex lambda = detail::multiplier_value(map, r.location);
      report.points.push_back(make_fixed_point(r.location, lambda, r.multiplicity, tol));
    }
  }

  const std::size_t m_inf = infinity_multiplicity(map, tol);
  if (m_inf > 0)
    report.points.push_back(make_fixed_point(ExtendedComplex::infinity(),
                                             multiplier_at(map, ExtendedComplex::infinity(), tol), m_inf, tol));

  for (auto& fp : report.points) {
    fp.index = residue_index(map, fp, tol);
    report.index_sum += fp.index;
  }
  report.index_sum_deviation = std::abs(report.index_sum - 1.0);

  if (report.total_multiplicity() != d + 1)
    report.warnings.push_back("multiplicities sum to " + std::to_string(report.total_multiplicity()) +
                              ", expected degree + 1 = " + std::to_string(d + 1));
  return report;
}

struct IndexSumReport {
  Complex sum;
  double deviation = 0.0;
  bool pass = false;
};

inline IndexSumReport verify_index_sum(const RationalMap& map, const Tolerances& tol = {}) {
  const FixedPointReport r = fixed_points(map, tol);
  return {r.index_sum, r.index_sum_deviation, r.index_sum_deviation <= tol.sum_pass};
}

/// Sums over the finite fixed points of a polynomial of degree >= 2:
///   finite_index_sum = sum 1/(1 - l),  real_part_sum = sum (1 - Re l)/|1 - l|^2,
///   imag_part_sum = sum Im l/|1 - l|^2,
/// all of which vanish when every finite fixed point is simple. If some
/// point is multiple its location is reported and the sums are skipped.
struct PolynomialSumsReport {
  std::vector<FixedPoint> finite_points;
  bool skipped = false;
  std::optional<Complex> multiplier_one_witness;
  Complex finite_index_sum;
  double real_part_sum = 0.0;
  double imag_part_sum = 0.0;
  std::vector<std::size_t> re_ge1;     // indices into finite_points
  std::vector<std::size_t> re_le1;
  std::vector<std::size_t> im_nonneg;
};

inline PolynomialSumsReport verify_polynomial_sums(const Polynomial& p, const Tolerances& tol = {}) {
  if (p.is_zero() || p.degree().value() < 2)
    throw Error(ErrorCode::degree_too_low, "polynomial identities need degree >= 2");
  const FixedPointReport fr = fixed_points(RationalMap::polynomial(p), tol);
  PolynomialSumsReport out;
  for (const auto& fp : fr.points)
    if (fp.location.is_finite()) out.finite_points.push_back(fp);

  for (const auto& fp : out.finite_points) {
    if (!fp.simple || fp.multiplier_one) {
      out.skipped = true;
      out.multiplier_one_witness = fp.location.value();
      return out;
    }
  }
  for (std::size_t i = 0; i < out.finite_points.size(); ++i) {
    const Complex l = out.finite_points[i].multiplier;
    const double q = std::norm(1.0 - l);
    out.finite_index_sum += 1.0 / (1.0 - l);
    out.real_part_sum += (1.0 - l.real()) / q;
    out.imag_part_sum += l.imag() / q;
    if (l.real() >= 1.0 - tol.witness) out.re_ge1.push_back(i);
    if (l.real() <= 1.0 + tol.witness) out.re_le1.push_back(i);
    if (l.imag() >= -tol.witness) out.im_nonneg.push_back(i);
  }
  return out;
}

}  // namespace hfix
