#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hfix/core.hpp"
#include "hfix/fixpoint.hpp"
#include "hfix/poly.hpp"

namespace hfix {

enum class HarmonicKind { polynomial_harmonic, rational_harmonic, low_degree };

inline const char* to_string(HarmonicKind k) {
  switch (k) {
    case HarmonicKind::polynomial_harmonic: return "polynomial_harmonic";
    case HarmonicKind::rational_harmonic: return "rational_harmonic";
    case HarmonicKind::low_degree: return "low_degree";
  }
  return "?";
}

/// f = h + conj(g).
struct HarmonicMap {
  RationalMap h;
  RationalMap g;

  HarmonicKind kind() const {
    if (h.degree() < 2 || g.degree() < 2) return HarmonicKind::low_degree;
    if (h.is_polynomial() && g.is_polynomial()) return HarmonicKind::polynomial_harmonic;
    return HarmonicKind::rational_harmonic;
  }
};

enum class HFixedKind { finite, infinite_mu_fixed, infinite_omega_fixed, infinite_both };

inline const char* to_string(HFixedKind k) {
  switch (k) {
    case HFixedKind::finite: return "finite";
    case HFixedKind::infinite_mu_fixed: return "infinite_mu_fixed";
    case HFixedKind::infinite_omega_fixed: return "infinite_omega_fixed";
    case HFixedKind::infinite_both: return "infinite_both";
  }
  return "?";
}

/// An induced h-fixed point zeta = mu + conj(omega) with h(mu) = mu, g(omega) = omega.
/// Infinite kinds, keyed by which part stays finite:
///   infinite_mu_fixed     mu finite,  omega = inf
///   infinite_omega_fixed  mu = inf,   omega finite
///   infinite_both         mu = omega = inf
/// zeta is infinity for every infinite kind.
struct HFixedPoint {
  ExtendedComplex mu;
  ExtendedComplex omega;
  ExtendedComplex zeta;
  Complex lambda;  // h'(mu)
  Complex theta;   // g'(omega)
  HFixedKind kind = HFixedKind::finite;
  std::size_t multiplicity_h = 1;
  std::size_t multiplicity_g = 1;
};

namespace detail {

inline HFixedPoint pair_point(const FixedPoint& a, const FixedPoint& b) {
  HFixedPoint p;
  p.mu = a.location;
  p.omega = b.location;
  p.lambda = a.multiplier;
  p.theta = b.multiplier;
  p.multiplicity_h = a.multiplicity;
  p.multiplicity_g = b.multiplicity;
  const bool mu_inf = a.location.is_infinite();
  const bool om_inf = b.location.is_infinite();
  if (!mu_inf && !om_inf) {
    p.kind = HFixedKind::finite;
    p.zeta = a.location.value() + std::conj(b.location.value());
  } else {
    p.kind = !om_inf ? HFixedKind::infinite_omega_fixed
             : !mu_inf ? HFixedKind::infinite_mu_fixed
                       : HFixedKind::infinite_both;
    p.zeta = ExtendedComplex::infinity();
  }
  return p;
}

inline void require_component_degree(const HarmonicMap& f, std::size_t min_degree) {
  if (f.h.degree() < min_degree || f.g.degree() < min_degree)
    throw Error(ErrorCode::degree_too_low,
                "harmonic analysis needs deg h, deg g >= " + std::to_string(min_degree));
}

inline bool has_super_attracting(const FixedPointReport& r) {
  return std::any_of(r.points.begin(), r.points.end(), [](const FixedPoint& p) {
    return p.classification == FixedPointClass::super_attracting;
  });
}

}  // namespace detail

/// Induced h-fixed points from precomputed fixed-point reports of h and g.
/// Finite pairs come first in (Re mu, Im mu, Re omega, Im omega) order,
/// followed by the infinite kinds in the order listed on HFixedPoint.
inline std::vector<HFixedPoint> induced_h_fixed_points(const FixedPointReport& h,
                                                       const FixedPointReport& g) {
  std::vector<FixedPoint> hf, gf;
  const FixedPoint* h_inf = nullptr;
  const FixedPoint* g_inf = nullptr;
  for (const auto& p : h.points) (p.location.is_finite() ? (void)hf.push_back(p) : (void)(h_inf = &p));
  for (const auto& p : g.points) (p.location.is_finite() ? (void)gf.push_back(p) : (void)(g_inf = &p));
  auto lex = [](const FixedPoint& a, const FixedPoint& b) {
    const Complex x = a.location.value(), y = b.location.value();
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(hf.begin(), hf.end(), lex);
  std::sort(gf.begin(), gf.end(), lex);

  std::vector<HFixedPoint> out;
  for (const auto& a : hf)
    for (const auto& b : gf) out.push_back(detail::pair_point(a, b));
  if (g_inf)
    for (const auto& a : hf) out.push_back(detail::pair_point(a, *g_inf));
  if (h_inf)
    for (const auto& b : gf) out.push_back(detail::pair_point(*h_inf, b));
  if (h_inf && g_inf) out.push_back(detail::pair_point(*h_inf, *g_inf));
  return out;
}

inline std::vector<HFixedPoint> induced_h_fixed_points(const HarmonicMap& f, const Tolerances& tol = {}) {
  detail::require_component_degree(f, 1);
  return induced_h_fixed_points(fixed_points(f.h, tol), fixed_points(f.g, tol));
}

struct ConjectureReport {
  std::vector<HFixedPoint> witnesses_ge1;
  std::vector<HFixedPoint> witnesses_le1;
  bool theorem_applies = false;
  bool pass = true;
  std::string hypothesis;  // which hypothesis held, or "not met"
};

/// Witnesses for Re(lambda) >= 1 and Re(theta) >= 1 among the induced
/// h-fixed points, with the one-sided slack tol.witness. The hypothesis
/// holds for polynomial harmonic maps, and for rational harmonic maps when
/// h and g each have a super-attracting fixed point (finite or infinite).
inline ConjectureReport conjecture_witness(const HarmonicMap& f, const FixedPointReport& h,
                                           const FixedPointReport& g, const Tolerances& tol = {}) {
  detail::require_component_degree(f, 2);
  ConjectureReport out;
  switch (f.kind()) {
    case HarmonicKind::polynomial_harmonic:
      out.theorem_applies = true;
      out.hypothesis = "polynomial harmonic";
      break;
    case HarmonicKind::rational_harmonic:
      out.theorem_applies = detail::has_super_attracting(h) && detail::has_super_attracting(g);
      out.hypothesis = out.theorem_applies ? "super-attracting fixed points in h and g" : "not met";
      break;
    case HarmonicKind::low_degree:
      out.hypothesis = "not met";
      break;
  }
  for (const auto& p : induced_h_fixed_points(h, g)) {
    if (p.lambda.real() >= 1.0 - tol.witness && p.theta.real() >= 1.0 - tol.witness)
      out.witnesses_ge1.push_back(p);
    if (p.lambda.real() <= 1.0 + tol.witness && p.theta.real() <= 1.0 + tol.witness)
      out.witnesses_le1.push_back(p);
  }
  out.pass = !out.theorem_applies || !out.witnesses_ge1.empty();
  return out;
}

inline ConjectureReport conjecture_witness(const HarmonicMap& f, const Tolerances& tol = {}) {
  detail::require_component_degree(f, 2);
  return conjecture_witness(f, fixed_points(f.h, tol), fixed_points(f.g, tol), tol);
}

struct RemarkReport {
  std::vector<HFixedPoint> le1;
  // Non-super-attracting fixed points with Im(multiplier) >= 0; filled only
  // when every fixed point of that component is simple.
  std::vector<FixedPoint> im_nonneg_h;
  std::vector<FixedPoint> im_nonneg_g;
  bool h_all_simple = true;
  bool g_all_simple = true;
};

namespace detail {

inline std::vector<FixedPoint> im_nonneg(const FixedPointReport& r, bool& all_simple, const Tolerances& tol) {
  all_simple = std::all_of(r.points.begin(), r.points.end(), [](const FixedPoint& p) { return p.simple; });
  std::vector<FixedPoint> out;
  if (!all_simple) return out;
  for (const auto& p : r.points)
    if (p.classification != FixedPointClass::super_attracting && p.multiplier.imag() >= -tol.witness)
      out.push_back(p);
  return out;
}

}  // namespace detail

inline RemarkReport remark_witnesses(const HarmonicMap& f, const FixedPointReport& h, const FixedPointReport& g,
                                     const Tolerances& tol = {}) {
  RemarkReport out;
  for (const auto& p : induced_h_fixed_points(h, g))
    if (p.lambda.real() <= 1.0 + tol.witness && p.theta.real() <= 1.0 + tol.witness) out.le1.push_back(p);
  out.im_nonneg_h = detail::im_nonneg(h, out.h_all_simple, tol);
  out.im_nonneg_g = detail::im_nonneg(g, out.g_all_simple, tol);
  (void)f;
  return out;
}

inline RemarkReport remark_witnesses(const HarmonicMap& f, const Tolerances& tol = {}) {
  detail::require_component_degree(f, 2);
  return remark_witnesses(f, fixed_points(f.h, tol), fixed_points(f.g, tol), tol);
}

/// Closed-form analysis of z^2 + c + conj(z^2 + c).
struct QuadraticReport {
  Complex c;
  std::vector<Complex> fixed_points;  // of z^2 + c, ordered by (Re, Im)
  std::vector<Complex> multipliers;
  std::vector<std::size_t> multiplicities;
  std::vector<HFixedPoint> h_fixed_points;
  bool single_point = false;
  bool re_exactly_one = false;
  bool c_real = false;
  bool c_real_ge_quarter = false;
  // re_exactly_one == c_real_ge_quarter; only asserted for real c.
  bool equivalence_holds = true;
};

inline QuadraticReport quadratic_family_analyze(Complex c) {
  QuadraticReport out;
  out.c = c;
  out.single_point = std::abs(c - 0.25) <= 1e-12;
  if (out.single_point) {
    out.fixed_points = {0.5};
    out.multipliers = {1.0};
    out.multiplicities = {2};
  } else {
    const Complex s = std::sqrt(1.0 - 4.0 * c);
    Complex a = (1.0 - s) / 2.0, b = (1.0 + s) / 2.0;
    Complex la = 1.0 - s, lb = 1.0 + s;
    if (b.real() < a.real() || (b.real() == a.real() && b.imag() < a.imag())) {
      std::swap(a, b);
      std::swap(la, lb);
    }
    out.fixed_points = {a, b};
    out.multipliers = {la, lb};
    out.multiplicities = {1, 1};
  }
  for (std::size_t i = 0; i < out.fixed_points.size(); ++i)
    for (std::size_t j = 0; j < out.fixed_points.size(); ++j) {
      HFixedPoint p;
      p.mu = out.fixed_points[i];
      p.omega = out.fixed_points[j];
      p.zeta = out.fixed_points[i] + std::conj(out.fixed_points[j]);
      p.lambda = out.multipliers[i];
      p.theta = out.multipliers[j];
      p.multiplicity_h = out.multiplicities[i];
      p.multiplicity_g = out.multiplicities[j];
      out.h_fixed_points.push_back(p);
    }
  out.re_exactly_one = std::all_of(out.multipliers.begin(), out.multipliers.end(),
                                   [](Complex l) { return std::abs(l.real() - 1.0) <= 1e-9; });
  out.c_real = std::abs(c.imag()) <= 1e-12;
  out.c_real_ge_quarter = out.c_real && c.real() >= 0.25 - 1e-12;
  out.equivalence_holds = !out.c_real || out.re_exactly_one == out.c_real_ge_quarter;
  return out;
}

}  // namespace hfix
