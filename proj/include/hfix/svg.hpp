#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hfix/document.hpp"

namespace hfix {

struct PlotOptions {
  int width = 800;
  int height = 800;
};

namespace detail {

inline const char* class_fill(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::super_attracting: return "#1f77b4";
    case FixedPointClass::attracting: return "#2ca02c";
    case FixedPointClass::indifferent: return "#ff7f0e";
    case FixedPointClass::repelling: return "#d62728";
  }
  return "#000000";
}

inline std::string num(double x) {
  if (std::abs(x) < 5e-13) x = 0.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Compact complex label: drops a part that is negligible next to the other.
inline std::string label_complex(Complex z) {
  const double scale = std::max(1.0, std::abs(z));
  const double re = std::abs(z.real()) < 1e-10 * scale ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 1e-10 * scale ? 0.0 : z.imag();
  char buf[64];
  if (im == 0.0)
    std::snprintf(buf, sizeof buf, "%.4g", re);
  else if (re == 0.0)
    std::snprintf(buf, sizeof buf, "%.4gi", im);
  else
    std::snprintf(buf, sizeof buf, "%.4g%+.4gi", re, im);
  return buf;
}

}  // namespace detail

/// SVG picture of the finite points of a document: fixed points coloured by
/// classification (ring = weakly repelling), h-fixed points zeta with their
/// mu and conj(omega) components, arrows omega -> conj(g(omega)) and
/// mu -> zeta, and per-point multiplier labels. The viewBox is the data
/// bounding box padded by 20% (1 unit square when all points coincide).
inline std::string render_plot(const AnalysisDocument& doc, const PlotOptions& opt = {}) {
  std::vector<Complex> extent;
  for (const auto& p : doc.fixed_points)
    if (p.location.is_finite()) extent.push_back(p.location.value());
  for (const auto& p : doc.h_fixed_points) {
    if (p.kind != HFixedKind::finite) continue;
    extent.push_back(p.zeta.value());
    extent.push_back(p.mu.value());
    extent.push_back(p.omega.value());
    extent.push_back(std::conj(p.omega.value()));
  }
  if (extent.empty()) throw Error(ErrorCode::empty_report, "nothing to plot: no finite points in the report");

  double x0 = extent[0].real(), x1 = x0, y0 = extent[0].imag(), y1 = y0;
  for (const auto& z : extent) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  double side = std::max(x1 - x0, y1 - y0);
  side = side > 1e-12 ? side * 1.4 : 1.0;
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  const double left = cx - side / 2, top = -(cy + side / 2);  // svg y = -Im
  const double r = side * 0.012;
  const double font = side * 0.022;
  using detail::num;

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
       std::to_string(opt.height) + "\" viewBox=\"" + num(left) + " " + num(top) + " " + num(side) + " " +
       num(side) + "\">\n";
  s += "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
       "markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#555555\"/>"
       "</marker></defs>\n";
  s += "<rect id=\"background\" x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(side) +
       "\" height=\"" + num(side) + "\" fill=\"#ffffff\"/>\n";

  // axes through the origin, clamped to the viewport
  const double ax = std::clamp(0.0, left, left + side);
  const double ay = std::clamp(0.0, top, top + side);
  const std::string axis_style = "\" stroke=\"#999999\" stroke-width=\"" + num(side * 0.002) + "\"/>\n";
  s += "<g id=\"axes\">\n";
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(ay) + "\" x2=\"" + num(left + side) + "\" y2=\"" + num(ay) +
       axis_style;
  s += "<line x1=\"" + num(ax) + "\" y1=\"" + num(top) + "\" x2=\"" + num(ax) + "\" y2=\"" + num(top + side) +
       axis_style;
  s += "<text x=\"" + num(left + side - 6 * font) + "\" y=\"" + num(ay - 0.5 * font) + "\" font-size=\"" +
       num(font) + "\">Re " + num(left + side) + "</text>\n";
  s += "<text x=\"" + num(ax + 0.5 * font) + "\" y=\"" + num(top + font) + "\" font-size=\"" + num(font) +
       "\">Im " + num(-top) + "</text>\n";
  s += "</g>\n";

  std::map<std::pair<long long, long long>, int> stacked;
  auto label_row = [&](Complex z) {
    const auto key = std::make_pair(std::llround(z.real() / r), std::llround(z.imag() / r));
    return stacked[key]++;
  };
  auto marker = [&](const std::string& id, Complex z, FixedPointClass cls, bool ring, const std::string& label) {
    std::string g = "<g id=\"" + id + "\">";
    g += "<circle cx=\"" + num(z.real()) + "\" cy=\"" + num(-z.imag()) + "\" r=\"" + num(r) + "\" fill=\"" +
         detail::class_fill(cls) + "\"/>";
    if (ring)
      g += "<circle cx=\"" + num(z.real()) + "\" cy=\"" + num(-z.imag()) + "\" r=\"" + num(1.7 * r) +
           "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"" + num(0.3 * r) + "\"/>";
    const int row = label_row(z);
    g += "<text x=\"" + num(z.real() + 2 * r) + "\" y=\"" + num(-z.imag() - r + row * 1.2 * font) +
         "\" font-size=\"" + num(font) + "\">" + label + "</text>";
    return g + "</g>\n";
  };

  s += "<g id=\"fixed-points\">\n";
  for (std::size_t k = 0; k < doc.fixed_points.size(); ++k) {
    const auto& p = doc.fixed_points[k];
    if (p.location.is_infinite()) continue;
    s += marker("fp-" + std::to_string(k), p.location.value(), p.classification, p.weakly_repelling,
                "λ=" + detail::label_complex(p.multiplier));
  }
  s += "</g>\n";

  if (!doc.h_fixed_points.empty()) {
    s += "<g id=\"components\">\n";
    std::vector<std::pair<Complex, std::string>> seen;
    auto component = [&](Complex z, const std::string& name, Complex mult, const std::string& sym) {
      for (const auto& [w, n] : seen)
        if (n == name && std::abs(w - z) <= 1e-12 * (1.0 + std::abs(z))) return;
      seen.emplace_back(z, name);
      const MultiplierClass c = classify_multiplier(mult, doc.diagnostics.tolerances);
      s += "<g id=\"" + name + "-" + std::to_string(seen.size() - 1) + "\"><rect x=\"" + num(z.real() - r) +
           "\" y=\"" + num(-z.imag() - r) + "\" width=\"" + num(2 * r) + "\" height=\"" + num(2 * r) +
           "\" fill=\"none\" stroke=\"" + detail::class_fill(c.kind) + "\" stroke-width=\"" + num(0.4 * r) +
           "\"/><text x=\"" + num(z.real() - 2 * r) + "\" y=\"" + num(-z.imag() + 2.5 * r) + "\" font-size=\"" +
           num(0.8 * font) + "\" fill=\"#555555\">" + sym + "</text></g>\n";
    };
    for (const auto& p : doc.h_fixed_points) {
      if (p.kind != HFixedKind::finite) continue;
      component(p.mu.value(), "mu", p.lambda, "μ");
      component(p.omega.value(), "omega", p.theta, "ω");
    }
    s += "</g>\n<g id=\"arrows\" stroke=\"#555555\" stroke-width=\"" + num(0.25 * r) +
         "\" fill=\"none\" marker-end=\"url(#arrow)\">\n";
    for (std::size_t k = 0; k < doc.h_fixed_points.size(); ++k) {
      const auto& p = doc.h_fixed_points[k];
      if (p.kind != HFixedKind::finite) continue;
      const Complex mu = p.mu.value(), om = p.omega.value(), z = p.zeta.value();
      if (std::abs(om.imag()) > 1e-12)
        s += "<line id=\"conj-" + std::to_string(k) + "\" x1=\"" + num(om.real()) + "\" y1=\"" + num(-om.imag()) +
             "\" x2=\"" + num(om.real()) + "\" y2=\"" + num(om.imag()) + "\" stroke-dasharray=\"" + num(r) + "\"/>\n";
      if (std::abs(z - mu) > 1e-12)
        s += "<line id=\"shift-" + std::to_string(k) + "\" x1=\"" + num(mu.real()) + "\" y1=\"" + num(-mu.imag()) +
             "\" x2=\"" + num(z.real()) + "\" y2=\"" + num(-z.imag()) + "\"/>\n";
    }
    s += "</g>\n<g id=\"h-fixed-points\">\n";
    for (std::size_t k = 0; k < doc.h_fixed_points.size(); ++k) {
      const auto& p = doc.h_fixed_points[k];
      if (p.kind != HFixedKind::finite) continue;
      const MultiplierClass cl = classify_multiplier(p.lambda, doc.diagnostics.tolerances);
      const MultiplierClass ct = classify_multiplier(p.theta, doc.diagnostics.tolerances);
      s += marker("hfp-" + std::to_string(k), p.zeta.value(), cl.kind, cl.weakly_repelling && ct.weakly_repelling,
                  "λ=" + detail::label_complex(p.lambda) + ", θ=" + detail::label_complex(p.theta));
    }
    s += "</g>\n";
  }

  // legend, top-left corner
  s += "<g id=\"legend\">\n";
  const FixedPointClass classes[] = {FixedPointClass::super_attracting, FixedPointClass::attracting,
                                     FixedPointClass::indifferent, FixedPointClass::repelling};
  double ly = top + 1.5 * font;
  const double lx = left + font;
  for (auto c : classes) {
    s += "<circle cx=\"" + num(lx) + "\" cy=\"" + num(ly - 0.35 * font) + "\" r=\"" + num(0.4 * font) +
         "\" fill=\"" + detail::class_fill(c) + "\"/><text x=\"" + num(lx + font) + "\" y=\"" + num(ly) +
         "\" font-size=\"" + num(font) + "\">" + to_string(c) + "</text>\n";
    ly += 1.3 * font;
  }
  s += "<circle cx=\"" + num(lx) + "\" cy=\"" + num(ly - 0.35 * font) + "\" r=\"" + num(0.5 * font) +
       "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"" + num(0.1 * font) + "\"/><text x=\"" +
       num(lx + font) + "\" y=\"" + num(ly) + "\" font-size=\"" + num(font) + "\">weakly repelling</text>\n";
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace hfix
