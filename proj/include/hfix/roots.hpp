#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "hfix/core.hpp"
#include "hfix/poly.hpp"

namespace hfix {

struct Root {
  Complex location;
  std::size_t multiplicity = 1;
};

/// Clustered roots of a polynomial. `residual` is max |p(location)| over the
/// reported locations (left at 0 by cluster_roots, which never sees p).
struct RootSet {
  std::vector<Root> roots;
  double residual = 0.0;
  std::size_t sweeps = 0;
  bool converged = true;

  std::size_t total_multiplicity() const {
    std::size_t n = 0;
    for (const auto& r : roots) n += r.multiplicity;
    return n;
  }
};

struct AberthResult {
  std::vector<Complex> roots;
  std::size_t sweeps = 0;
  bool converged = true;
};

namespace detail {

// Fujiwara's bound on the moduli of the roots.
inline double root_bound(std::span<const Complex> c) {
  const std::size_t n = c.size() - 1;
  const double lead = std::abs(c[n]);
  double bound = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double term = std::abs(c[n - k]) / lead;
    if (k == n) term /= 2.0;
    bound = std::max(bound, std::pow(term, 1.0 / static_cast<double>(k)));
  }
  return 2.0 * bound;
}

struct HornerEval {
  Complex p;
  Complex dp;
  double bound;  // rounding error bound on p
};

inline HornerEval horner_with_bound(std::span<const Complex> c, Complex z) {
  Complex p{};
  Complex dp{};
  double mag = 0.0;
  const double az = std::abs(z);
  for (std::size_t k = c.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
    mag = mag * az + std::abs(c[k]);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return {p, dp, 4.0 * static_cast<double>(c.size()) * eps * mag};
}

}  // namespace detail

/// Aberth-Ehrlich simultaneous iteration, Gauss-Seidel ordering.
///
/// Roots at the origin are split off exactly first. Starting points lie on a
/// circle of radius given by Fujiwara's bound, offset by a fixed irrational
/// angle, so the result is a deterministic function of the coefficients.
/// A root is settled once its correction drops below tol (1 + |z|) or once
/// |p(z)| is below the Horner rounding bound, past which further corrections
/// are noise.
inline AberthResult aberth_ehrlich(const Polynomial& p, double tol = 1e-12,
                                   std::size_t max_sweeps = 1000) {
  if (p.is_zero() || p.degree().value() < 1)
    throw Error(ErrorCode::degree_too_low, "root finding needs a polynomial of degree >= 1");

  AberthResult out;
  std::span<const Complex> all = p.coeffs();
  std::size_t low = 0;
  while (all[low] == Complex{}) ++low;
  out.roots.assign(low, Complex{});

  std::vector<Complex> c(all.begin() + static_cast<std::ptrdiff_t>(low), all.end());
  const std::size_t n = c.size() - 1;
  if (n == 0) return out;
  const Complex lead = c.back();
  for (auto& a : c) a /= lead;
  if (n == 1) {
    out.roots.push_back(-c[0]);
    return out;
  }

  const double radius = detail::root_bound(c);
  const double offset = 0.5 * (std::sqrt(5.0) - 1.0);
  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + offset;
    z[k] = std::polar(radius, angle);
  }

  std::vector<bool> settled(n, false);
  out.converged = false;
  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    out.sweeps = sweep;
    bool done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (settled[k]) continue;
      const auto ev = detail::horner_with_bound(c, z[k]);
      if (std::abs(ev.p) <= ev.bound) {
        settled[k] = true;
        continue;
      }
      Complex s{};
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      const Complex denom = ev.dp - ev.p * s;
      Complex delta;
      if (denom == Complex{})
        delta = Complex{tol, tol} * (1.0 + std::abs(z[k]));
      else
        delta = ev.p / denom;
      z[k] -= delta;
      if (std::abs(delta) <= tol * (1.0 + std::abs(z[k])))
        settled[k] = true;
      else
        done = false;
    }
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.roots.insert(out.roots.end(), z.begin(), z.end());
  return out;
}

inline double default_cluster_eps(std::span<const Complex> raw, double scale = 1e-6) {
  double m = 0.0;
  for (const auto& r : raw) m = std::max(m, std::abs(r));
  return scale * (1.0 + m);
}

/// Single-linkage clustering; each cluster is reported at its centroid with
/// multiplicity equal to its size, ordered by (Re, Im).
inline RootSet cluster_roots(std::span<const Complex> raw, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "cluster radius must be positive");
  const std::size_t n = raw.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(raw[i] - raw[j]) <= eps) parent[find(i)] = find(j);

  std::vector<std::size_t> slot(n, n);
  RootSet set;
  std::vector<Complex> sums;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == n) {
      slot[r] = set.roots.size();
      set.roots.push_back({Complex{}, 0});
      sums.emplace_back();
    }
    sums[slot[r]] += raw[i];
    ++set.roots[slot[r]].multiplicity;
  }
  for (std::size_t k = 0; k < set.roots.size(); ++k)
    set.roots[k].location = sums[k] / static_cast<double>(set.roots[k].multiplicity);
  std::sort(set.roots.begin(), set.roots.end(), [](const Root& a, const Root& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return set;
}

/// All roots of p, clustered into multiplicities. An m-fold cluster centroid
/// is polished by Newton steps on p^(m-1), which has a simple root there;
/// a step is kept only if it stays inside the cluster radius and reduces
/// |p^(m-1)|.
inline RootSet find_roots(const Polynomial& p, double tol = 1e-12, double cluster_scale = 1e-6,
                          std::size_t max_sweeps = 1000) {
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "root tolerance must be positive");
  const AberthResult raw = aberth_ehrlich(p, tol, max_sweeps);
  const double eps = default_cluster_eps(raw.roots, cluster_scale);
  RootSet set = cluster_roots(raw.roots, eps);
  set.sweeps = raw.sweeps;
  set.converged = raw.converged;

  for (auto& r : set.roots) {
    Polynomial q = p;
    for (std::size_t k = 1; k < r.multiplicity; ++k) q = q.derivative();
    const Polynomial dq = q.derivative();
    Complex z = r.location;
    double qz = std::abs(q(z));
    for (int step = 0; step < 3 && qz > 0.0; ++step) {
      const Complex d = dq(z);
      if (d == Complex{}) break;
      const Complex next = z - q(z) / d;
      const double qn = std::abs(q(next));
      if (std::abs(next - r.location) > eps || !(qn < qz)) break;
      z = next;
      qz = qn;
    }
    r.location = z;
  }

  for (const auto& r : set.roots) set.residual = std::max(set.residual, std::abs(p(r.location)));
  return set;
}

}  // namespace hfix
