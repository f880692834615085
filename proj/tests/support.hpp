#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "hfix/poly.hpp"

namespace hfix::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Complex unit_disk() {
    while (true) {
      const Complex z{uniform(-1, 1), uniform(-1, 1)};
      if (std::norm(z) <= 1.0) return z;
    }
  }

  // Coefficients uniform in the unit disk; the leading one is resampled
  // until it is at least 1e-3 in modulus so the degree is what was asked.
  Polynomial poly(std::size_t degree) {
    std::vector<Complex> c(degree + 1);
    for (auto& a : c) a = unit_disk();
    while (std::abs(c[degree]) < 1e-3) c[degree] = unit_disk();
    return Polynomial(std::move(c));
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline bool nearly_identity(const RationalMap& m) {
  const double scale = std::max(m.num().max_abs_coeff(), m.den().max_abs_coeff());
  return m.fixed_point_polynomial().max_abs_coeff() <= 1e-6 * scale;
}

/// Random rational map of degree d in 2..6, cycling through the four
/// numerator/denominator shapes: (d, d), (d, d-1), (d, < d-1), (< d, d).
inline RationalMap random_rational_map(Rng& rng, int shape = -1) {
  while (true) {
    const auto d = static_cast<std::size_t>(rng.integer(2, 6));
    const int s = shape >= 0 ? shape : rng.integer(0, 3);
    std::size_t dn = d, dd = d;
    switch (s) {
      case 1: dd = d - 1; break;
      case 2: dd = static_cast<std::size_t>(rng.integer(0, static_cast<int>(d) - 2)); break;
      case 3: dn = static_cast<std::size_t>(rng.integer(0, static_cast<int>(d) - 1)); break;
      default: break;
    }
    RationalMap m(rng.poly(dn), rng.poly(dd));
    if (!nearly_identity(m)) return m;
  }
}

inline MobiusMap random_mobius(Rng& rng) {
  while (true) {
    const Complex a = rng.unit_disk(), b = rng.unit_disk(), c = rng.unit_disk(), d = rng.unit_disk();
    if (std::abs(a * d - b * c) >= 0.1) return MobiusMap(a, b, c, d);
  }
}

/// Sum of a_k z^k by explicit powers (no Horner), as an independent evaluator.
inline Complex power_sum(const Polynomial& p, Complex z) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += p.coeff(k) * std::pow(z, static_cast<double>(k));
  return s;
}

/// (1/2 pi i) times the integral of dz / (z - R(z)) over |z - c| = r with the
/// midpoint rule on n nodes, using only a callable R.
inline Complex oracle_index(const std::function<Complex(Complex)>& R, Complex c, double r, int n = 4096) {
  Complex acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.5) / n;
    const Complex w = r * std::polar(1.0, t);
    const Complex z = c + w;
    acc += w / (z - R(z));
  }
  return acc / static_cast<double>(n);
}

/// Central difference derivative of a callable.
inline Complex oracle_derivative(const std::function<Complex(Complex)>& R, Complex z, double h = 1e-5) {
  return (R(z + h) - R(z - h)) / (2.0 * h);
}

/// Coefficients of prod (z - r_i)^{m_i}, ascending.
inline std::vector<Complex> expand_roots(const std::vector<std::pair<Complex, std::size_t>>& roots) {
  std::vector<Complex> c{1.0};
  for (const auto& [r, m] : roots)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Complex> next(c.size() + 1, 0.0);
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k + 1] += c[k];
        next[k] -= r * c[k];
      }
      c = std::move(next);
    }
  return c;
}

// ---- minimal JSON Schema checker ------------------------------------------
// Supports: type, properties, required, additionalProperties (bool), items,
// enum, const, anyOf, oneOf, minimum, $ref to "#/$defs/<name>".

class SchemaChecker {
 public:
  explicit SchemaChecker(nlohmann::json root) : root_(std::move(root)) {}

  std::vector<std::string> validate(const nlohmann::json& doc) const {
    std::vector<std::string> errors;
    check(root_, doc, "$", errors);
    return errors;
  }

 private:
  static bool has_type(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "number") return v.is_number();
    if (t == "null") return v.is_null();
    return false;
  }

  void check(const nlohmann::json& s, const nlohmann::json& v, const std::string& path,
             std::vector<std::string>& errors) const {
    if (s.contains("$ref")) {
      const std::string ref = s["$ref"];
      const std::string prefix = "#/$defs/";
      if (ref.rfind(prefix, 0) != 0) {
        errors.push_back(path + ": unsupported $ref " + ref);
        return;
      }
      check(root_.at("$defs").at(ref.substr(prefix.size())), v, path, errors);
      return;
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, s["type"].get<std::string>());
      }
      if (!ok) {
        errors.push_back(path + ": expected type " + s["type"].dump() + ", got " + v.dump());
        return;
      }
    }
    if (s.contains("const") && s["const"] != v) errors.push_back(path + ": expected " + s["const"].dump());
    if (s.contains("enum")) {
      bool found = false;
      for (const auto& e : s["enum"]) found = found || e == v;
      if (!found) errors.push_back(path + ": " + v.dump() + " not in enum");
    }
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
      errors.push_back(path + ": below minimum");
    for (const char* key : {"anyOf", "oneOf"}) {
      if (!s.contains(key)) continue;
      int matches = 0;
      for (const auto& alt : s[key]) {
        std::vector<std::string> sub;
        check(alt, v, path, sub);
        matches += sub.empty();
      }
      const bool one = std::string(key) == "oneOf";
      if (matches == 0 || (one && matches != 1))
        errors.push_back(path + ": " + key + " matched " + std::to_string(matches) + " alternatives");
    }
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto& r : s["required"])
          if (!v.contains(r.get<std::string>())) errors.push_back(path + ": missing " + r.get<std::string>());
      const bool closed = s.contains("additionalProperties") && s["additionalProperties"] == false;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (s.contains("properties") && s["properties"].contains(it.key()))
          check(s["properties"][it.key()], it.value(), path + "." + it.key(), errors);
        else if (closed)
          errors.push_back(path + ": unexpected property " + it.key());
      }
    }
    if (v.is_array() && s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], path + "[" + std::to_string(i) + "]", errors);
  }

  nlohmann::json root_;
};

}  // namespace hfix::test
