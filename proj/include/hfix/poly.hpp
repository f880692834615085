#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "hfix/core.hpp"

namespace hfix {

/// Degree of a polynomial. The zero polynomial has degree minus infinity,
/// which compares below every finite degree.
class Degree {
 public:
  constexpr explicit Degree(std::size_t d) noexcept : value_(d), finite_(true) {}

  static constexpr Degree minus_infinity() noexcept { return Degree{}; }

  constexpr bool is_minus_infinity() const noexcept { return !finite_; }

  std::size_t value() const {
    if (!finite_) throw Error(ErrorCode::invalid_argument, "degree of the zero polynomial is -infinity");
    return value_;
  }

  friend constexpr bool operator==(Degree a, Degree b) noexcept {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) noexcept {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }

 private:
  constexpr Degree() noexcept = default;
  std::size_t value_ = 0;
  bool finite_ = false;
};

/// Dense univariate polynomial with complex coefficients in ascending powers.
/// Exact trailing zeros are always stripped, so the zero polynomial is empty.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { strip(); }
  Polynomial(std::initializer_list<Complex> coeffs) : c_(coeffs) { strip(); }

  static Polynomial constant(Complex a) { return Polynomial({a}); }
  static Polynomial monomial(Complex a, std::size_t power) {
    std::vector<Complex> c(power + 1, Complex{});
    c[power] = a;
    return Polynomial(std::move(c));
  }
  static Polynomial identity() { return Polynomial({Complex{0.0}, Complex{1.0}}); }

  std::span<const Complex> coeffs() const noexcept { return c_; }
  std::size_t size() const noexcept { return c_.size(); }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_constant() const noexcept { return c_.size() <= 1; }

  Degree degree() const noexcept {
    return c_.empty() ? Degree::minus_infinity() : Degree(c_.size() - 1);
  }

  Complex coeff(std::size_t k) const noexcept { return k < c_.size() ? c_[k] : Complex{}; }
  Complex leading() const noexcept { return c_.empty() ? Complex{} : c_.back(); }

  double max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& a : c_) m = std::max(m, std::abs(a));
    return m;
  }

  // Horner.
  Complex operator()(Complex z) const noexcept {
    Complex acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Complex> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
  }

  /// w^n p(1/w); requires n >= deg p.
  Polynomial reversed(std::size_t n) const {
    if (!c_.empty() && c_.size() - 1 > n)
      throw Error(ErrorCode::invalid_argument, "reversal length below polynomial degree");
    std::vector<Complex> r(n + 1, Complex{});
    for (std::size_t k = 0; k < c_.size(); ++k) r[n - k] = c_[k];
    return Polynomial(std::move(r));
  }

  /// Drops top coefficients whose magnitude is at most rel * max |coeff|.
  Polynomial trimmed(double rel) const {
    const double cut = rel * max_abs_coeff();
    std::vector<Complex> c = c_;
    while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
    return Polynomial(std::move(c));
  }

  Polynomial pow(unsigned n) const {
    Polynomial result = constant(1.0);
    Polynomial base = *this;
    while (n) {
      if (n & 1u) result *= base;
      n >>= 1u;
      if (n) base *= base;
    }
    return result;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    strip();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    strip();
    return *this;
  }
  Polynomial& operator*=(Complex s) {
    for (auto& a : c_) a *= s;
    strip();
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) {
    if (c_.empty() || o.c_.empty()) {
      c_.clear();
      return *this;
    }
    std::vector<Complex> r(c_.size() + o.c_.size() - 1, Complex{});
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    c_ = std::move(r);
    strip();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= Complex{-1.0}; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void strip() {
    while (!c_.empty() && c_.back() == Complex{}) c_.pop_back();
  }

  std::vector<Complex> c_;
};

/// num/den with den monic. Common factors are not cancelled.
class RationalMap {
 public:
  RationalMap() : num_(Polynomial::identity()), den_(Polynomial::constant(1.0)) {}

  RationalMap(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error(ErrorCode::zero_denominator, "denominator is the zero polynomial");
    const Complex lead = den_.leading();
    if (lead != Complex{1.0}) {
      const Complex s = 1.0 / lead;
      num_ *= s;
      den_ *= s;
    }
  }

  static RationalMap polynomial(Polynomial p) { return {std::move(p), Polynomial::constant(1.0)}; }

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }

  std::size_t num_degree() const { return num_.is_zero() ? 0 : num_.degree().value(); }
  std::size_t den_degree() const { return den_.degree().value(); }

  /// max(deg num, deg den); a zero numerator counts as degree 0.
  std::size_t degree() const { return std::max(num_degree(), den_degree()); }

  bool is_polynomial() const noexcept { return den_.is_constant(); }

  /// R(infinity) = infinity.
  bool fixes_infinity() const { return !num_.is_zero() && num_degree() > den_degree(); }

  /// num(z) - z den(z); its roots are the finite fixed points.
  Polynomial fixed_point_polynomial() const { return num_ - Polynomial::identity() * den_; }

  friend bool operator==(const RationalMap& a, const RationalMap& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  Polynomial num_;
  Polynomial den_;
};

/// z -> (az + b)/(cz + d).
class MobiusMap {
 public:
  MobiusMap(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (!(std::abs(a * d - b * c) > 1e-14 * scale * scale))
      throw Error(ErrorCode::degenerate_mobius, "Mobius map has vanishing determinant ad - bc");
  }

  static MobiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static MobiusMap translation(Complex t) { return {1.0, t, 0.0, 1.0}; }

  Complex a() const noexcept { return a_; }
  Complex b() const noexcept { return b_; }
  Complex c() const noexcept { return c_; }
  Complex d() const noexcept { return d_; }

  MobiusMap inverse() const { return {d_, -b_, -c_, a_}; }

  ExtendedComplex operator()(const ExtendedComplex& p) const {
    if (p.is_infinite()) {
      if (c_ == Complex{}) return ExtendedComplex::infinity();
      return a_ / c_;
    }
    const Complex z = p.value();
    const Complex den = c_ * z + d_;
    if (den == Complex{}) return ExtendedComplex::infinity();
    return (a_ * z + b_) / den;
  }

 private:
  Complex a_, b_, c_, d_;
};

/// num(z)/den(z). Infinity when only the denominator vanishes.
inline ExtendedComplex evaluate(const RationalMap& map, Complex z) {
  const Complex n = map.num()(z);
  const Complex d = map.den()(z);
  if (d == Complex{}) {
    if (n == Complex{})
      throw Error(ErrorCode::indeterminate, "0/0 while evaluating: numerator and denominator share a root");
    return ExtendedComplex::infinity();
  }
  return n / d;
}

inline RationalMap derivative(const RationalMap& map) {
  if (map.den().is_constant()) return RationalMap::polynomial(map.num().derivative());
  const Polynomial& n = map.num();
  const Polynomial& d = map.den();
  return {n.derivative() * d - n * d.derivative(), d * d};
}

/// sum_k p_k alpha^k beta^(n-k), the homogeneous substitution of alpha/beta into p.
inline Polynomial substitute_homogeneous(const Polynomial& p, const Polynomial& alpha,
                                         const Polynomial& beta, std::size_t n) {
  std::vector<Polynomial> alpha_pow{Polynomial::constant(1.0)};
  std::vector<Polynomial> beta_pow{Polynomial::constant(1.0)};
  for (std::size_t k = 1; k <= n; ++k) {
    alpha_pow.push_back(alpha_pow.back() * alpha);
    beta_pow.push_back(beta_pow.back() * beta);
  }
  Polynomial out;
  for (std::size_t k = 0; k < p.size(); ++k)
    out += p.coeff(k) * (alpha_pow[k] * beta_pow[n - k]);
  return out;
}

/// g o R o g^-1.
inline RationalMap mobius_conjugate(const RationalMap& map, const MobiusMap& g) {
  const std::size_t n = map.degree();
  // g^-1(w) = (d w - b) / (-c w + a)
  const Polynomial alpha({-g.b(), g.d()});
  const Polynomial beta({g.a(), -g.c()});
  const Polynomial N = substitute_homogeneous(map.num(), alpha, beta, n);
  const Polynomial M = substitute_homogeneous(map.den(), alpha, beta, n);
  return {g.a() * N + g.b() * M, g.c() * N + g.d() * M};
}

/// The chart w -> 1/R(1/w) used to study the point at infinity.
inline RationalMap inversion_chart(const RationalMap& map) {
  const std::size_t n = map.degree();
  if (map.num().is_zero())
    throw Error(ErrorCode::invalid_argument, "inversion chart of the zero map is undefined");
  return {map.den().reversed(n), map.num().reversed(n)};
}

}  // namespace hfix
