#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hfix {

using Complex = std::complex<double>;

enum class ErrorCode {
  parse,
  zero_denominator,
  bad_exponent,
  indeterminate,
  degenerate_mobius,
  degree_too_low,
  identity_map,
  not_a_fixed_point,
  pole_on_contour,
  no_convergence,
  invalid_argument,
  empty_report,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A parse failure, positioned at a byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t offset, const std::string& message)
      : Error(code, "offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        message_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

/// A point of the Riemann sphere: either a finite complex number or infinity.
class ExtendedComplex {
 public:
  constexpr ExtendedComplex() = default;
  constexpr ExtendedComplex(Complex z) : value_(z) {}  // NOLINT: implicit on purpose
  constexpr ExtendedComplex(double x) : value_(x, 0.0) {}  // NOLINT

  static constexpr ExtendedComplex infinity() {
    ExtendedComplex p;
    p.infinite_ = true;
    return p;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }

  Complex value() const {
    if (infinite_) throw Error(ErrorCode::invalid_argument, "point at infinity has no finite value");
    return value_;
  }

  friend bool operator==(const ExtendedComplex& a, const ExtendedComplex& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  Complex value_{};
  bool infinite_ = false;
};

/// Numerical knobs shared by the root finder and the fixed-point analysis.
struct Tolerances {
  double root = 1e-12;                 // Aberth correction threshold, relative to 1 + |z|
  double cluster = 1e-6;               // clustering radius, scaled by 1 + max |root|
  double multiplier_one = 1e-8;        // |lambda - 1| band treated as multiplier 1
  double index_agreement = 1e-8;       // contour vs closed-form index
  double sum_pass = 1e-7;              // |sum of indices - 1|
  double super_attracting = 1e-12;     // |lambda| at or below is super-attracting
  double unit_circle = 1e-9;           // half-width of the indifferent band around |lambda| = 1
  double rational_indifferent = 1e-6;  // |lambda^k - 1| for rational indifference
  int rational_period_max = 64;
  double identity = 1e-14;             // num - z den == 0 detection, relative
  double contour = 1e-10;              // successive quadrature agreement
  std::size_t contour_max_points = std::size_t{1} << 16;
  std::size_t max_sweeps = 1000;
  double fixed_residual = 1e-8;        // |R(z) - z| accepted as "is a fixed point"
  double witness = 1e-9;               // one-sided slack on Re >= 1 / Re <= 1 / Im >= 0
};

}  // namespace hfix
