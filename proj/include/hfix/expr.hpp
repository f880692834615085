#pragma once

#include <charconv>
#include <cmath>
#include <cstring>
#include <string>
#include <string_view>
#include <system_error>

#include "hfix/core.hpp"
#include "hfix/poly.hpp"

namespace hfix {

enum class FunctionKind { polynomial, rational };

struct FunctionExpr {
  std::string text;
  FunctionKind kind = FunctionKind::polynomial;
  RationalMap value;
};

namespace detail {

// Value of a subexpression. A rational value (z in the divisor) may only be
// scaled by z-free factors; any other arithmetic on it is a nested division.
struct ExprValue {
  Polynomial num;
  Polynomial den = Polynomial::constant(1.0);
  bool rational = false;
  std::size_t offset = 0;  // where the expression started, for error messages
};

class ExprParser {
 public:
  static constexpr unsigned kMaxExponent = 256;
  static constexpr int kMaxDepth = 200;

  explicit ExprParser(std::string_view text) : s_(text) {}

  FunctionExpr parse() {
    skip_ws();
    if (pos_ == s_.size()) fail("empty expression");
    ExprValue v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    FunctionExpr out;
    out.text = std::string(s_);
    out.kind = v.rational ? FunctionKind::rational : FunctionKind::polynomial;
    out.value = RationalMap(std::move(v.num), std::move(v.den));
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ErrorCode code = ErrorCode::parse) const {
    throw ParseError(code, pos_, msg);
  }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg, ErrorCode code = ErrorCode::parse) const {
    throw ParseError(code, at, msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void nested(const ExprValue& v, std::size_t at) const {
    if (v.rational)
      fail_at(at, "nested division by an expression in z is not supported (one top-level fraction bar only)");
  }

  ExprValue expr() {
    ExprValue acc = term();
    while (true) {
      skip_ws();
      if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) return acc;
      const char op = s_[pos_];
      const std::size_t at = pos_++;
      ExprValue rhs = term();
      nested(acc, at);
      nested(rhs, at);
      if (op == '+')
        acc.num += rhs.num;
      else
        acc.num -= rhs.num;
    }
  }

  ExprValue term() {
    ExprValue acc = factor();
    while (true) {
      skip_ws();
      if (pos_ >= s_.size() || (s_[pos_] != '*' && s_[pos_] != '/')) return acc;
      const char op = s_[pos_];
      const std::size_t at = pos_++;
      ExprValue rhs = factor();
      nested(rhs, at);
      if (op == '*') {
        if (acc.rational && !rhs.num.is_constant()) nested(acc, at);
        acc.num *= rhs.num;
        continue;
      }
      if (rhs.num.is_zero()) fail_at(rhs.offset, "division by zero", ErrorCode::zero_denominator);
      if (rhs.num.is_constant()) {
        acc.num *= 1.0 / rhs.num.coeff(0);
        continue;
      }
      nested(acc, at);
      acc.den = std::move(rhs.num);
      acc.rational = true;
    }
  }

  // factor := ("-")? base ("^" uint)*   with ^ right-associative
  ExprValue factor() {
    skip_ws();
    const std::size_t start = pos_;
    bool negate = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negate = true;
      ++pos_;
    }
    ExprValue v = base();
    v.offset = start;
    if (peek('^')) {
      const std::size_t at = pos_;
      const unsigned e = exponent_chain();
      nested(v, at);
      v.num = v.num.pow(e);
    }
    if (negate) v.num = -v.num;
    return v;
  }

  unsigned exponent_chain() {
    ++pos_;  // '^'
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= s_.size() || !is_digit(s_[pos_]))
      fail("exponent must be a nonnegative integer", ErrorCode::bad_exponent);
    unsigned long value = 0;
    while (pos_ < s_.size() && is_digit(s_[pos_])) {
      value = value * 10 + static_cast<unsigned long>(s_[pos_] - '0');
      if (value > kMaxExponent) fail_at(at, "exponent too large (limit 256)", ErrorCode::bad_exponent);
      ++pos_;
    }
    if (pos_ < s_.size() && s_[pos_] == '.')
      fail("exponent must be a nonnegative integer", ErrorCode::bad_exponent);
    if (peek('^')) {
      const unsigned rest = exponent_chain();
      double p = std::pow(static_cast<double>(value), static_cast<double>(rest));
      if (p > kMaxExponent) fail_at(at, "exponent too large (limit 256)", ErrorCode::bad_exponent);
      return static_cast<unsigned>(p);
    }
    return static_cast<unsigned>(value);
  }

  void no_adjacent_operand() {
    if (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == 'z' || c == 'i' || c == '(' || is_digit(c) || c == '.')
        fail("implicit multiplication is not supported; use '*'");
    }
  }

  ExprValue base() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    ExprValue v;
    v.offset = pos_;
    if (c == 'z') {
      ++pos_;
      v.num = Polynomial::identity();
    } else if (c == 'i') {
      ++pos_;
      v.num = Polynomial::constant({0.0, 1.0});
    } else if (is_digit(c)) {
      const double x = number();
      // "<number>i" is an imaginary literal, as emitted by format_function.
      if (pos_ < s_.size() && s_[pos_] == 'i') {
        ++pos_;
        v.num = Polynomial::constant({0.0, x});
      } else {
        v.num = Polynomial::constant(x);
      }
    } else if (c == '(') {
      if (++depth_ > kMaxDepth) fail("expression nested too deeply");
      const std::size_t open = pos_++;
      v = expr();
      v.offset = open;
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      --depth_;
    } else {
      fail("unexpected '" + std::string(1, c) + "'");
    }
    no_adjacent_operand();
    return v;
  }

  // digits ("." digits)?
  double number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      if (pos_ >= s_.size() || !is_digit(s_[pos_])) fail("expected digits after '.'");
      while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    }
    double x = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, x);
    if (res.ec == std::errc::result_out_of_range || !std::isfinite(x))
      fail_at(start, "numeric literal out of range");
    return x;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

inline std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[400];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

inline std::string format_coefficient(Complex a) {
  std::string s = "(" + format_real(a.real());
  const double im = a.imag();
  if (im < 0.0)
    s += "-" + format_real(-im);
  else
    s += "+" + format_real(im);
  return s + "i)";
}

inline std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "(0+0i)";
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Complex a = p.coeff(k);
    if (a == Complex{}) continue;
    if (!out.empty()) out += " + ";
    out += format_coefficient(a);
    if (k == 1) out += "*z";
    if (k > 1) out += "*z^" + std::to_string(k);
  }
  return out;
}

}  // namespace detail

/// Parses an expression in z over {+, -, *, /, ^, unary -, parentheses, z, i,
/// decimal literals}. Division by an expression containing z is allowed only
/// once, as the outermost fraction bar.
inline FunctionExpr parse_function_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

inline RationalMap parse_function(std::string_view text) { return parse_function_expr(text).value; }

/// Canonical text: ascending powers, explicit '*', coefficients as (a+bi).
/// Parsing the result gives back the same coefficients.
inline std::string format_function(const RationalMap& map) {
  if (map.den().is_constant() && map.den().coeff(0) == Complex{1.0}) return detail::format_polynomial(map.num());
  return "(" + detail::format_polynomial(map.num()) + ") / (" + detail::format_polynomial(map.den()) + ")";
}

}  // namespace hfix
