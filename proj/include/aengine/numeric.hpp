#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace aengine {

using BigInt = boost::multiprecision::cpp_int;

struct ZeroDenominator : std::domain_error {
  ZeroDenominator() : std::domain_error("zero denominator") {}
};

struct DivisionByZero : std::domain_error {
  DivisionByZero() : std::domain_error("division by zero") {}
};

struct RationalSyntaxError : std::invalid_argument {
  explicit RationalSyntaxError(std::string_view text)
      : std::invalid_argument("malformed rational '" + std::string(text) + "'") {}
};

/// Exact signed rational. Always canonical: den > 0, gcd(|num|, den) = 1,
/// zero is 0/1. Equality is therefore structural.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long value) : num_(value), den_(1) {}  // NOLINT: implicit from integers
  Rational(BigInt value) : num_(std::move(value)), den_(1) {}  // NOLINT
  Rational(BigInt num, BigInt den);

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_.sign(); }

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// `[-]p/q`, with `/q` omitted when q = 1.
  std::string str() const;

  /// Accepts `[-]digits[/digits]`; the result is canonicalized.
  static Rational parse(std::string_view text);

 private:
  void canonicalize();

  BigInt num_;
  BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Throws ZeroDenominator when q = 0.
Rational make_rational(const BigInt& p, const BigInt& q);

enum class ArithOp { Add, Sub, Mul, Div };

/// One of the mill's four elemental operations. Throws DivisionByZero.
Rational rat_arith(ArithOp op, const Rational& a, const Rational& b);

/// C(n, k); zero when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

BigInt factorial(std::uint64_t n);

BigInt ipow(const BigInt& base, std::uint64_t exponent);

}  // namespace aengine
