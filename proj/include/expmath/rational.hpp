#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "expmath/bigreal.hpp"

namespace expmath {

/// Exact rational with 64-bit numerator and denominator, always reduced and
/// with a positive denominator. Overflow is reported, never wrapped.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }
  bool is_nonpositive_integer() const noexcept { return den_ == 1 && num_ <= 0; }

  BigReal to_big(long bits) const { return BigReal::ratio(num_, den_, bits); }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  /// "p/q", or "p" when the denominator is 1.
  std::string to_string() const;
  /// Parses "p/q" or an integer.
  static Rational parse(const std::string& text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace expmath
