#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <mpfr.h>

namespace expmath {

/// Working precision for one computation. Passed explicitly to every numeric
/// operation; nothing in the library reads an ambient default.
class PrecisionContext {
 public:
  static constexpr int kDefaultGuardDigits = 10;
  static constexpr long kMinBits = 64;

  /// Context carrying `target_digits` correct decimals plus guard digits.
  static PrecisionContext for_digits(int target_digits, int guard_digits = kDefaultGuardDigits);

  /// Validates the invariants: bits >= 64, guard >= 10 and bits covering
  /// target + guard decimal digits.
  PrecisionContext(long bits, int target_digits, int guard_digits);

  long bits() const noexcept { return bits_; }
  int target_digits() const noexcept { return target_digits_; }
  int guard_digits() const noexcept { return guard_digits_; }

  /// Same target, guard digits doubled (used when cancellation is detected).
  PrecisionContext widened() const;
  /// Same target and guard, `extra` more working bits.
  PrecisionContext with_extra_bits(long extra) const;

  static long bits_for_digits(int decimal_digits);

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

 private:
  long bits_;
  int target_digits_;
  int guard_digits_;
};

/// Arbitrary-precision real backed by an MPFR value. The precision a value
/// was computed at travels with it; binary operations produce a result at
/// the larger of the operand precisions.
class BigReal {
 public:
  explicit BigReal(long bits = PrecisionContext::kMinBits);
  BigReal(long value, long bits);
  BigReal(double value, long bits);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  /// Parses a decimal literal ("0.5", "-1.25e-3") at the given precision.
  static BigReal parse(std::string_view text, long bits);
  static BigReal from_int(long value, long bits) { return BigReal(value, bits); }
  static BigReal ratio(long num, long den, long bits);
  /// 10^exponent, correctly rounded.
  static BigReal pow10(long exponent, long bits);
  static BigReal infinity(long bits, int sign = 1);

  long computed_at_bits() const noexcept { return static_cast<long>(mpfr_get_prec(value_)); }
  BigReal at_bits(long bits) const;

  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_ptr get() noexcept { return value_; }

  int sign() const noexcept { return mpfr_sgn(value_); }
  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  bool is_integer() const noexcept { return mpfr_integer_p(value_) != 0; }
  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
  long to_long() const noexcept { return mpfr_get_si(value_, MPFR_RNDN); }
  /// Binary exponent e with 0.5 <= |x| / 2^e < 1; LONG_MIN for zero.
  long exponent2() const noexcept;

  /// Fixed-width decimal rendering with `significant` digits, round half to
  /// even, no locale. Fixed notation for moderate magnitudes, otherwise
  /// mantissa plus "e" exponent.
  std::string to_decimal(int significant) const;

  BigReal operator-() const;
  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal& operator+=(long rhs);
  BigReal& operator-=(long rhs);
  BigReal& operator*=(long rhs);
  BigReal& operator/=(long rhs);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator+(BigReal a, long b) { return a += b; }
  friend BigReal operator-(BigReal a, long b) { return a -= b; }
  friend BigReal operator*(BigReal a, long b) { return a *= b; }
  friend BigReal operator/(BigReal a, long b) { return a /= b; }
  friend BigReal operator+(long a, BigReal b) { return b += a; }
  friend BigReal operator-(long a, const BigReal& b) { return -(b - a); }
  friend BigReal operator*(long a, BigReal b) { return b *= a; }
  friend BigReal operator/(long a, const BigReal& b);

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, long b);

  friend std::ostream& operator<<(std::ostream& os, const BigReal& x);

 private:
  mpfr_t value_;
};

BigReal abs(const BigReal& x);
BigReal max(const BigReal& a, const BigReal& b);
BigReal min(const BigReal& a, const BigReal& b);
BigReal floor(const BigReal& x);
/// Nearest integer, ties away from zero.
BigReal round_nearest(const BigReal& x);
/// log10 of |x| as a double; -inf for zero.
double log10_abs(const BigReal& x);

}  // namespace expmath
