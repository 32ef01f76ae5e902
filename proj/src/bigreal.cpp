#include "expmath/bigreal.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <ostream>
#include <string>

#include "expmath/errors.hpp"

namespace expmath {

namespace {

constexpr double kLog2Of10 = 3.321928094887362347870319429489390175864831393;

// Fixed notation is used while the decimal exponent stays inside this window.
constexpr long kFixedMinExponent = -20;
constexpr long kFixedMaxExponent = 60;

long max_prec(const BigReal& a, const BigReal& b) {
  return std::max(a.computed_at_bits(), b.computed_at_bits());
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::PrecisionUnachievable: return "precision-unachievable";
    case ErrorKind::NonpositiveArgument: return "nonpositive-argument";
    case ErrorKind::DivergentParameters: return "divergent-parameters";
    case ErrorKind::ArgumentOutOfRange: return "argument-out-of-range";
    case ErrorKind::DomainViolation: return "domain-violation";
    case ErrorKind::IntegrandFailure: return "integrand-evaluation-failure";
    case ErrorKind::TailBoundViolation: return "tail-bound-violation";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::DegenerateDenominator: return "degenerate-denominator";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::SafeguardExhausted: return "safeguard-exhausted";
    case ErrorKind::InsufficientPrecision: return "insufficient-precision";
    case ErrorKind::EmptyStream: return "empty-stream";
    case ErrorKind::SizeTooSmall: return "size-too-small";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// PrecisionContext

long PrecisionContext::bits_for_digits(int decimal_digits) {
  return static_cast<long>(std::ceil(decimal_digits * kLog2Of10));
}

PrecisionContext PrecisionContext::for_digits(int target_digits, int guard_digits) {
  if (target_digits < 1) throw Error(ErrorKind::InvalidArgument, "target_digits must be >= 1");
  const long bits = std::max(kMinBits, bits_for_digits(target_digits + guard_digits));
  return PrecisionContext(bits, target_digits, guard_digits);
}

PrecisionContext::PrecisionContext(long bits, int target_digits, int guard_digits)
    : bits_(bits), target_digits_(target_digits), guard_digits_(guard_digits) {
  if (target_digits < 1) throw Error(ErrorKind::InvalidArgument, "target_digits must be >= 1");
  if (guard_digits < kDefaultGuardDigits)
    throw Error(ErrorKind::InvalidArgument, "guard_digits must be >= 10");
  if (bits < kMinBits) throw Error(ErrorKind::InvalidArgument, "bits must be >= 64");
  if (bits < bits_for_digits(target_digits + guard_digits))
    throw Error(ErrorKind::InvalidArgument, "bits do not cover target_digits + guard_digits");
  if (bits > MPFR_PREC_MAX / 4) throw Error(ErrorKind::InvalidArgument, "bits out of range");
}

PrecisionContext PrecisionContext::widened() const {
  const int guard = guard_digits_ * 2;
  return PrecisionContext(std::max(bits_, bits_for_digits(target_digits_ + guard)), target_digits_, guard);
}

PrecisionContext PrecisionContext::with_extra_bits(long extra) const {
  return PrecisionContext(bits_ + std::max(0L, extra), target_digits_, guard_digits_);
}

// ---------------------------------------------------------------------------
// BigReal

BigReal::BigReal(long bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(long value, long bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

BigReal::BigReal(double value, long bits) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  // Leave `other` as a valid 64-bit zero so its destructor stays cheap.
  mpfr_init2(value_, PrecisionContext::kMinBits);
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

BigReal BigReal::parse(std::string_view text, long bits) {
  std::string s(text);
  BigReal r(bits);
  char* end = nullptr;
  if (!s.empty()) mpfr_strtofr(r.value_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == nullptr || end == s.c_str() || *end != '\0' || !r.is_finite())
    throw Error(ErrorKind::InvalidArgument, "not a decimal number: '" + s + "'");
  return r;
}

BigReal BigReal::ratio(long num, long den, long bits) {
  if (den == 0) throw Error(ErrorKind::DomainViolation, "zero denominator");
  BigReal r(num, bits);
  mpfr_div_si(r.value_, r.value_, den, MPFR_RNDN);
  return r;
}

BigReal BigReal::pow10(long exponent, long bits) {
  BigReal r(bits);
  mpfr_ui_pow_ui(r.value_, 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent), MPFR_RNDN);
  if (exponent < 0) mpfr_ui_div(r.value_, 1, r.value_, MPFR_RNDN);
  return r;
}

BigReal BigReal::infinity(long bits, int sign) {
  BigReal r(bits);
  mpfr_set_inf(r.value_, sign);
  return r;
}

BigReal BigReal::at_bits(long bits) const {
  BigReal r(bits);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

long BigReal::exponent2() const noexcept {
  if (mpfr_zero_p(value_) || !mpfr_number_p(value_)) return LONG_MIN;
  return static_cast<long>(mpfr_get_exp(value_));
}

std::string BigReal::to_decimal(int significant) const {
  if (significant < 1) throw Error(ErrorKind::InvalidArgument, "significant digits must be >= 1");
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(value_)) return "0";

  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(significant), value_, MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);

  std::string sign;
  if (!digits.empty() && digits.front() == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  // value = 0.d1d2...dn * 10^exp10
  const long e = static_cast<long>(exp10);
  const long n = static_cast<long>(digits.size());
  std::string out;
  if (e <= 0 && e > kFixedMinExponent) {
    out = "0." + std::string(static_cast<size_t>(-e), '0') + digits;
  } else if (e > 0 && e < n) {
    out = digits.substr(0, static_cast<size_t>(e)) + "." + digits.substr(static_cast<size_t>(e));
  } else if (e >= n && e <= kFixedMaxExponent) {
    out = digits + std::string(static_cast<size_t>(e - n), '0');
  } else {
    out = digits.substr(0, 1);
    if (n > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(e - 1);
  }
  return sign + out;
}

BigReal BigReal::operator-() const {
  BigReal r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

#define EXPMATH_COMPOUND(op, fn)                                    \
  BigReal& BigReal::operator op(const BigReal& rhs) {               \
    if (mpfr_get_prec(rhs.value_) > mpfr_get_prec(value_))          \
      mpfr_prec_round(value_, mpfr_get_prec(rhs.value_), MPFR_RNDN); \
    fn(value_, value_, rhs.value_, MPFR_RNDN);                       \
    return *this;                                                    \
  }
EXPMATH_COMPOUND(+=, mpfr_add)
EXPMATH_COMPOUND(-=, mpfr_sub)
EXPMATH_COMPOUND(*=, mpfr_mul)
EXPMATH_COMPOUND(/=, mpfr_div)
#undef EXPMATH_COMPOUND

BigReal& BigReal::operator+=(long rhs) { mpfr_add_si(value_, value_, rhs, MPFR_RNDN); return *this; }
BigReal& BigReal::operator-=(long rhs) { mpfr_sub_si(value_, value_, rhs, MPFR_RNDN); return *this; }
BigReal& BigReal::operator*=(long rhs) { mpfr_mul_si(value_, value_, rhs, MPFR_RNDN); return *this; }
BigReal& BigReal::operator/=(long rhs) { mpfr_div_si(value_, value_, rhs, MPFR_RNDN); return *this; }

#define EXPMATH_BINARY(op, fn)                                  \
  BigReal operator op(const BigReal& a, const BigReal& b) {     \
    BigReal r(max_prec(a, b));                                  \
    fn(r.value_, a.value_, b.value_, MPFR_RNDN);                \
    return r;                                                   \
  }
EXPMATH_BINARY(+, mpfr_add)
EXPMATH_BINARY(-, mpfr_sub)
EXPMATH_BINARY(*, mpfr_mul)
EXPMATH_BINARY(/, mpfr_div)
#undef EXPMATH_BINARY

BigReal operator/(long a, const BigReal& b) {
  BigReal r(b.computed_at_bits());
  mpfr_si_div(r.value_, a, b.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const BigReal& a, long b) {
  if (mpfr_nan_p(a.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::ostream& operator<<(std::ostream& os, const BigReal& x) {
  const auto digits = static_cast<int>(std::max(1.0, std::floor(x.computed_at_bits() / kLog2Of10)));
  return os << x.to_decimal(digits);
}

BigReal abs(const BigReal& x) {
  BigReal r(x);
  mpfr_abs(r.get(), r.get(), MPFR_RNDN);
  return r;
}

BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
BigReal min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }

BigReal floor(const BigReal& x) {
  BigReal r(x.computed_at_bits());
  mpfr_floor(r.get(), x.get());
  return r;
}

BigReal round_nearest(const BigReal& x) {
  BigReal r(x.computed_at_bits());
  mpfr_round(r.get(), x.get());
  return r;
}

double log10_abs(const BigReal& x) {
  if (x.is_zero()) return -INFINITY;
  long e = 0;
  const double m = mpfr_get_d_2exp(&e, x.get(), MPFR_RNDN);
  return std::log10(std::fabs(m)) + static_cast<double>(e) * 0.30102999566398119521;
}

}  // namespace expmath
