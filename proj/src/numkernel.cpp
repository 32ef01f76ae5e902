#include "expmath/numkernel.hpp"

#include <cmath>
#include <cstdlib>

#include "expmath/errors.hpp"

namespace expmath::numkernel {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLog2E = 1.44269504088896340736;

// Extra bits carried by the series evaluators on top of ctx.bits().
constexpr long kSeriesGuardBits = 32;

// Terms allowed per hypergeometric evaluation before giving up.
constexpr long kHypergeometricMaxTerms = 50'000'000;

BigReal unary(int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t), const BigReal& x, const PrecisionContext& ctx) {
  BigReal r(ctx.bits());
  fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}

// 2^(-bits) at the given precision.
BigReal ulp_scale(long bits, long precision) {
  BigReal r(1L, precision);
  mpfr_div_2si(r.get(), r.get(), bits, MPFR_RNDN);
  return r;
}

}  // namespace

BigReal exp(const BigReal& x, const PrecisionContext& ctx) { return unary(mpfr_exp, x, ctx); }

BigReal ln(const BigReal& x, const PrecisionContext& ctx) {
  if (x.sign() <= 0) throw Error(ErrorKind::DomainViolation, "ln requires x > 0");
  return unary(mpfr_log, x, ctx);
}

BigReal sqrt(const BigReal& x, const PrecisionContext& ctx) {
  if (x.sign() < 0) throw Error(ErrorKind::DomainViolation, "sqrt requires x >= 0");
  return unary(mpfr_sqrt, x, ctx);
}

BigReal nthroot(const BigReal& x, unsigned long n, const PrecisionContext& ctx) {
  if (n == 0) throw Error(ErrorKind::DomainViolation, "zeroth root");
  if (x.sign() < 0 && n % 2 == 0) throw Error(ErrorKind::DomainViolation, "even root of a negative number");
  BigReal r(ctx.bits());
  mpfr_rootn_ui(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

BigReal sin(const BigReal& x, const PrecisionContext& ctx) { return unary(mpfr_sin, x, ctx); }
BigReal cos(const BigReal& x, const PrecisionContext& ctx) { return unary(mpfr_cos, x, ctx); }

BigReal power(const BigReal& base, const BigReal& exponent, const PrecisionContext& ctx) {
  if (base.sign() < 0 && !exponent.is_integer())
    throw Error(ErrorKind::DomainViolation, "non-integer power of a negative number");
  if (base.is_zero() && exponent.sign() < 0) throw Error(ErrorKind::DomainViolation, "negative power of zero");
  BigReal r(ctx.bits());
  mpfr_pow(r.get(), base.get(), exponent.get(), MPFR_RNDN);
  return r;
}

BigReal power(const BigReal& base, long exponent, const PrecisionContext& ctx) {
  if (base.is_zero() && exponent < 0) throw Error(ErrorKind::DomainViolation, "negative power of zero");
  BigReal r(ctx.bits());
  mpfr_pow_si(r.get(), base.get(), exponent, MPFR_RNDN);
  return r;
}

BigReal elementary(ElementaryOp op, const BigReal& x, const PrecisionContext& ctx) {
  switch (op) {
    case ElementaryOp::Exp: return exp(x, ctx);
    case ElementaryOp::Ln: return ln(x, ctx);
    case ElementaryOp::Sqrt: return sqrt(x, ctx);
    case ElementaryOp::Cbrt: return nthroot(x, 3, ctx);
    case ElementaryOp::Sin: return sin(x, ctx);
    case ElementaryOp::Cos: return cos(x, ctx);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown elementary op");
}

BigReal pi_constant(const PrecisionContext& ctx) {
  BigReal r(ctx.bits());
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

// Bessel-function formula: with U = sum (n^k/k!)^2 (H_k - ln n) and V = sum (n^k/k!)^2,
// gamma = U/V - K0(2n)/I0(2n) and the correction is below pi e^{-4n}.
BigReal euler_gamma(const PrecisionContext& ctx) {
  const long wb = ctx.bits() + kSeriesGuardBits;
  const auto n = static_cast<long>(std::ceil((static_cast<double>(wb) * kLn2 + 4.0) / 4.0));
  const PrecisionContext work = ctx.with_extra_bits(kSeriesGuardBits + static_cast<long>(std::log2(n)) + 8);
  const long bits = work.bits();

  const BigReal log_n = ln(BigReal(n, bits), work);
  BigReal term(1L, bits);  // (n^k / k!)^2
  BigReal harmonic(0L, bits);
  BigReal u = -log_n;
  BigReal v(1L, bits);
  const BigReal tiny = ulp_scale(bits, 64);
  const long n2 = n * n;

  const long max_terms = 8 * n + 64;
  long k = 1;
  for (; k <= max_terms; ++k) {
    term *= n2;
    term /= k * k;
    harmonic += BigReal::ratio(1, k, bits);
    u += term * (harmonic - log_n);
    v += term;
    if (k > n && term * (harmonic + log_n) < v * tiny) break;
  }
  if (k > max_terms) throw Error(ErrorKind::PrecisionUnachievable, "Euler gamma series did not converge");
  return (u / v).at_bits(ctx.bits());
}

BigReal zeta3(const PrecisionContext& ctx) {
  const long bits = ctx.bits() + kSeriesGuardBits;
  const BigReal tiny = ulp_scale(bits, 64);
  BigReal term(1L, bits);
  term /= 2;  // k = 1: 1 / (1^3 C(2,1))
  BigReal sum(term);
  const long max_terms = bits + 64;  // each term gains two bits
  long k = 1;
  for (; k <= max_terms; ++k) {
    // t_{k+1} = t_k k^3 / ((k+1)(2k+1)(2k+2))
    const auto kk = static_cast<unsigned long>(k);
    mpfr_mul_ui(term.get(), term.get(), kk * kk * kk, MPFR_RNDN);
    mpfr_div_ui(term.get(), term.get(), (kk + 1) * (2 * kk + 1) * (2 * kk + 2), MPFR_RNDN);
    if (k % 2 == 1)
      sum -= term;
    else
      sum += term;
    if (term < tiny) break;
  }
  if (k > max_terms) throw Error(ErrorKind::PrecisionUnachievable, "zeta(3) series did not converge");
  sum *= 5;
  sum /= 2;
  return sum.at_bits(ctx.bits());
}

// ---------------------------------------------------------------------------
// K0

BesselK0::BesselK0(const PrecisionContext& ctx)
    : ctx_(ctx),
      series_bits_(0),
      switch_point_(ctx.bits()),
      gamma_(ctx.bits()),
      half_log_pi_over_2_(ctx.bits()) {
  const long wb = ctx.bits() + kSeriesGuardBits;
  // The asymptotic series' smallest term is about e^{-2t}; past this point it
  // alone meets the working precision.
  const double t_switch = std::ceil((static_cast<double>(wb) + 16.0) * kLn2 / 2.0) + 2.0;
  switch_point_ = BigReal(t_switch, ctx.bits());
  series_bits_ = wb + static_cast<long>(std::ceil(2.0 * t_switch * kLog2E)) + 16;
  const PrecisionContext series_ctx = ctx.with_extra_bits(series_bits_ - ctx.bits());
  gamma_ = euler_gamma(series_ctx);
  const PrecisionContext wctx = ctx.with_extra_bits(kSeriesGuardBits);
  half_log_pi_over_2_ = ln(pi_constant(wctx) / 2, wctx) / 2;
}

BigReal BesselK0::series(const BigReal& t) const {
  if (t.sign() <= 0) throw Error(ErrorKind::NonpositiveArgument, "K0 requires t > 0");
  const double td = t.to_double();
  const long extra = std::isfinite(td) ? static_cast<long>(std::ceil(2.0 * std::max(td, 0.0) * kLog2E)) : 0;
  const long bits = std::min(series_bits_, ctx_.bits() + kSeriesGuardBits + extra + 16);
  if (extra > series_bits_)
    throw Error(ErrorKind::PrecisionUnachievable, "series route needs more bits than the evaluator holds");
  const PrecisionContext work = ctx_.with_extra_bits(bits - ctx_.bits());

  const BigReal x = t.at_bits(bits);
  BigReal quarter_sq = x * x;
  quarter_sq /= 4;
  BigReal q(1L, bits);  // (t^2/4)^k / (k!)^2
  BigReal i0(1L, bits);
  BigReal s(0L, bits);
  BigReal harmonic(0L, bits);
  const BigReal tiny = ulp_scale(bits, 64);
  const long half_t = static_cast<long>(td / 2.0) + 1;
  const long max_terms = 4 * half_t + bits;
  long k = 1;
  for (; k <= max_terms; ++k) {
    q *= quarter_sq;
    q /= k * k;
    harmonic += BigReal::ratio(1, k, bits);
    i0 += q;
    s += q * harmonic;
    if (k > half_t && q * harmonic < i0 * tiny) break;
  }
  if (k > max_terms) throw Error(ErrorKind::PrecisionUnachievable, "K0 series did not converge");
  const BigReal lead = ln(x / 2, work) + gamma_.at_bits(bits);
  return (s - lead * i0).at_bits(ctx_.bits());
}

BigReal BesselK0::asymptotic_log(const BigReal& t) const {
  if (t < switch_point_) throw Error(ErrorKind::ArgumentOutOfRange, "asymptotic K0 below its switch point");
  const long bits = ctx_.bits() + kSeriesGuardBits;
  const PrecisionContext work = ctx_.with_extra_bits(kSeriesGuardBits);
  const BigReal x = t.at_bits(bits);
  const BigReal tiny = ulp_scale(bits, 64);
  BigReal a(1L, bits);
  BigReal sum(1L, bits);
  BigReal eight_t = x * 8;
  for (long k = 0;; ++k) {
    BigReal next = a * ((2 * k + 1) * (2 * k + 1));
    next /= eight_t;
    next /= k + 1;
    next = -next;
    if (abs(next) >= abs(a)) break;  // smallest term passed
    sum += next;
    a = std::move(next);
    if (abs(a) < tiny) break;
  }
  // ln K0 = 1/2 ln(pi/2) - 1/2 ln t - t + ln S
  BigReal log_value = half_log_pi_over_2_.at_bits(bits) - ln(x, work) / 2 - x + ln(sum, work);
  return log_value.at_bits(ctx_.bits());
}

BigReal BesselK0::integral(const BigReal& t) const {
  if (t.sign() <= 0) throw Error(ErrorKind::NonpositiveArgument, "K0 requires t > 0");
  const long bits = ctx_.bits() + kSeriesGuardBits;
  const PrecisionContext work = ctx_.with_extra_bits(kSeriesGuardBits);
  const double td = t.to_double();
  // Trapezoidal error ~ exp(-pi^2/h) in absolute terms; K0 ~ e^{-t}, so the
  // step must also absorb the e^{t} relative loss.
  const double budget = static_cast<double>(bits) * kLn2 + td + 8.0;
  const double h_d = M_PI * M_PI / budget;
  // Truncate where t cosh u exceeds the budget.
  const double u_max = std::acosh(std::max(1.0, (budget + 4.0) / td)) + 1.0;
  const auto nodes = static_cast<long>(std::ceil(u_max / h_d));

  const BigReal x = t.at_bits(bits);
  BigReal h(h_d, bits);
  BigReal sum = exp(-x, work) / 2;
  BigReal arg(bits);
  BigReal c(bits);
  for (long k = 1; k <= nodes; ++k) {
    mpfr_mul_si(arg.get(), h.get(), k, MPFR_RNDN);
    mpfr_cosh(c.get(), arg.get(), MPFR_RNDN);
    sum += exp(-(x * c), work);
  }
  sum *= h;
  return sum.at_bits(ctx_.bits());
}

K0Value BesselK0::operator()(const BigReal& t) const {
  if (t.sign() <= 0) throw Error(ErrorKind::NonpositiveArgument, "K0 requires t > 0");
  if (t < switch_point_) {
    BigReal v = series(t);
    BigReal lv = ln(v, ctx_);
    return K0Value{std::move(v), std::move(lv), false};
  }
  BigReal lv = asymptotic_log(t);
  // Below this, exp() would underflow the exponent range.
  const double floor_log = (static_cast<double>(mpfr_get_emin()) + 128.0) * kLn2;
  if (lv.to_double() < floor_log) return K0Value{BigReal(0L, ctx_.bits()), std::move(lv), true};
  BigReal v = exp(lv, ctx_);
  return K0Value{std::move(v), std::move(lv), false};
}

K0Value bessel_k0(const BigReal& t, const PrecisionContext& ctx) {
  if (t.sign() <= 0) throw Error(ErrorKind::NonpositiveArgument, "K0 requires t > 0");
  return BesselK0(ctx)(t);
}

// ---------------------------------------------------------------------------
// 2F1

BigReal hyp2f1(const Rational& a, const Rational& b, const Rational& c, const BigReal& z,
               const PrecisionContext& ctx) {
  if (c.is_nonpositive_integer())
    throw Error(ErrorKind::DivergentParameters, "c = " + c.to_string() + " is a nonpositive integer");
  if (!(abs(z) < 1L)) throw Error(ErrorKind::ArgumentOutOfRange, "hypergeometric series needs |z| < 1");

  const long bits = ctx.bits() + kSeriesGuardBits;
  const BigReal tiny = ulp_scale(bits, 64);
  const BigReal abs_z = abs(z).at_bits(bits);
  // (a+k) = (a.num + k a.den) / a.den etc.; the constant denominators fold into z.
  BigReal zz = z.at_bits(bits);
  zz *= c.den();
  zz /= a.den();
  zz /= b.den();

  // Past this index every ratio factor is within its monotone regime.
  const double settle = 2.0 * (std::fabs(a.to_double()) + std::fabs(b.to_double()) + std::fabs(c.to_double())) + 2.0;
  BigReal term(1L, bits);
  BigReal sum(1L, bits);
  for (long k = 0; k < kHypergeometricMaxTerms; ++k) {
    const __int128 an = static_cast<__int128>(a.num()) + static_cast<__int128>(k) * a.den();
    const __int128 bn = static_cast<__int128>(b.num()) + static_cast<__int128>(k) * b.den();
    const __int128 cn = static_cast<__int128>(c.num()) + static_cast<__int128>(k) * c.den();
    if (an == 0 || bn == 0) return sum.at_bits(ctx.bits());  // terminating polynomial
    term *= static_cast<long>(an);
    term *= static_cast<long>(bn);
    term /= static_cast<long>(cn);
    term /= k + 1;
    term *= zz;
    sum += term;

    if (static_cast<double>(k) > settle) {
      // Ratio of the next term to this one, in absolute value.
      const double ka = static_cast<double>(k + 1);
      const double f = std::fabs((a.to_double() + ka) * (b.to_double() + ka) /
                                 ((c.to_double() + ka) * (ka + 1.0)));
      BigReal rho = abs_z * BigReal(std::max(1.0, f) * (1.0 + 1e-12), 64);
      if (rho >= 1L) continue;
      const BigReal tail = abs(term) * rho / (1L - rho);
      if (tail <= abs(sum) * tiny) return sum.at_bits(ctx.bits());
    }
  }
  throw Error(ErrorKind::PrecisionUnachievable, "hypergeometric series did not converge");
}

}  // namespace expmath::numkernel
