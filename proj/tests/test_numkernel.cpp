#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "expmath/errors.hpp"
#include "expmath/numkernel.hpp"

using namespace expmath;
namespace nk = expmath::numkernel;

namespace {

// Euler-Maclaurin for H_N - ln N with Bernoulli numbers B_2..B_20; with
// N = 1000 the first omitted term is below 1e-57. Independent of the
// Bessel-function route used by the library.
BigReal gamma_euler_maclaurin(long bits) {
  const PrecisionContext ctx(bits, 10, 10);
  const long n = 1000;
  BigReal h(0L, bits);
  for (long k = 1; k <= n; ++k) h += BigReal::ratio(1, k, bits);
  BigReal nn(n, bits);
  BigReal g = h - nk::ln(nn, ctx) - BigReal::ratio(1, 2 * n, bits);
  const long bern_num[] = {1, -1, 1, -1, 5, -691, 7, -3617, 43867, -174611};
  const long bern_den[] = {6, 30, 42, 30, 66, 2730, 6, 510, 798, 330};
  BigReal npow(1L, bits);
  for (int j = 0; j < 10; ++j) {
    const long two_k = 2 * (j + 1);
    npow *= nn;
    npow *= nn;
    BigReal term = BigReal::ratio(bern_num[j], bern_den[j] * two_k, bits) / npow;
    g += term;
  }
  return g;
}

// Amdeberhan-Zeilberger: zeta(3) = 1/64 sum (-1)^k (205k^2+250k+77) (k!)^10 / ((2k+1)!)^5.
BigReal zeta3_amdeberhan(long bits) {
  BigReal sum(0L, bits);
  BigReal ratio(1L, bits);  // (k!)^10 / ((2k+1)!)^5
  for (long k = 0; k < 400; ++k) {
    if (k > 0) {
      for (int r = 0; r < 10; ++r) ratio *= k;
      for (int r = 0; r < 5; ++r) {
        ratio /= 2 * k;
        ratio /= 2 * k + 1;
      }
    }
    BigReal term = ratio * (205 * k * k + 250 * k + 77);
    if (k % 2 == 0)
      sum += term;
    else
      sum -= term;
    if (log10_abs(term) < -(static_cast<double>(bits) * 0.302) - 10) break;
  }
  return sum / 64;
}

bool agree(const BigReal& a, const BigReal& b, int digits) {
  return abs(a - b) <= abs(b) * BigReal::pow10(-digits, a.computed_at_bits());
}

}  // namespace

TEST_CASE("precision context invariants") {
  const auto ctx = PrecisionContext::for_digits(50);
  CHECK(ctx.guard_digits() == 10);
  CHECK(ctx.bits() >= 200);
  CHECK(PrecisionContext::for_digits(1).bits() == 64);
  CHECK_THROWS_AS(PrecisionContext(63, 5, 10), Error);
  CHECK_THROWS_AS(PrecisionContext(190, 50, 10), Error);
  CHECK_THROWS_AS(PrecisionContext::for_digits(20, 5), Error);
  CHECK(ctx.widened().guard_digits() == 20);
  CHECK(ctx.widened().bits() > ctx.bits());
}

TEST_CASE("decimal rendering rounds half to even without locale") {
  CHECK(BigReal(0.125, 64).to_decimal(2) == "0.12");
  CHECK(BigReal(0.375, 64).to_decimal(2) == "0.38");
  CHECK(BigReal(-2.5, 64).to_decimal(1) == "-2");
  CHECK(BigReal(1234.5, 64).to_decimal(6) == "1234.50");
  CHECK(BigReal(1e-30, 128).to_decimal(3) == "1.00e-30");
  CHECK(BigReal(0L, 64).to_decimal(5) == "0");
  CHECK(BigReal::parse("0.5", 64) == BigReal(0.5, 64));
  CHECK_THROWS_AS(BigReal::parse("1.5x", 64), Error);
  CHECK_THROWS_AS(BigReal::parse("inf", 64), Error);
}

TEST_CASE("euler gamma agrees with an independent Euler-Maclaurin evaluation") {
  const auto ctx60 = PrecisionContext::for_digits(60);
  const BigReal g = nk::euler_gamma(ctx60);
  CHECK(agree(g, gamma_euler_maclaurin(ctx60.bits() + 32), 55));

  BigReal reference(ctx60.bits());
  mpfr_const_euler(reference.get(), MPFR_RNDN);
  CHECK(agree(g, reference, 60));

  const BigReal g50 = nk::euler_gamma(PrecisionContext::for_digits(50));
  CHECK(g50.to_decimal(50) == "0.57721566490153286060651209008240243104215933593992");
}

TEST_CASE("2 exp(-2 gamma) reproduces the 50-digit limit string") {
  const auto ctx = PrecisionContext::for_digits(50);
  const BigReal v = nk::exp(-2L * nk::euler_gamma(ctx), ctx) * 2;
  CHECK(v.to_decimal(50) == "0.63047350337438679612204019271087890435458707871273");
}

TEST_CASE("renderings at lower precision are roundings of higher ones") {
  const std::string g10 = nk::euler_gamma(PrecisionContext::for_digits(10)).to_decimal(10);
  const std::string g50 = nk::euler_gamma(PrecisionContext::for_digits(50)).to_decimal(50);
  CHECK(BigReal::parse(g50, 256).to_decimal(10) == g10);
  for (int digits : {5, 17, 33}) {
    const std::string lo = nk::zeta3(PrecisionContext::for_digits(digits)).to_decimal(digits);
    const std::string hi = nk::zeta3(PrecisionContext::for_digits(digits + 20)).to_decimal(digits + 20);
    CHECK(BigReal::parse(hi, 512).to_decimal(digits) == lo);
  }
}

TEST_CASE("determinism: identical calls give identical renderings") {
  const auto ctx = PrecisionContext::for_digits(40);
  CHECK(nk::euler_gamma(ctx).to_decimal(40) == nk::euler_gamma(ctx).to_decimal(40));
  const BigReal t = BigReal::parse("2.75", ctx.bits());
  CHECK(nk::bessel_k0(t, ctx).value.to_decimal(40) == nk::bessel_k0(t, ctx).value.to_decimal(40));
}

TEST_CASE("zeta(3) against two independent series") {
  const auto ctx = PrecisionContext::for_digits(40);
  const BigReal z = nk::zeta3(ctx);
  CHECK(agree(z, zeta3_amdeberhan(ctx.bits() + 32), 40));
  BigReal reference(ctx.bits());
  mpfr_zeta_ui(reference.get(), 3, MPFR_RNDN);
  CHECK(agree(z, reference, 40));

  CHECK(nk::zeta3(PrecisionContext::for_digits(30)).to_decimal(30) == "1.20205690315959428539973816151");
  const auto c = PrecisionContext::for_digits(20);
  const BigReal pi = nk::pi_constant(c);
  CHECK(z > 1L);
  CHECK(z < pi * pi * pi / 24 + 1);
}

TEST_CASE("K0 series, asymptotic and integral routes agree") {
  const auto ctx = PrecisionContext::for_digits(30);
  const nk::BesselK0 k0(ctx);
  for (const char* t_text : {"0.1", "1", "5", "20"}) {
    const BigReal t = BigReal::parse(t_text, ctx.bits());
    INFO("t = " << t_text);
    CHECK(agree(k0.series(t), k0.integral(t), ctx.target_digits()));
  }
  // Just above the switch point both the asymptotic and the integral routes apply.
  const BigReal t = k0.switch_point() + 1;
  const BigReal via_asym = nk::exp(k0.asymptotic_log(t), ctx);
  CHECK(agree(via_asym, k0.integral(t), ctx.target_digits()));
  CHECK(agree(k0(t).value, via_asym, 30));
}

TEST_CASE("K0 reference values and asymptotics") {
  const auto ctx20 = PrecisionContext::for_digits(20);
  CHECK(nk::bessel_k0(BigReal(1L, ctx20.bits()), ctx20).value.to_decimal(20) == "0.42102443824070833334");

  const auto ctx = PrecisionContext::for_digits(30);
  const BigReal t = BigReal::parse("1e-8", ctx.bits());
  const BigReal small = nk::bessel_k0(t, ctx).value + nk::ln(t / 2, ctx) + nk::euler_gamma(ctx);
  CHECK(abs(small) < BigReal::pow10(-14, 64));

  const BigReal fifty(50L, ctx.bits());
  const BigReal lead = nk::sqrt(nk::pi_constant(ctx) / 100, ctx) * nk::exp(-fifty, ctx);
  const BigReal ratio = nk::bessel_k0(fifty, ctx).value / lead;
  CHECK(ratio > BigReal(0.99, 64));
  CHECK(ratio < 1L);

  CHECK_THROWS_AS(nk::bessel_k0(BigReal(0L, 64), ctx), Error);
  CHECK_THROWS_AS(nk::bessel_k0(BigReal(-1L, 64), ctx), Error);
}

TEST_CASE("K0 beyond the exponent range is flagged with its logarithm") {
  const auto ctx = PrecisionContext::for_digits(20);
  const BigReal huge = BigReal::parse("1e12", ctx.bits());
  const auto r = nk::bessel_k0(huge, ctx);
  CHECK(r.below_threshold);
  CHECK(r.value.is_zero());
  // log K0 ~ -t - ln(t)/2 + ln(pi/2)/2
  const BigReal approx = -huge - nk::ln(huge, ctx) / 2 + nk::ln(nk::pi_constant(ctx) / 2, ctx) / 2;
  CHECK(abs(r.log_value - approx) < BigReal::pow10(-10, 64));
}

TEST_CASE("hypergeometric 2F1 series") {
  const auto ctx = PrecisionContext::for_digits(40);
  const Rational half(1, 2);
  CHECK(nk::hyp2f1(half, half, Rational(1), BigReal(0L, ctx.bits()), ctx) == 1L);

  // 2F1(1,1;2;z) = -ln(1-z)/z
  for (const char* z_text : {"0.5", "-0.75", "0.95"}) {
    const BigReal z = BigReal::parse(z_text, ctx.bits());
    const BigReal closed = -nk::ln(1L - z, ctx) / z;
    CHECK(agree(nk::hyp2f1(Rational(1), Rational(1), Rational(2), z, ctx), closed, 40));
  }
  const BigReal two_ln2 = nk::hyp2f1(Rational(1), Rational(1), Rational(2), BigReal(0.5, ctx.bits()), ctx);
  CHECK(two_ln2.to_decimal(15) == "1.38629436111989");

  // terminating: 2F1(-2, 1; 1; z) = (1-z)^2
  const BigReal z(0.25, ctx.bits());
  CHECK(nk::hyp2f1(Rational(-2), Rational(1), Rational(1), z, ctx) == (1L - z) * (1L - z));

  CHECK_THROWS_AS(nk::hyp2f1(half, half, Rational(0), z, ctx), Error);
  CHECK_THROWS_AS(nk::hyp2f1(half, half, Rational(-3), z, ctx), Error);
  CHECK_THROWS_AS(nk::hyp2f1(half, half, Rational(1), BigReal(1L, 64), ctx), Error);
  try {
    nk::hyp2f1(half, half, Rational(1), BigReal(-1.5, 64), ctx);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ArgumentOutOfRange);
  }
}

TEST_CASE("elementary functions") {
  const auto ctx = PrecisionContext::for_digits(50);
  CHECK(nk::exp(BigReal(0L, ctx.bits()), ctx) == 1L);
  const BigReal r2 = nk::sqrt(BigReal(2L, ctx.bits()), ctx);
  CHECK(abs(r2 * r2 - 2L) < BigReal::pow10(-48, 64));
  CHECK(abs(nk::elementary(nk::ElementaryOp::Cbrt, BigReal(27L, ctx.bits()), ctx) - 3L) < BigReal::pow10(-48, 64));
  CHECK(abs(nk::power(BigReal(2L, ctx.bits()), BigReal(0.5, 64), ctx) - r2) < BigReal::pow10(-48, 64));
  CHECK(nk::power(BigReal(3L, ctx.bits()), 4, ctx) == 81L);
  CHECK_THROWS_AS(nk::ln(BigReal(0L, 64), ctx), Error);
  CHECK_THROWS_AS(nk::sqrt(BigReal(-1L, 64), ctx), Error);
  CHECK_THROWS_AS(nk::nthroot(BigReal(-1L, 64), 2, ctx), Error);
  CHECK(nk::nthroot(BigReal(-8L, 64), 3, ctx) == -2L);
}

TEST_CASE("rational arithmetic is exact") {
  const Rational a(223, 71), b(22, 7);
  CHECK(b - a == Rational(1, 497));
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational::parse("1/3") + Rational::parse("2/3") == Rational(1));
  CHECK(a < b);
  CHECK(Rational(-2).is_nonpositive_integer());
  CHECK_THROWS_AS(Rational::parse("x/3"), Error);
  CHECK_THROWS_AS(Rational(1, 0), Error);
}
