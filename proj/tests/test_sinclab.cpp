#include "doctest.h"
#include "expmath/agmpi.hpp"
#include "expmath/errors.hpp"
#include "expmath/numkernel.hpp"
#include "expmath/quadrature.hpp"
#include "expmath/sinclab.hpp"

using namespace expmath;
namespace sl = expmath::sinclab;
namespace nk = expmath::numkernel;
namespace q = expmath::quadrature;

namespace {

BigReal tol(long exponent) { return BigReal::pow10(exponent, 64); }

BigReal half_pi_oracle(long bits) {
  BigReal out(bits);
  mpfr_const_pi(out.get(), MPFR_RNDN);
  mpfr_div_2si(out.get(), out.get(), 1, MPFR_RNDN);
  return out;
}

// First failure of the pi/2 pattern, at N = 7 (1/3 + ... + 1/15 > 1).
BigReal sinc_seven_oracle(long bits) {
  BigReal pi(bits);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  return BigReal::parse("467807924713440738696537864469", bits) /
         BigReal::parse("935615849440640907310521750000", bits) * pi;
}

}  // namespace

TEST_CASE("sinc definition") {
  const auto ctx = PrecisionContext::for_digits(40);
  CHECK(sl::sinc(BigReal(0L, ctx.bits()), ctx) == 1L);
  const BigReal p = agmpi::pi(ctx);
  CHECK(abs(sl::sinc(p, ctx)) < tol(3 - ctx.target_digits()));
  const BigReal x = BigReal::parse("1.7", ctx.bits());
  CHECK(sl::sinc(-x, ctx) == sl::sinc(x, ctx));
  // Series branch agrees with sin(x)/x at MPFR precision.
  for (const char* s : {"1e-3", "3e-5", "1e-20"}) {
    const BigReal small = BigReal::parse(s, ctx.bits());
    BigReal oracle(ctx.bits() + 64);
    mpfr_sin(oracle.get(), small.at_bits(ctx.bits() + 64).get(), MPFR_RNDN);
    oracle /= small;
    CHECK(abs(sl::sinc(small, ctx) - oracle) < tol(-ctx.target_digits() - 5));
  }
}

TEST_CASE("product-to-sum expansion reproduces the sinc product") {
  const auto ctx = PrecisionContext::for_digits(30);
  for (long N : {1L, 2L, 5L, 8L}) {
    const auto e = sl::frequency_expansion(N, ctx);
    CHECK(e.terms.size() == (1UL << N));
    CHECK(e.cosine == ((N + 1) % 2 == 0));
    for (const char* x : {"0.7", "3.25", "41"}) {
      const BigReal xv = BigReal::parse(x, ctx.bits());
      CHECK(abs(sl::evaluate_expansion(e, xv, ctx) - sl::sinc_product(N, xv, ctx)) < tol(-22));
    }
  }
}

TEST_CASE("oscillatory tails agree with quadrature between two cut points") {
  const auto ctx = PrecisionContext::for_digits(30);
  const long bits = ctx.bits();
  // Small and large b X exercise the series and the asymptotic route.
  for (const char* b : {"0.05", "-0.3", "1.4", "6"}) {
    for (long m : {2L, 5L}) {
      const BigReal bv = BigReal::parse(b, bits);
      const BigReal x1(3L, bits), x2(40L, bits);
      const auto t1 = sl::power_exp_tail(m, bv, x1, ctx);
      const auto t2 = sl::power_exp_tail(m, bv, x2, ctx);
      auto re = q::integrate_finite(
          [&](const BigReal& x) { return nk::cos(bv * x, ctx) / nk::power(x, m, ctx); }, x1, x2, tol(-25), ctx);
      auto im = q::integrate_finite(
          [&](const BigReal& x) { return nk::sin(bv * x, ctx) / nk::power(x, m, ctx); }, x1, x2, tol(-25), ctx);
      CAPTURE(b);
      CAPTURE(m);
      CHECK(abs(t1.re - t2.re - re.value) < tol(-23));
      CHECK(abs(t1.im - t2.im - im.value) < tol(-23));
    }
  }
  // Zero frequency is the plain power tail.
  const auto t = sl::power_exp_tail(3, BigReal(0L, bits), BigReal(2L, bits), ctx);
  CHECK(abs(t.re - BigReal::ratio(1, 8, bits)) < tol(-28));
  CHECK(t.im.is_zero());
}

TEST_CASE("integral side equals pi/2 while 1/3 + ... + 1/(2N+1) < 1") {
  const auto ctx = PrecisionContext::for_digits(30);
  const BigReal half_pi = half_pi_oracle(ctx.bits() + 32);
  for (long N = 1; N <= 6; ++N) {
    CAPTURE(N);
    const auto r = sl::sinc_integral_evaluate(N, tol(-20), ctx);
    CHECK(abs(r.value - half_pi) < tol(-18));
    CHECK(r.error_bound < tol(-20));
  }
}

TEST_CASE("sum side equals pi/2 for N <= 6") {
  const auto ctx = PrecisionContext::for_digits(30);
  const BigReal half_pi = half_pi_oracle(ctx.bits() + 32);
  for (long N = 1; N <= 6; ++N) {
    CAPTURE(N);
    const auto s = sl::sinc_sum_evaluate(N, tol(-20), ctx);
    CHECK(abs(s.value - half_pi) < tol(-18));
    CHECK(s.truncation_bound <= tol(-20) / 2);
    CHECK(s.direct_terms >= 1);
  }
}

TEST_CASE("both sides leave pi/2 at N = 7 and still agree") {
  const auto ctx = PrecisionContext::for_digits(30);
  const BigReal oracle = sinc_seven_oracle(ctx.bits() + 32);
  const auto report = sl::sinc_identity(7, tol(-20), ctx);
  CHECK(abs(report.rhs - oracle) < tol(-18));
  CHECK(abs(report.lhs - oracle) < tol(-18));
  CHECK(abs(report.difference) < tol(-18));
  CHECK(abs(report.rhs - half_pi_oracle(ctx.bits())) > tol(-12));
}

TEST_CASE("identity for N = 1..6 and structure of the sum") {
  const auto ctx = PrecisionContext::for_digits(30);
  for (long N = 1; N <= 6; ++N) {
    const auto report = sl::sinc_identity(N, tol(-20), ctx);
    CHECK(report.N == N);
    CHECK(abs(report.difference) < tol(-18));
    CHECK(report.difference == report.lhs - report.rhs);
  }
  // The sum starts at n = 1: the n = 0 product is 1 and only half of it enters.
  const BigReal zero(0L, ctx.bits());
  CHECK(sl::sinc_product(3, zero, ctx) == 1L);
}

TEST_CASE("the reported tail bound is honored") {
  const auto ctx = PrecisionContext::for_digits(30);
  for (long N : {1L, 4L}) {
    const BigReal eps = tol(-16);
    const auto coarse = sl::sinc_sum_evaluate(N, eps, ctx);
    const auto fine = sl::sinc_sum_evaluate(N, eps / 10, ctx);
    CHECK(abs(coarse.value - fine.value) < eps);
  }
}

TEST_CASE("threshold scan") {
  const auto ctx = PrecisionContext::for_digits(30);
  const BigReal two_pi = agmpi::pi(ctx) * 2;
  CHECK(sl::threshold_scan(two_pi, ctx) == 40249);
  CHECK(sl::threshold_scan(Rational(4, 3), ctx) == 2);
  // 1 + 1/3 + ... + 1/13 = 1.955..., adding 1/15 gives 2.022...
  CHECK(sl::threshold_scan(Rational(2), ctx) == 7);
  CHECK(sl::threshold_scan(BigReal(2L, ctx.bits()), ctx) == 7);
  long previous = 0;
  for (long i = 0; i <= 40; ++i) {
    const long n = sl::threshold_scan(BigReal(1.05, 64) + BigReal::ratio(i, 8, 64), ctx);
    CHECK(n >= previous);
    previous = n;
  }
  CHECK_THROWS_AS(sl::threshold_scan(Rational(1), ctx), Error);
}

TEST_CASE("argument validation") {
  const auto ctx = PrecisionContext::for_digits(20);
  CHECK_THROWS_AS(sl::sinc_sum(0, tol(-10), ctx), Error);
  CHECK_THROWS_AS(sl::sinc_integral(sl::kMaxN + 1, tol(-10), ctx), Error);
  CHECK_THROWS_AS(sl::sinc_sum(2, BigReal(0L, 64), ctx), Error);
  CHECK_THROWS_AS(sl::power_exp_tail(1, BigReal(1L, 64), BigReal(1L, 64), ctx), Error);
}
