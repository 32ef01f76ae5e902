#include "expmath/agmpi.hpp"

#include <cmath>

#include "expmath/errors.hpp"
#include "expmath/numkernel.hpp"

namespace expmath::agmpi {

namespace nk = expmath::numkernel;

namespace {

constexpr int kMaxAgmIterations = 200;

void require_positive(const BigReal& a, const BigReal& b) {
  if (!(a.sign() > 0) || !(b.sign() > 0)) throw Error(ErrorKind::NonpositiveArgument, "AGM requires a, b > 0");
}

template <typename Step>
std::vector<AGMState> iterate(BigReal a, BigReal b, const PrecisionContext& ctx, Step step) {
  const BigReal stop = BigReal::pow10(-(ctx.target_digits() + 2), 64);
  std::vector<AGMState> states;
  states.push_back(AGMState{a, b, 0});
  for (int i = 1; i <= kMaxAgmIterations; ++i) {
    if (abs(a - b) < stop * a) return states;
    step(a, b);
    states.push_back(AGMState{a, b, i});
  }
  throw Error(ErrorKind::PrecisionUnachievable, "AGM iteration did not converge");
}

}  // namespace

std::vector<AGMState> agm2_iterates(const BigReal& a, const BigReal& b, const PrecisionContext& ctx) {
  require_positive(a, b);
  BigReal hi = a.at_bits(ctx.bits());
  BigReal lo = b.at_bits(ctx.bits());
  if (hi < lo) std::swap(hi, lo);
  return iterate(std::move(hi), std::move(lo), ctx, [&](BigReal& x, BigReal& y) {
    BigReal next_b = nk::sqrt(x * y, ctx);
    x += y;
    x /= 2;
    y = std::move(next_b);
  });
}

std::vector<AGMState> agm3_iterates(const BigReal& a, const BigReal& b, const PrecisionContext& ctx) {
  require_positive(a, b);
  return iterate(a.at_bits(ctx.bits()), b.at_bits(ctx.bits()), ctx, [&](BigReal& x, BigReal& y) {
    BigReal next_b = nk::nthroot(y * (x * x + x * y + y * y) / 3, 3, ctx);
    x += y * 2;
    x /= 3;
    y = std::move(next_b);
  });
}

BigReal agm2(const BigReal& a, const BigReal& b, const PrecisionContext& ctx) {
  return agm2_iterates(a, b, ctx).back().a;
}

BigReal agm3(const BigReal& a, const BigReal& b, const PrecisionContext& ctx) {
  return agm3_iterates(a, b, ctx).back().a;
}

namespace {

std::vector<BigReal> gauss_legendre_values(int iterations, const PrecisionContext& ctx) {
  const long bits = ctx.bits();
  BigReal a(1L, bits);
  BigReal b = 1L / nk::sqrt(BigReal(2L, bits), ctx);
  BigReal t = BigReal::ratio(1, 4, bits);
  BigReal x(1L, bits);
  std::vector<BigReal> values;
  values.reserve(static_cast<std::size_t>(iterations));
  for (int k = 1; k <= iterations; ++k) {
    BigReal next_a = (a + b) / 2;
    BigReal next_b = nk::sqrt(a * b, ctx);
    BigReal d = a - next_a;
    t -= x * d * d;
    x *= 2;
    a = std::move(next_a);
    b = std::move(next_b);
    BigReal s = a + b;
    values.push_back(s * s / (t * 4));
  }
  return values;
}

}  // namespace

PiResult gauss_legendre_pi(int iterations, const PrecisionContext& ctx) {
  if (iterations < 1) throw Error(ErrorKind::InvalidArgument, "iterations must be >= 1");
  if (iterations > 40) throw Error(ErrorKind::InvalidArgument, "iterations must be <= 40");
  const PrecisionContext ref_ctx = ctx.with_extra_bits(64);
  const BigReal reference = gauss_legendre_values(iterations + 2, ref_ctx).back();

  PiResult result{BigReal(ctx.bits()), iterations, {}, gauss_legendre_values(iterations, ctx)};
  BigReal floor(1L, 64);
  mpfr_div_2si(floor.get(), floor.get(), ctx.bits() - 4, MPFR_RNDN);
  for (int k = 0; k < iterations; ++k) {
    if (k > 0 && result.per_iteration_error.back() <= floor)
      throw Error(ErrorKind::PrecisionUnachievable,
                  "precision exhausted after " + std::to_string(k) + " iterations at " + std::to_string(ctx.bits()) +
                      " bits");
    result.per_iteration_error.push_back(abs(result.per_iteration_value[static_cast<std::size_t>(k)] - reference));
  }
  result.value = result.per_iteration_value.back();
  return result;
}

BigReal pi(const PrecisionContext& ctx) {
  // Correct digits roughly double per step starting from ~1 at step 1.
  const int digits = ctx.target_digits() + ctx.guard_digits();
  const int iterations = static_cast<int>(std::ceil(std::log2(static_cast<double>(digits)))) + 1;
  return gauss_legendre_values(iterations, ctx).back();
}

std::pair<Rational, Rational> archimedes_bounds() { return {Rational(223, 71), Rational(22, 7)}; }

BigReal quadratic_identity_residual(const BigReal& k, const PrecisionContext& ctx) {
  const BigReal one(1L, ctx.bits());
  const BigReal kk = k.at_bits(ctx.bits());
  const BigReal f = nk::hyp2f1(Rational(1, 2), Rational(1, 2), Rational(1), one - kk * kk, ctx);
  return abs(agm2(one, kk, ctx) * f - 1L);
}

BigReal cubic_identity_residual(const BigReal& k, int exponent, const PrecisionContext& ctx) {
  if (exponent < 1) throw Error(ErrorKind::InvalidArgument, "exponent must be >= 1");
  const BigReal one(1L, ctx.bits());
  const BigReal kk = k.at_bits(ctx.bits());
  const BigReal z = one - nk::power(kk, static_cast<long>(exponent), ctx);
  const BigReal f = nk::hyp2f1(Rational(1, 3), Rational(2, 3), Rational(1), z, ctx);
  return abs(agm3(one, kk, ctx) * f - 1L);
}

CubicArgumentResolution resolve_cubic_argument(std::span<const BigReal> ks, const BigReal& tolerance,
                                               const PrecisionContext& ctx) {
  CubicArgumentResolution out;
  bool squared_holds = !ks.empty();
  bool cubed_holds = !ks.empty();
  for (const BigReal& k : ks) {
    CubicIdentityCheck check{k, cubic_identity_residual(k, 2, ctx), cubic_identity_residual(k, 3, ctx)};
    squared_holds = squared_holds && check.residual_k_squared < tolerance;
    cubed_holds = cubed_holds && check.residual_k_cubed < tolerance;
    out.checks.push_back(std::move(check));
  }
  if (squared_holds != cubed_holds) out.satisfied_exponent = squared_holds ? 2 : 3;
  return out;
}

}  // namespace expmath::agmpi
