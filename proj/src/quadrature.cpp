#include "expmath/quadrature.hpp"

#include <cmath>
#include <limits>

#include "expmath/errors.hpp"
#include "expmath/numkernel.hpp"

namespace expmath::quadrature {

namespace nk = expmath::numkernel;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Terms below eps * 10^-kNegligibleDigits are treated as exhausted tails.
constexpr double kNegligibleDigits = 6.0;

// Range of u covered by the node tables: exp(-2 v) reaches 2^(-8 bits), enough
// for integrable endpoint singularities as strong as x^(-0.9).
double u_limit(long bits) {
  const double v_max = 4.0 * static_cast<double>(bits) * kLn2;
  return std::asinh(2.0 * v_max / M_PI);
}

struct MappedPoint {
  BigReal x;
  BigReal weight;
  double u;
  int side;  // 0: toward the right/upper end (and the centre), 1: toward the left/lower end
  bool degenerate;
};

struct Hooks {
  // Called when f fails (throws or returns a non-finite value); returning
  // true treats the contribution as zero.
  std::function<bool(const BigReal& x, const BigReal& weight)> failure_is_negligible;
  // Called with every successful evaluation.
  std::function<void(const BigReal& x, const BigReal& fx)> check;
};

using PointSource = std::function<std::vector<MappedPoint>(int level)>;

IntegralResult run_levels(const Integrand& f, const PointSource& source, const BigReal& eps,
                          const PrecisionContext& ctx, int max_level, const Hooks& hooks) {
  if (!(eps.sign() > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const long bits = ctx.bits();
  const BigReal tiny = eps * BigReal::pow10(-static_cast<long>(kNegligibleDigits), 64);
  BigReal ulp(1L, 64);
  mpfr_div_2si(ulp.get(), ulp.get(), bits, MPFR_RNDN);

  IntegralResult result{BigReal(0L, bits), BigReal(0L, bits), 0, false, {}, 0, std::nullopt};
  BigReal total(0L, bits);
  BigReal largest(0L, bits);
  BigReal previous(0L, bits);
  double cutoff[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};

  for (int level = 0; level <= max_level; ++level) {
    double last_significant[2] = {-1.0, -1.0};
    double outermost[2] = {-1.0, -1.0};
    BigReal edge_term[2] = {BigReal(0L, 64), BigReal(0L, 64)};

    for (const MappedPoint& p : source(level)) {
      if (p.u > cutoff[p.side] || p.degenerate) continue;
      BigReal fx(bits);
      bool ok = true;
      try {
        fx = f(p.x);
        ok = fx.is_finite();
      } catch (const Error&) {
        ok = false;
      }
      ++result.evaluations;
      if (!ok) {
        if (hooks.failure_is_negligible && hooks.failure_is_negligible(p.x, p.weight)) continue;
        throw Error(ErrorKind::IntegrandFailure, "integrand failed at x = " + p.x.to_decimal(20));
      }
      if (hooks.check) hooks.check(p.x, fx);
      BigReal term = fx * p.weight;
      const BigReal mag = abs(term);
      if (mag > largest) largest = mag;
      if (mag >= tiny) last_significant[p.side] = std::max(last_significant[p.side], p.u);
      if (p.u >= outermost[p.side]) {
        outermost[p.side] = p.u;
        edge_term[p.side] = mag.at_bits(64);
      }
      total += term;
    }

    if (level == 0) {
      // Level-0 nodes are one unit apart in u; everything past the last
      // significant node plus one unit is left out at finer levels.
      for (int s = 0; s < 2; ++s) cutoff[s] = last_significant[s] + 1.0;
    }

    BigReal h(1L, bits);
    mpfr_div_2si(h.get(), h.get(), level, MPFR_RNDN);
    BigReal estimate = total * h;
    result.levels_used = level;
    if (level >= 1) {
      BigReal diff = abs(estimate - previous);
      result.level_errors.push_back(diff);
      const BigReal rounding = largest * ulp * result.evaluations;
      result.error_estimate = max(diff, rounding);
      const bool edges_small = edge_term[0] <= eps && edge_term[1] <= eps;
      if (level >= kMinConvergedLevel && edges_small && result.error_estimate <= eps) {
        result.value = std::move(estimate);
        result.converged = true;
        return result;
      }
    }
    previous = std::move(estimate);
  }
  result.value = previous;
  return result;
}

std::vector<MappedPoint> finite_points(const QuadratureRule& r, const BigReal& lo, const BigReal& hi) {
  const BigReal half_width = (hi - lo) / 2;
  std::vector<MappedPoint> pts;
  pts.reserve(2 * r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const QuadratureNode& n = r.nodes[i];
    const double u = r.step.to_double() * static_cast<double>(r.level == 0 ? i : 2 * i + 1);
    BigReal w = n.weight * half_width;
    if (r.level == 0 && i == 0) {
      pts.push_back(MappedPoint{(hi + lo) / 2, std::move(w), 0.0, 0, false});
      continue;
    }
    // Offset from the nearer endpoint: (b - a) delta = half_width * complement.
    BigReal offset = half_width * n.complement;
    BigReal x_right = hi - offset;
    BigReal x_left = lo + offset;
    const bool right_degenerate = !(x_right < hi) || !(x_right > lo);
    const bool left_degenerate = !(x_left > lo) || !(x_left < hi);
    pts.push_back(MappedPoint{std::move(x_right), w, u, 0, right_degenerate});
    pts.push_back(MappedPoint{std::move(x_left), std::move(w), u, 1, left_degenerate});
  }
  return pts;
}

}  // namespace

QuadratureRule tanh_sinh_rule(int level, const PrecisionContext& ctx) {
  if (level < 0) throw Error(ErrorKind::InvalidArgument, "level must be >= 0");
  const long bits = ctx.bits();
  QuadratureRule rule{level, BigReal(1L, bits), {}};
  mpfr_div_2si(rule.step.get(), rule.step.get(), level, MPFR_RNDN);
  const double u_max = u_limit(bits);
  const BigReal half_pi = nk::pi_constant(ctx) / 2;
  const long stride = level == 0 ? 1 : 2;
  const long first = level == 0 ? 0 : 1;
  BigReal u(bits), v(bits), e2v(bits), ch(bits);
  for (long k = first;; k += stride) {
    mpfr_mul_si(u.get(), rule.step.get(), k, MPFR_RNDN);
    if (u.to_double() > u_max) break;
    mpfr_sinh(v.get(), u.get(), MPFR_RNDN);
    v *= half_pi;
    mpfr_mul_2si(e2v.get(), v.get(), 1, MPFR_RNDN);
    mpfr_exp(e2v.get(), e2v.get(), MPFR_RNDN);
    // delta = (1 - tanh v) / 2 = 1 / (1 + e^{2v}); sech^2 v = 4 delta (1 - delta)
    BigReal delta = 1L / (e2v + 1L);
    mpfr_cosh(ch.get(), u.get(), MPFR_RNDN);
    BigReal weight = half_pi * ch * delta * (1L - delta) * 4;
    BigReal complement = delta * 2;
    BigReal abscissa = 1L - complement;
    rule.nodes.push_back(QuadratureNode{std::move(abscissa), std::move(complement), std::move(weight)});
  }
  return rule;
}

TanhSinh::TanhSinh(const PrecisionContext& ctx, int max_level) : ctx_(ctx), max_level_(max_level) {
  if (max_level < kMinConvergedLevel || max_level > 20)
    throw Error(ErrorKind::InvalidArgument, "max_level must lie in [3, 20]");
}

const QuadratureRule& TanhSinh::rule(int level) {
  while (static_cast<int>(rules_.size()) <= level) rules_.push_back(tanh_sinh_rule(static_cast<int>(rules_.size()), ctx_));
  return rules_[static_cast<std::size_t>(level)];
}

IntegralResult TanhSinh::integrate(const Integrand& f, const BigReal& a, const BigReal& b, const BigReal& eps) {
  if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "integrate_finite requires a < b");
  const long bits = ctx_.bits();
  const BigReal lo = a.at_bits(bits);
  const BigReal hi = b.at_bits(bits);
  PointSource source = [&](int level) { return finite_points(rule(level), lo, hi); };
  return run_levels(f, source, eps, ctx_, max_level_, Hooks{});
}

IntegralResult integrate_finite(const Integrand& f, const BigReal& a, const BigReal& b, const BigReal& eps,
                                const PrecisionContext& ctx, int max_level) {
  TanhSinh engine(ctx, max_level);
  return engine.integrate(f, a, b, eps);
}

IntegralResult integrate_semi_infinite(const Integrand& f, const BigReal& a, const BigReal& eps,
                                       const PrecisionContext& ctx,
                                       const std::optional<DecayCertificate>& tail_bound, int max_level) {
  if (!(eps.sign() > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const long bits = ctx.bits();

  if (tail_bound) {
    const DecayCertificate& cert = *tail_bound;
    if (!(cert.rate.sign() > 0) || !(cert.coefficient.sign() > 0))
      throw Error(ErrorKind::InvalidArgument, "decay certificate needs positive rate and coefficient");
    const BigReal rate = cert.rate.at_bits(bits);
    const BigReal coeff = cert.coefficient.at_bits(bits);
    // C e^{-rate T} / rate <= eps / 4
    BigReal cut = nk::ln(coeff * 4 / (rate * eps), ctx) / rate;
    cut = max(cut, cert.from.at_bits(bits));
    cut = max(cut, a.at_bits(bits) + 1L);
    const BigReal tail = coeff * nk::exp(-(rate * cut), ctx) / rate;
    const BigReal negligible = eps * BigReal::pow10(-static_cast<long>(kNegligibleDigits), 64);
    const BigReal slack = BigReal(1L, 64) + BigReal::pow10(-static_cast<long>(ctx.target_digits()) / 2, 64);

    auto envelope = [&](const BigReal& x) { return coeff * nk::exp(-(rate * x), ctx); };
    Hooks hooks;
    hooks.failure_is_negligible = [&](const BigReal& x, const BigReal& w) {
      return x >= cert.from && w * envelope(x) < negligible;
    };
    hooks.check = [&](const BigReal& x, const BigReal& fx) {
      if (x >= cert.from && abs(fx) > envelope(x) * slack)
        throw Error(ErrorKind::TailBoundViolation,
                    "integrand exceeds its decay certificate at t = " + x.to_decimal(20));
    };

    // The finite engine with certificate hooks.
    TanhSinh engine(ctx, max_level);
    const BigReal lo = a.at_bits(bits);
    PointSource source = [&](int level) { return finite_points(engine.rule(level), lo, cut); };
    const BigReal inner_eps = eps / 2;
    IntegralResult r = run_levels(f, source, inner_eps, ctx, max_level, hooks);
    r.error_estimate += tail;
    r.truncated_at = cut;
    r.converged = r.converged && r.error_estimate <= eps;
    return r;
  }

  // exp-sinh: t = a + exp(pi/2 sinh u), dt/du = pi/2 cosh u exp(pi/2 sinh u).
  const BigReal lo = a.at_bits(bits);
  const BigReal half_pi = nk::pi_constant(ctx) / 2;
  const double u_max = u_limit(bits);
  PointSource source = [&](int level) {
    std::vector<MappedPoint> pts;
    BigReal h(1L, bits);
    mpfr_div_2si(h.get(), h.get(), level, MPFR_RNDN);
    const long stride = level == 0 ? 1 : 2;
    const long first = level == 0 ? 0 : 1;
    BigReal u(bits), sh(bits), ch(bits);
    for (long k = first;; k += stride) {
      mpfr_mul_si(u.get(), h.get(), k, MPFR_RNDN);
      const double ud = u.to_double();
      if (ud > u_max) break;
      mpfr_sinh(sh.get(), u.get(), MPFR_RNDN);
      mpfr_cosh(ch.get(), u.get(), MPFR_RNDN);
      const BigReal s = nk::exp(half_pi * sh, ctx);
      const BigReal c = half_pi * ch;
      BigReal x_up = lo + s;
      pts.push_back(MappedPoint{x_up, c * s, ud, 0, !x_up.is_finite()});
      if (k == 0) continue;
      BigReal x_down = lo + 1L / s;
      const bool down_degenerate = !(x_down > lo);
      pts.push_back(MappedPoint{std::move(x_down), c / s, ud, 1, down_degenerate});
    }
    return pts;
  };
  return run_levels(f, source, eps, ctx, max_level, Hooks{});
}

}  // namespace expmath::quadrature
