#pragma once

#include "expmath/bigreal.hpp"
#include "expmath/rational.hpp"

namespace expmath::numkernel {

// Elementary functions. Each evaluates at ctx.bits() with correct rounding;
// domain errors throw ErrorKind::DomainViolation.
BigReal exp(const BigReal& x, const PrecisionContext& ctx);
BigReal ln(const BigReal& x, const PrecisionContext& ctx);
BigReal sqrt(const BigReal& x, const PrecisionContext& ctx);
BigReal nthroot(const BigReal& x, unsigned long n, const PrecisionContext& ctx);
BigReal sin(const BigReal& x, const PrecisionContext& ctx);
BigReal cos(const BigReal& x, const PrecisionContext& ctx);
BigReal power(const BigReal& base, const BigReal& exponent, const PrecisionContext& ctx);
BigReal power(const BigReal& base, long exponent, const PrecisionContext& ctx);

enum class ElementaryOp { Exp, Ln, Sqrt, Cbrt, Sin, Cos };
BigReal elementary(ElementaryOp op, const BigReal& x, const PrecisionContext& ctx);

/// pi from the MPFR constant cache; used as internal plumbing only. The
/// AGM module owns the library's own pi algorithm.
BigReal pi_constant(const PrecisionContext& ctx);

/// Euler's constant via the Bessel-function formula gamma = U/V - ln n.
BigReal euler_gamma(const PrecisionContext& ctx);

/// zeta(3) via the central-binomial series 5/2 sum (-1)^(k+1) / (k^3 C(2k,k)).
BigReal zeta3(const PrecisionContext& ctx);

/// K0(t) with its logarithm. When K0(t) falls below the smallest magnitude
/// the exponent range can hold, `value` is zero, `below_threshold` is set
/// and only `log_value` is meaningful.
struct K0Value {
  BigReal value;
  BigReal log_value;
  bool below_threshold = false;
};

/// Evaluator for K0 at one precision. Holds the constants the series needs
/// so repeated calls (quadrature nodes) do not recompute them. Immutable and
/// safe to share between threads once constructed.
class BesselK0 {
 public:
  explicit BesselK0(const PrecisionContext& ctx);

  /// Dispatches between the ascending series and the asymptotic expansion at
  /// switch_point().
  K0Value operator()(const BigReal& t) const;

  /// Ascending series K0 = -(ln(t/2) + gamma) I0(t) + sum (t^2/4)^k H_k / (k!)^2,
  /// evaluated with enough extra bits to absorb the e^{2t} cancellation.
  BigReal series(const BigReal& t) const;
  /// Large-t expansion sqrt(pi/2t) e^{-t} sum a_k t^{-k}, truncated at its
  /// smallest term. Returns the logarithm; only valid for t >= switch_point().
  BigReal asymptotic_log(const BigReal& t) const;
  /// K0(t) = integral_0^inf exp(-t cosh u) du by the trapezoidal rule, which
  /// converges geometrically in 1/h for this analytic integrand.
  BigReal integral(const BigReal& t) const;

  const BigReal& switch_point() const noexcept { return switch_point_; }
  const PrecisionContext& context() const noexcept { return ctx_; }

 private:
  PrecisionContext ctx_;
  long series_bits_;
  BigReal switch_point_;
  BigReal gamma_;
  BigReal half_log_pi_over_2_;
};

K0Value bessel_k0(const BigReal& t, const PrecisionContext& ctx);

/// Gauss hypergeometric series 2F1(a, b; c; z) for |z| < 1 with exact
/// rational parameters. The series is summed until a geometric tail bound
/// drops below the working precision.
BigReal hyp2f1(const Rational& a, const Rational& b, const Rational& c, const BigReal& z,
               const PrecisionContext& ctx);

}  // namespace expmath::numkernel
