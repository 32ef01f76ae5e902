#pragma once

#include <vector>

#include "expmath/bigreal.hpp"
#include "expmath/rational.hpp"

namespace expmath::sinclab {

/// Largest N accepted by the sum and integral sides; both expand the sinc
/// product into 2^N trigonometric terms.
inline constexpr long kMaxN = 16;

/// sin(x)/x, and 1 at x = 0. Small arguments use the Taylor series.
BigReal sinc(const BigReal& x, const PrecisionContext& ctx);

/// prod_{k=0}^{N} sinc(x / (2k + 1))
BigReal sinc_product(long N, const BigReal& x, const PrecisionContext& ctx);

/// One term of the product-to-sum expansion
///   prod_{k=0}^{N} sinc(x/(2k+1)) = x^-(N+1) sum_j weight_j trig(frequency_j x),
/// where trig is cos when N + 1 is even and sin when N + 1 is odd.
struct FrequencyTerm {
  Rational frequency;  // 1 +- 1/3 +- ... +- 1/(2N+1)
  BigReal weight;      // +- prod (2k+1) / 2^N
};

struct FrequencyExpansion {
  long N = 0;
  bool cosine = false;
  std::vector<FrequencyTerm> terms;
};

FrequencyExpansion frequency_expansion(long N, const PrecisionContext& ctx);

/// Evaluates the expansion at x (x != 0); equals sinc_product(N, x).
BigReal evaluate_expansion(const FrequencyExpansion& e, const BigReal& x, const PrecisionContext& ctx);

/// Real and imaginary parts of integral_X^inf e^(i b x) x^-m dx for m >= 2,
/// X > 0, to absolute accuracy 2^-bits.
struct ComplexValue {
  BigReal re;
  BigReal im;
};
ComplexValue power_exp_tail(long m, const BigReal& b, const BigReal& X, const PrecisionContext& ctx);

struct SumEvaluation {
  BigReal value;             // 1/2 + sum_{n>=1} prod sinc(n/(2k+1))
  BigReal truncation_bound;  // rigorous bound on what the accelerated tail leaves out
  long direct_terms = 0;     // n = 1 .. direct_terms summed term by term
};

struct IntegralEvaluation {
  BigReal value;
  BigReal error_bound;  // quadrature estimates plus the tail remainder bounds
  BigReal split_point;  // quadrature on [0, split], analytic tails beyond
};

/// Left side. Terms n < M are summed directly; the rest is written as
/// sum_j weight_j Re/Im sum_{n>=M} e^(i b_j n) n^-(N+1) and evaluated by
/// repeated summation by parts. M doubles until the remainder bound is at
/// most eps / 2. Throws NonConvergence if M would exceed 2^22.
SumEvaluation sinc_sum_evaluate(long N, const BigReal& eps, const PrecisionContext& ctx);
BigReal sinc_sum(long N, const BigReal& eps, const PrecisionContext& ctx);

/// Right side. Tanh-sinh on panels of [0, X] plus the exact oscillatory
/// tails of the expansion beyond X.
IntegralEvaluation sinc_integral_evaluate(long N, const BigReal& eps, const PrecisionContext& ctx);
BigReal sinc_integral(long N, const BigReal& eps, const PrecisionContext& ctx);

struct SincIdentityReport {
  long N = 0;
  BigReal lhs;
  BigReal rhs;
  BigReal difference;        // lhs - rhs
  BigReal truncation_bound;  // from the sum side
  BigReal integral_error;    // from the integral side
};

SincIdentityReport sinc_identity(long N, const BigReal& eps, const PrecisionContext& ctx);

/// Smallest N with sum_{k=0}^{N} 1/(2k+1) > threshold. Uses outward-rounded
/// partial sums and raises the precision when a comparison is undecided.
long threshold_scan(const BigReal& threshold, const PrecisionContext& ctx);
/// Same for an exact rational threshold; ties are settled with exact
/// rational partial sums.
long threshold_scan(const Rational& threshold, const PrecisionContext& ctx);

}  // namespace expmath::sinclab
