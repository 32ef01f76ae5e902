#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "expmath/bigreal.hpp"
#include "expmath/rational.hpp"

namespace expmath::agmpi {

struct AGMState {
  BigReal a;
  BigReal b;
  int iteration = 0;
};

/// Classical arithmetic-geometric mean: a' = (a+b)/2, b' = sqrt(ab).
/// Iterates until |a - b| < 10^-(target+2) a.
BigReal agm2(const BigReal& a, const BigReal& b, const PrecisionContext& ctx);

/// Cubic analogue: a' = (a + 2b)/3, b' = cbrt(b (a^2 + ab + b^2) / 3).
BigReal agm3(const BigReal& a, const BigReal& b, const PrecisionContext& ctx);

/// Every state visited by agm2 (first entry is the normalized input, a >= b).
std::vector<AGMState> agm2_iterates(const BigReal& a, const BigReal& b, const PrecisionContext& ctx);
/// Every state visited by agm3 (first entry is the input).
std::vector<AGMState> agm3_iterates(const BigReal& a, const BigReal& b, const PrecisionContext& ctx);

struct PiResult {
  BigReal value;
  int iterations = 0;
  /// |pi_k - reference| for k = 1..iterations.
  std::vector<BigReal> per_iteration_error;
  std::vector<BigReal> per_iteration_value;
};

/// Gauss-Legendre iteration: a0 = 1, b0 = 1/sqrt2, t0 = 1/4, x0 = 1;
/// pi_k = (a_k + b_k)^2 / (4 t_k). Errors are measured against the same
/// iteration run with two more steps at 64 more bits. Throws
/// PrecisionUnachievable when an earlier iterate already sits at the working
/// precision, i.e. the requested step cannot add digits.
PiResult gauss_legendre_pi(int iterations, const PrecisionContext& ctx);

/// pi to the context's precision by running Gauss-Legendre to convergence.
BigReal pi(const PrecisionContext& ctx);

/// Archimedes: 3 10/71 < pi < 3 1/7, returned as (223/71, 22/7).
std::pair<Rational, Rational> archimedes_bounds();

/// |agm2(1, k) 2F1(1/2, 1/2; 1; 1 - k^2) - 1|
BigReal quadratic_identity_residual(const BigReal& k, const PrecisionContext& ctx);
/// |agm3(1, k) 2F1(1/3, 2/3; 1; 1 - k^exponent) - 1|
BigReal cubic_identity_residual(const BigReal& k, int exponent, const PrecisionContext& ctx);

struct CubicIdentityCheck {
  BigReal k;
  BigReal residual_k_squared;
  BigReal residual_k_cubed;
};

struct CubicArgumentResolution {
  /// 2 or 3 when exactly one argument 1 - k^e satisfies the identity at
  /// every k within the tolerance; empty otherwise.
  std::optional<int> satisfied_exponent;
  std::vector<CubicIdentityCheck> checks;
};

/// Evaluates the cubic identity with both candidate arguments 1 - k^2 and
/// 1 - k^3 at each k and reports which one holds.
CubicArgumentResolution resolve_cubic_argument(std::span<const BigReal> ks, const BigReal& tolerance,
                                               const PrecisionContext& ctx);

}  // namespace expmath::agmpi
