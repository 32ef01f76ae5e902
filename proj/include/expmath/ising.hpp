#pragma once

#include <vector>

#include "expmath/bigreal.hpp"
#include "expmath/quadrature.hpp"

namespace expmath::ising {

struct CnRecord {
  long n = 0;
  BigReal value;
  BigReal error_estimate;
};

/// 128 significant digits, the default working precision for C_n.
PrecisionContext default_context();
/// 1e-25, the default absolute tolerance for C_n.
BigReal default_eps();

/// C_n = (2^n / n!) * integral_0^inf t K0(t)^n dt, to within eps.
/// The integrand is evaluated as exp(ln t + n ln K0(t)), so K0^n never
/// underflows even when n is in the hundreds. The tail is cut using
/// t K0^n <= (pi/2)^(n/2) (2/e) e^-(n - 1/2) t for t >= 1.
/// Throws NonConvergence if the quadrature does not reach eps.
CnRecord c_n(long n, const PrecisionContext& ctx, const BigReal& eps,
             int max_level = quadrature::kDefaultMaxLevel);
CnRecord c_n(long n);

/// 2 exp(-2 gamma).
BigReal c_infinity(const PrecisionContext& ctx);

struct MonotonicityReport {
  std::vector<CnRecord> records;  // n = 1..n_max, in order
  /// n such that C_n - C_{n+1} does not exceed the combined error estimates.
  std::vector<long> violations;
  /// n such that C_n - C_inf does not exceed the error estimate of C_n.
  std::vector<long> limit_violations;
};

/// Computes C_1..C_n_max (independent n run concurrently) and checks
/// C_n > C_{n+1} > C_inf outside the error estimates.
MonotonicityReport monotonicity_scan(long n_max, const PrecisionContext& ctx, const BigReal& eps,
                                     unsigned max_workers = 0);

/// C_2 from its two-fold definition
///   (4/2!) integral integral (u1 + 1/u1 + u2 + 1/u2)^-2 du1/u1 du2/u2
/// over (0, inf)^2, by nested double-exponential quadrature. Used as an
/// independent check on the one-dimensional Bessel reduction.
CnRecord c2_two_dimensional(const PrecisionContext& ctx, const BigReal& eps);

}  // namespace expmath::ising
