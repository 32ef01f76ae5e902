#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "expmath/bigreal.hpp"

namespace expmath::quadrature {

using Integrand = std::function<BigReal(const BigReal&)>;

inline constexpr int kDefaultMaxLevel = 12;
// Levels below this never report convergence; very coarse grids can agree
// with each other by accident.
inline constexpr int kMinConvergedLevel = 3;

/// One tanh-sinh node on (-1, 1). `complement` is 1 - |abscissa|, kept
/// separately so that nodes crowding an endpoint do not lose their offset.
struct QuadratureNode {
  BigReal abscissa;
  BigReal complement;
  BigReal weight;
};

/// Nodes introduced at one refinement level: every k h for level 0, odd
/// multiples of h afterwards, with h = 2^-level. Weights include dx/du but
/// not the step.
struct QuadratureRule {
  int level = 0;
  BigReal step;
  std::vector<QuadratureNode> nodes;
};

QuadratureRule tanh_sinh_rule(int level, const PrecisionContext& ctx);

struct IntegralResult {
  BigReal value;
  BigReal error_estimate;
  int levels_used = 0;
  bool converged = false;
  /// Inter-level difference after each level >= 1.
  std::vector<BigReal> level_errors;
  long evaluations = 0;
  /// Upper end of the range actually integrated when a decay certificate
  /// was used to truncate a semi-infinite integral.
  std::optional<BigReal> truncated_at;
};

/// Decay certificate: |f(t)| <= coefficient * exp(-rate * t) for t >= from.
struct DecayCertificate {
  BigReal from;
  BigReal coefficient;
  BigReal rate;
};

/// Tanh-sinh over [a, b] with cached node tables. One integrator can be
/// reused for many intervals at the same precision (the node tables are
/// filled on first use, so an instance must not be shared between threads).
class TanhSinh {
 public:
  explicit TanhSinh(const PrecisionContext& ctx, int max_level = kDefaultMaxLevel);

  IntegralResult integrate(const Integrand& f, const BigReal& a, const BigReal& b, const BigReal& eps);

  const QuadratureRule& rule(int level);
  const PrecisionContext& context() const noexcept { return ctx_; }
  int max_level() const noexcept { return max_level_; }

 private:
  PrecisionContext ctx_;
  int max_level_;
  std::vector<QuadratureRule> rules_;
};

IntegralResult integrate_finite(const Integrand& f, const BigReal& a, const BigReal& b, const BigReal& eps,
                                const PrecisionContext& ctx, int max_level = kDefaultMaxLevel);

/// Integral over (a, inf). With a certificate the range is cut where the
/// certified tail drops below eps/4 and the finite engine handles [a, T];
/// nodes past `from` are checked against the certificate. Without one the
/// exp-sinh map t = a + exp(pi/2 sinh u) is used.
IntegralResult integrate_semi_infinite(const Integrand& f, const BigReal& a, const BigReal& eps,
                                       const PrecisionContext& ctx,
                                       const std::optional<DecayCertificate>& tail_bound = std::nullopt,
                                       int max_level = kDefaultMaxLevel);

}  // namespace expmath::quadrature
