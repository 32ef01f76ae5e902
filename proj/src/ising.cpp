#include "expmath/ising.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "expmath/errors.hpp"
#include "expmath/numkernel.hpp"

namespace expmath::ising {

namespace nk = expmath::numkernel;
namespace q = expmath::quadrature;

PrecisionContext default_context() { return PrecisionContext::for_digits(128); }

BigReal default_eps() { return BigReal::pow10(-25, 64); }

namespace {

// 2^n / n!
BigReal prefactor(long n, long bits) {
  BigReal out(1L, bits);
  for (long k = 1; k <= n; ++k) {
    out *= 2;
    out /= k;
  }
  return out;
}

}  // namespace

CnRecord c_n(long n, const PrecisionContext& ctx, const BigReal& eps, int max_level) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!(eps.sign() > 0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  const long bits = ctx.bits();
  const nk::BesselK0 k0(ctx);
  const BigReal scale = prefactor(n, bits);
  auto integrand = [&](const BigReal& t) {
    const nk::K0Value k = k0(t);
    return nk::exp(nk::ln(t, ctx) + k.log_value * n, ctx);
  };

  // t K0^n <= (pi/2)^(n/2) t^(1-n/2) e^(-n t) <= (pi/2)^(n/2) (2/e) e^(-(n - 1/2) t) for t >= 1.
  const PrecisionContext cert_ctx = PrecisionContext::for_digits(20);
  const BigReal half_pi = nk::pi_constant(cert_ctx) / 2;
  const BigReal coefficient =
      nk::exp(nk::ln(half_pi, cert_ctx) * n / 2, cert_ctx) * 2 / nk::exp(BigReal(1L, cert_ctx.bits()), cert_ctx);
  const q::DecayCertificate cert{BigReal(1L, 64), coefficient, BigReal(static_cast<double>(n) - 0.5, 64)};

  const BigReal integral_eps = eps / scale;
  const q::IntegralResult r =
      q::integrate_semi_infinite(integrand, BigReal(0L, bits), integral_eps, ctx, cert, max_level);
  if (!r.converged)
    throw Error(ErrorKind::NonConvergence, "C_" + std::to_string(n) + " quadrature did not reach the tolerance after " +
                                               std::to_string(r.levels_used) + " levels");
  return CnRecord{n, r.value * scale, r.error_estimate * scale};
}

CnRecord c_n(long n) { return c_n(n, default_context(), default_eps()); }

BigReal c_infinity(const PrecisionContext& ctx) {
  const BigReal gamma = nk::euler_gamma(ctx);
  return nk::exp(gamma * -2, ctx) * 2;
}

MonotonicityReport monotonicity_scan(long n_max, const PrecisionContext& ctx, const BigReal& eps,
                                     unsigned max_workers) {
  if (n_max < 2) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 2");
  if (max_workers == 0) max_workers = std::max(1u, std::thread::hardware_concurrency());

  MonotonicityReport report;
  report.records.resize(static_cast<std::size_t>(n_max));
  // Each task writes only its own slot, so the result does not depend on scheduling.
  std::vector<std::future<void>> running;
  for (long n = 1; n <= n_max; ++n) {
    if (running.size() >= max_workers) {
      running.front().get();
      running.erase(running.begin());
    }
    running.push_back(std::async(std::launch::async, [&report, &ctx, &eps, n] {
      report.records[static_cast<std::size_t>(n - 1)] = c_n(n, ctx, eps);
    }));
  }
  for (auto& f : running) f.get();

  const BigReal limit = c_infinity(ctx);
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const CnRecord& r = report.records[i];
    if (r.value - limit <= r.error_estimate) report.limit_violations.push_back(r.n);
    if (i + 1 < report.records.size()) {
      const CnRecord& next = report.records[i + 1];
      if (r.value - next.value <= r.error_estimate + next.error_estimate) report.violations.push_back(r.n);
    }
  }
  return report;
}

CnRecord c2_two_dimensional(const PrecisionContext& ctx, const BigReal& eps) {
  if (!(eps.sign() > 0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  const long bits = ctx.bits();
  const BigReal zero(0L, bits);
  // Inner integrals carry their own error into the outer sum; keep them well below eps.
  const BigReal inner_eps = eps * BigReal::pow10(-4, 64);
  BigReal inner_error(0L, 64);

  auto outer = [&](const BigReal& u1) {
    const BigReal s1 = u1 + 1L / u1;
    auto inner = [&](const BigReal& u2) {
      const BigReal s = s1 + u2 + 1L / u2;
      return 1L / (s * s * u2);
    };
    const q::IntegralResult r = q::integrate_semi_infinite(inner, zero, inner_eps, ctx);
    if (!r.converged) throw Error(ErrorKind::NonConvergence, "inner integral did not converge");
    inner_error = max(inner_error, r.error_estimate.at_bits(64));
    return r.value / u1;
  };
  const q::IntegralResult r = q::integrate_semi_infinite(outer, zero, eps, ctx);
  if (!r.converged) throw Error(ErrorKind::NonConvergence, "outer integral did not converge");
  // 4 / 2! = 2
  return CnRecord{2, r.value * 2, (r.error_estimate + inner_error) * 2};
}

}  // namespace expmath::ising
