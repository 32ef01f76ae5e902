#include "expmath/sinclab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <thread>

#include <gmp.h>

#include "expmath/agmpi.hpp"
#include "expmath/errors.hpp"
#include "expmath/numkernel.hpp"
#include "expmath/quadrature.hpp"

namespace expmath::sinclab {

namespace nk = expmath::numkernel;
namespace q = expmath::quadrature;

namespace {

constexpr double kLog2E = 1.4426950408889634;
constexpr long kMaxDirectTerms = 1L << 22;
constexpr long kMaxThresholdTerms = 1L << 26;
constexpr int kMaxSummationByParts = 150;
// The quadrature covers [0, kPanelWidth * (N + 1)] in panels of this width.
constexpr long kPanelWidth = 4;

void require_n(long N) {
  if (N < 1 || N > kMaxN)
    throw Error(ErrorKind::InvalidArgument, "N must lie in [1, " + std::to_string(kMaxN) + "]");
}

void require_eps(const BigReal& eps) {
  if (!(eps.sign() > 0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
}

struct Cx {
  BigReal re;
  BigReal im;
};

Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
Cx operator*(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
Cx operator*(const Cx& a, const BigReal& s) { return {a.re * s, a.im * s}; }
Cx operator/(const Cx& a, const Cx& b) {
  const BigReal den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

Cx expi(const BigReal& theta, const PrecisionContext& ctx) { return {nk::cos(theta, ctx), nk::sin(theta, ctx)}; }

// Sums fn(begin, end) over fixed chunks of [0, count) on up to
// hardware_concurrency threads; chunk totals are added in index order, so
// the result does not depend on the thread count.
BigReal ordered_parallel_sum(long count, long chunk, const std::function<BigReal(long, long)>& fn, long bits) {
  const long chunks = (count + chunk - 1) / chunk;
  std::vector<BigReal> partial(static_cast<std::size_t>(chunks), BigReal(0L, bits));
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long c = next++; c < chunks; c = next++)
      partial[static_cast<std::size_t>(c)] = fn(c * chunk, std::min(count, (c + 1) * chunk));
  };
  const long workers = std::min<long>(chunks, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> running;
  for (long w = 1; w < workers; ++w) running.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : running) f.get();
  BigReal total(0L, bits);
  for (const BigReal& p : partial) total += p;
  return total;
}

long odd_product(long N) {
  long p = 1;
  for (long k = 1; k <= N; ++k) p *= 2 * k + 1;
  return p;
}

// Working context with room for the cancellation between expansion terms,
// whose weights sum to prod (2k+1).
PrecisionContext expansion_context(long N, const PrecisionContext& ctx) {
  return ctx.with_extra_bits(static_cast<long>(std::ceil(std::log2(static_cast<double>(odd_product(N))))) + 16);
}

struct TailConstants {
  BigReal pi;
  BigReal gamma;
};

// E_m(-i beta) = integral_1^inf e^(i beta t) t^-m dt for beta != 0, to 2^-bits.
Cx exponential_integral_imag(long m, const BigReal& beta, const PrecisionContext& ctx, const TailConstants& k) {
  const long bits = ctx.bits();
  const double abs_beta = std::fabs(beta.to_double());

  // Integration by parts: -e^(i beta) sum_j (m)_j / (i beta)^(j+1), remainder
  // at most (m)_J / |beta|^J / (m + J - 1).
  double log_pochhammer = 0.0;  // ln (m)_J - J ln|beta|
  double best = std::numeric_limits<double>::infinity();
  long best_j = 0;
  for (long j = 1; j < 4 * (static_cast<long>(abs_beta) + m); ++j) {
    log_pochhammer += std::log(static_cast<double>(m + j - 1)) - std::log(abs_beta);
    const double b = log_pochhammer - std::log(static_cast<double>(m + j - 1));
    if (b < best) {
      best = b;
      best_j = j;
    }
    if (b > best + 5.0) break;
  }
  if (best_j > 0 && best < -static_cast<double>(bits + 8) / kLog2E) {
    // units (-i)^(j+1): -i, -1, i, 1
    BigReal re(0L, bits), im(0L, bits);
    BigReal r = 1L / beta;  // (m)_j / beta^(j+1)
    for (long j = 0; j < best_j; ++j) {
      switch (j % 4) {
        case 0: im -= r; break;
        case 1: re -= r; break;
        case 2: im += r; break;
        default: re += r; break;
      }
      r *= m + j;
      r /= beta;
    }
    const Cx e = expi(beta, ctx);
    const Cx s{re, im};
    const Cx out = e * s;
    return {-out.re, -out.im};
  }

  // Power series
  //   E_m(z) = (-z)^(m-1)/(m-1)! (psi(m) - ln z) - sum_{k != m-1} (-z)^k / ((k - m + 1) k!)
  // with -z = i beta; terms peak near |beta|, so carry that much extra precision.
  const PrecisionContext wide = ctx.with_extra_bits(static_cast<long>(abs_beta * kLog2E) + 32);
  const long wbits = wide.bits();
  const BigReal b = beta.at_bits(wbits);
  BigReal psi = -k.gamma.at_bits(wbits);
  for (long j = 1; j < m; ++j) psi += BigReal::ratio(1, j, wbits);
  // -ln z = -ln|beta| + i (pi/2) sgn(beta)
  const Cx minus_log{-nk::ln(abs(b), wide), k.pi.at_bits(wbits) / 2 * (b.sign() > 0 ? 1L : -1L)};
  const Cx log_term{psi + minus_log.re, minus_log.im};

  BigReal sum_re(0L, wbits), sum_im(0L, wbits);
  Cx lead{BigReal(0L, wbits), BigReal(0L, wbits)};
  BigReal magnitude(1L, wbits);  // beta^k / k!
  BigReal stop(1L, 64);
  mpfr_div_2si(stop.get(), stop.get(), bits + 16, MPFR_RNDN);
  for (long kk = 0;; ++kk) {
    if (kk > 0) {
      magnitude *= b;
      magnitude /= kk;
    }
    // i^k beta^k / k!
    Cx p{BigReal(0L, wbits), BigReal(0L, wbits)};
    switch (kk % 4) {
      case 0: p.re = magnitude; break;
      case 1: p.im = magnitude; break;
      case 2: p.re = -magnitude; break;
      default: p.im = -magnitude; break;
    }
    if (kk == m - 1) {
      lead = p * log_term;
    } else {
      const long d = kk - m + 1;
      sum_re += p.re / d;
      sum_im += p.im / d;
    }
    if (static_cast<double>(kk) > 2.0 * abs_beta + static_cast<double>(m) && abs(magnitude) < stop) break;
  }
  return {(lead.re - sum_re).at_bits(bits), (lead.im - sum_im).at_bits(bits)};
}

ComplexValue tail_with(long m, const BigReal& b, const BigReal& X, const PrecisionContext& ctx,
                       const TailConstants& k) {
  const long bits = ctx.bits();
  const BigReal scale = nk::power(X.at_bits(bits), 1 - m, ctx);
  if (b.is_zero()) return {scale / (m - 1), BigReal(0L, bits)};
  const Cx e = exponential_integral_imag(m, b * X, ctx, k);
  return {e.re * scale, e.im * scale};
}

TailConstants tail_constants(const PrecisionContext& ctx) {
  // The series route widens the precision by up to ~|beta| log2 e bits.
  const PrecisionContext wide = ctx.with_extra_bits(ctx.bits() + 64);
  return {agmpi::pi(wide), nk::euler_gamma(wide)};
}

}  // namespace

BigReal sinc(const BigReal& x, const PrecisionContext& ctx) {
  const long bits = ctx.bits();
  if (x.is_zero()) return BigReal(1L, bits);
  if (x.exponent2() < -8) {
    const BigReal x2 = x.at_bits(bits) * x;
    BigReal term(1L, bits), sum(1L, bits);
    BigReal stop(1L, 64);
    mpfr_div_2si(stop.get(), stop.get(), bits + 2, MPFR_RNDN);
    for (long k = 1; abs(term) >= stop; ++k) {
      term *= x2;
      term /= -(2 * k) * (2 * k + 1);
      sum += term;
    }
    return sum;
  }
  return nk::sin(x.at_bits(bits), ctx) / x;
}

BigReal sinc_product(long N, const BigReal& x, const PrecisionContext& ctx) {
  if (N < 0) throw Error(ErrorKind::InvalidArgument, "N must be >= 0");
  BigReal out(1L, ctx.bits());
  for (long k = 0; k <= N; ++k) out *= sinc(x.at_bits(ctx.bits()) / (2 * k + 1), ctx);
  return out;
}

FrequencyExpansion frequency_expansion(long N, const PrecisionContext& ctx) {
  require_n(N);
  const long m = N + 1;
  FrequencyExpansion out;
  out.N = N;
  out.cosine = m % 2 == 0;
  BigReal scale(odd_product(N), ctx.bits());
  mpfr_div_2si(scale.get(), scale.get(), N, MPFR_RNDN);
  if ((m / 2) % 2 == 1) scale = -scale;

  std::vector<Rational> a;
  for (long k = 1; k <= N; ++k) a.emplace_back(1, 2 * k + 1);
  const unsigned long count = 1UL << N;
  out.terms.reserve(count);
  for (unsigned long mask = 0; mask < count; ++mask) {
    Rational b(1);
    bool negative = false;
    for (long k = 0; k < N; ++k) {
      if (mask & (1UL << k)) {
        b = b - a[static_cast<std::size_t>(k)];
        negative = !negative;
      } else {
        b = b + a[static_cast<std::size_t>(k)];
      }
    }
    out.terms.push_back(FrequencyTerm{b, negative ? -scale : scale});
  }
  return out;
}

BigReal evaluate_expansion(const FrequencyExpansion& e, const BigReal& x, const PrecisionContext& ctx) {
  if (x.is_zero()) throw Error(ErrorKind::DomainViolation, "expansion is singular at x = 0");
  const long bits = ctx.bits();
  BigReal total(0L, bits);
  for (const FrequencyTerm& t : e.terms) {
    const BigReal arg = t.frequency.to_big(bits) * x;
    total += t.weight * (e.cosine ? nk::cos(arg, ctx) : nk::sin(arg, ctx));
  }
  return total / nk::power(x.at_bits(bits), e.N + 1, ctx);
}

ComplexValue power_exp_tail(long m, const BigReal& b, const BigReal& X, const PrecisionContext& ctx) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "power must be >= 2");
  if (!(X.sign() > 0)) throw Error(ErrorKind::InvalidArgument, "lower limit must be positive");
  return tail_with(m, b, X, ctx, tail_constants(ctx));
}

SumEvaluation sinc_sum_evaluate(long N, const BigReal& eps, const PrecisionContext& ctx) {
  require_n(N);
  require_eps(eps);
  const long m = N + 1;
  const PrecisionContext work = expansion_context(N, ctx);
  const long bits = work.bits();
  const FrequencyExpansion expansion = frequency_expansion(N, work);

  struct Freq {
    BigReal b;
    BigReal weight;
    Cx z;
    Cx q;                 // z / (1 - z)
    BigReal inv_gap;      // 1 / |1 - z|
  };
  std::vector<Freq> freqs;
  for (const FrequencyTerm& t : expansion.terms) {
    const BigReal b = t.frequency.to_big(bits);
    const BigReal gap = abs(nk::sin(b / 2, work)) * 2;
    if (gap.is_zero() || gap.exponent2() < -(bits / 2))
      throw Error(ErrorKind::DomainViolation, "frequency " + t.frequency.to_string() + " is a multiple of 2 pi");
    const Cx z = expi(b, work);
    const Cx one_minus_z{1L - z.re, -z.im};
    freqs.push_back(Freq{b, t.weight, z, z / one_minus_z, 1L / gap});
  }

  for (long M = 32; M <= kMaxDirectTerms; M *= 2) {
    // Delta^j g(M) for g(n) = n^-m, j = 0..J, computed with enough extra
    // bits to absorb the cancellation of the difference table.
    const long jmax = std::min<long>(kMaxSummationByParts, M);
    const long dbits = bits + static_cast<long>(static_cast<double>(jmax + 1) * (std::log2(static_cast<double>(M)) + 1)) + 32;
    const PrecisionContext dctx = work.with_extra_bits(dbits - bits);
    std::vector<BigReal> table;
    for (long i = 0; i <= jmax + 1; ++i) table.push_back(nk::power(BigReal(M + i, dbits), -m, dctx));
    std::vector<BigReal> diffs;
    for (long j = 0; j <= jmax + 1; ++j) {
      diffs.push_back(table[0].at_bits(bits));
      for (std::size_t i = 0; i + 1 < table.size() - static_cast<std::size_t>(j); ++i) table[i] = table[i + 1] - table[i];
    }

    // Per frequency choose J minimizing |Delta^(J-1) g(M)| / |1 - z|^J.
    BigReal bound(0L, 64);
    std::vector<long> chosen;
    for (const Freq& f : freqs) {
      const double log_inv_gap = log10_abs(f.inv_gap);
      double best = std::numeric_limits<double>::infinity();
      long best_j = 1;
      for (long j = 1; j <= jmax + 1; ++j) {
        const double v = log10_abs(diffs[static_cast<std::size_t>(j - 1)]) + static_cast<double>(j) * log_inv_gap;
        if (v < best) {
          best = v;
          best_j = j;
        }
      }
      chosen.push_back(best_j);
      BigReal r = abs(diffs[static_cast<std::size_t>(best_j - 1)]).at_bits(64) * abs(f.weight).at_bits(64);
      for (long j = 0; j < best_j; ++j) r *= f.inv_gap.at_bits(64);
      bound += r;
    }
    if (bound > eps / 2) continue;

    // sum_{n>=M} z^n g(n) = z^M / (1 - z) sum_{j<J} Delta^j g(M) q^j + remainder
    BigReal tail(0L, bits);
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      const Freq& f = freqs[i];
      Cx acc{BigReal(0L, bits), BigReal(0L, bits)};
      Cx power{BigReal(1L, bits), BigReal(0L, bits)};
      for (long j = 0; j < chosen[i]; ++j) {
        acc = acc + power * diffs[static_cast<std::size_t>(j)];
        power = power * f.q;
      }
      const Cx zM = expi(f.b * M, work);
      const Cx one_minus_z{1L - f.z.re, -f.z.im};
      const Cx s = zM * acc / one_minus_z;
      tail += f.weight * (expansion.cosine ? s.re : s.im);
    }

    const BigReal direct = ordered_parallel_sum(
        M - 1, 64,
        [&](long begin, long end) {
          BigReal part(0L, bits);
          for (long n = begin + 1; n <= end; ++n) part += sinc_product(N, BigReal(n, bits), work);
          return part;
        },
        bits);

    BigReal value = BigReal::ratio(1, 2, bits) + direct + tail;
    return SumEvaluation{value.at_bits(ctx.bits()), bound, M - 1};
  }
  throw Error(ErrorKind::NonConvergence, "sum tail bound not reached within " + std::to_string(kMaxDirectTerms) +
                                             " direct terms");
}

BigReal sinc_sum(long N, const BigReal& eps, const PrecisionContext& ctx) {
  return sinc_sum_evaluate(N, eps, ctx).value;
}

IntegralEvaluation sinc_integral_evaluate(long N, const BigReal& eps, const PrecisionContext& ctx) {
  require_n(N);
  require_eps(eps);
  const long m = N + 1;
  const PrecisionContext work = expansion_context(N, ctx);
  const long bits = work.bits();
  const long panels = N + 1;
  const BigReal split(panels * kPanelWidth, bits);

  const BigReal panel_eps = eps / (4 * panels);
  std::vector<BigReal> panel_errors(static_cast<std::size_t>(panels), BigReal(0L, 64));
  const BigReal bulk = ordered_parallel_sum(
      panels, 1,
      [&](long begin, long) {
        q::TanhSinh engine(work);
        const BigReal lo(begin * kPanelWidth, bits), hi((begin + 1) * kPanelWidth, bits);
        const q::IntegralResult r =
            engine.integrate([&](const BigReal& x) { return sinc_product(N, x, work); }, lo, hi, panel_eps);
        if (!r.converged)
          throw Error(ErrorKind::NonConvergence, "quadrature on [" + lo.to_decimal(6) + ", " + hi.to_decimal(6) +
                                                     "] did not converge");
        panel_errors[static_cast<std::size_t>(begin)] = r.error_estimate.at_bits(64);
        return r.value;
      },
      bits);

  const FrequencyExpansion expansion = frequency_expansion(N, work);
  const TailConstants constants = tail_constants(work);
  BigReal tail(0L, bits);
  BigReal weight_sum(0L, 64);
  for (const FrequencyTerm& t : expansion.terms) {
    const ComplexValue v = tail_with(m, t.frequency.to_big(bits), split, work, constants);
    tail += t.weight * (expansion.cosine ? v.re : v.im);
    weight_sum += abs(t.weight).at_bits(64);
  }

  BigReal error(0L, 64);
  for (const BigReal& e : panel_errors) error += e;
  // Each tail is accurate to 2^-bits relative to split^(1-m).
  BigReal tail_error = weight_sum * nk::power(split.at_bits(64), 1 - m, PrecisionContext::for_digits(15));
  mpfr_div_2si(tail_error.get(), tail_error.get(), bits - 8, MPFR_RNDN);
  error += tail_error;
  return IntegralEvaluation{(bulk + tail).at_bits(ctx.bits()), error, split.at_bits(64)};
}

BigReal sinc_integral(long N, const BigReal& eps, const PrecisionContext& ctx) {
  return sinc_integral_evaluate(N, eps, ctx).value;
}

SincIdentityReport sinc_identity(long N, const BigReal& eps, const PrecisionContext& ctx) {
  const SumEvaluation lhs = sinc_sum_evaluate(N, eps, ctx);
  const IntegralEvaluation rhs = sinc_integral_evaluate(N, eps, ctx);
  return SincIdentityReport{N, lhs.value, rhs.value, lhs.value - rhs.value, lhs.truncation_bound, rhs.error_bound};
}

namespace {

// Outward-rounded scan of H_N = sum_{k<=N} 1/(2k+1) against [thr_lo, thr_hi].
// `resolve(N)` decides H_N > threshold when the enclosure cannot; it returns
// nullopt if it cannot decide either.
std::optional<long> scan(const BigReal& thr_lo, const BigReal& thr_hi, long bits,
                         const std::function<std::optional<bool>(long)>& resolve) {
  mpfr_t lo, hi, t;
  mpfr_inits2(bits, lo, hi, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_ui(lo, 0, MPFR_RNDN);
  mpfr_set_ui(hi, 0, MPFR_RNDN);
  std::optional<long> out;
  for (long k = 0; k < kMaxThresholdTerms; ++k) {
    const unsigned long d = static_cast<unsigned long>(2 * k + 1);
    mpfr_set_ui(t, 1, MPFR_RNDN);
    mpfr_div_ui(t, t, d, MPFR_RNDD);
    mpfr_add(lo, lo, t, MPFR_RNDD);
    mpfr_set_ui(t, 1, MPFR_RNDN);
    mpfr_div_ui(t, t, d, MPFR_RNDU);
    mpfr_add(hi, hi, t, MPFR_RNDU);
    if (mpfr_cmp(lo, thr_hi.get()) > 0) {
      out = k;
      break;
    }
    if (mpfr_cmp(hi, thr_lo.get()) <= 0) continue;
    const std::optional<bool> crossed = resolve(k);
    if (!crossed) break;
    if (*crossed) {
      out = k;
      break;
    }
  }
  mpfr_clears(lo, hi, t, static_cast<mpfr_ptr>(nullptr));
  return out;
}

void require_threshold(const BigReal& threshold) {
  if (!(threshold > 1L)) throw Error(ErrorKind::InvalidArgument, "threshold must exceed 1");
  // H_N ~ ln(N)/2 + 0.98; past this the scan would exceed its term budget.
  if (threshold > BigReal(9.5, 64)) throw Error(ErrorKind::InvalidArgument, "threshold must not exceed 9.5");
}

}  // namespace

long threshold_scan(const BigReal& threshold, const PrecisionContext& ctx) {
  require_threshold(threshold);
  for (long bits = std::max(ctx.bits(), threshold.computed_at_bits() + 64); bits <= 16 * ctx.bits() + 1024;
       bits *= 2) {
    const auto n = scan(threshold, threshold, bits, [](long) { return std::optional<bool>(); });
    if (n) return *n;
  }
  throw Error(ErrorKind::PrecisionUnachievable, "threshold lies too close to a partial sum to decide");
}

long threshold_scan(const Rational& threshold, const PrecisionContext& ctx) {
  const long bits = ctx.bits();
  BigReal lo(bits), hi(bits);
  mpfr_set_si(lo.get(), threshold.num(), MPFR_RNDN);
  mpfr_div_si(lo.get(), lo.get(), threshold.den(), MPFR_RNDD);
  mpfr_set_si(hi.get(), threshold.num(), MPFR_RNDN);
  mpfr_div_si(hi.get(), hi.get(), threshold.den(), MPFR_RNDU);
  require_threshold(hi);
  auto exact = [&](long N) -> std::optional<bool> {
    mpq_t sum, term, thr;
    mpq_inits(sum, term, thr, static_cast<mpq_ptr>(nullptr));
    for (long k = 0; k <= N; ++k) {
      mpq_set_ui(term, 1, static_cast<unsigned long>(2 * k + 1));
      mpq_add(sum, sum, term);
    }
    mpq_set_si(thr, threshold.num(), static_cast<unsigned long>(threshold.den()));
    const bool crossed = mpq_cmp(sum, thr) > 0;
    mpq_clears(sum, term, thr, static_cast<mpq_ptr>(nullptr));
    return crossed;
  };
  const auto n = scan(lo, hi, bits, exact);
  if (!n) throw Error(ErrorKind::InvalidArgument, "threshold scan exceeded its term budget");
  return *n;
}

}  // namespace expmath::sinclab
