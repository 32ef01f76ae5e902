#include "expmath/recognize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "expmath/agmpi.hpp"
#include "expmath/errors.hpp"
#include "expmath/numkernel.hpp"
#include "expmath/rational.hpp"

namespace expmath::recognize {

namespace nk = expmath::numkernel;

std::vector<std::string> basis_names() { return {"one", "gamma", "expm2gamma", "zeta3", "pi", "pi2", "ln2"}; }

BasisConstant basis_constant(const std::string& name, const PrecisionContext& ctx) {
  const long bits = ctx.bits();
  if (name == "one") return {name, BigReal(1L, bits), "1"};
  if (name == "gamma") return {name, nk::euler_gamma(ctx), "γ"};
  if (name == "expm2gamma") return {name, nk::exp(nk::euler_gamma(ctx) * -2, ctx), "e^(−2γ)"};
  if (name == "zeta3") return {name, nk::zeta3(ctx), "ζ(3)"};
  if (name == "pi") return {name, agmpi::pi(ctx), "π"};
  if (name == "pi2") {
    const BigReal p = agmpi::pi(ctx);
    return {name, p * p, "π²"};
  }
  if (name == "ln2") return {name, nk::ln(BigReal(2L, bits), ctx), "ln 2"};
  throw Error(ErrorKind::InvalidArgument, "unknown basis constant '" + name + "'");
}

std::vector<BasisConstant> parse_basis(const std::string& list, const PrecisionContext& ctx) {
  std::vector<BasisConstant> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(basis_constant(item, ctx));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "basis list is empty");
  return out;
}

namespace {

using Row = std::vector<BigReal>;

BigReal normalized_residual(std::span<const BigReal> values, const std::vector<std::int64_t>& m, long bits) {
  BigReal sum(0L, bits), scale(0L, bits);
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i].at_bits(bits) * static_cast<long>(m[i]);
    scale = max(scale, abs(values[i]).at_bits(bits));
  }
  return abs(sum) / scale;
}

std::vector<std::int64_t> normalize(std::vector<std::int64_t> m) {
  std::int64_t g = 0;
  for (auto v : m) g = std::gcd(g, v < 0 ? -v : v);
  if (g > 1)
    for (auto& v : m) v /= g;
  const auto first = std::find_if(m.begin(), m.end(), [](std::int64_t v) { return v != 0; });
  if (first != m.end() && *first < 0)
    for (auto& v : m) v = -v;
  return m;
}

int confidence_of(const BigReal& residual, int digits) {
  if (residual.is_zero()) return digits;
  return std::min(digits, static_cast<int>(std::floor(-log10_abs(residual))));
}

}  // namespace

std::optional<std::vector<std::int64_t>> find_integer_relation(std::span<const BigReal> values, int precision_digits,
                                                               const RelationOptions& options) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "need at least two values");
  if (precision_digits <= options.safety_digits)
    throw Error(ErrorKind::InvalidArgument, "precision_digits must exceed the safety margin");
  if (options.coefficient_cap < 1) throw Error(ErrorKind::InvalidArgument, "coefficient cap must be >= 1");
  // Random inputs admit relations of height H with residual near H^-(n-1);
  // the threshold must sit well below that at H = cap.
  const double budget = static_cast<double>(n - 1) * std::log10(static_cast<double>(options.coefficient_cap));
  if (budget >= precision_digits - options.safety_digits)
    throw Error(ErrorKind::InsufficientPrecision,
                std::to_string(precision_digits) + " digits cannot certify " + std::to_string(n) +
                    "-term relations up to the coefficient cap");
  const long need = PrecisionContext::bits_for_digits(precision_digits);
  for (const BigReal& v : values) {
    if (v.computed_at_bits() < need)
      throw Error(ErrorKind::InsufficientPrecision, "value carries " + std::to_string(v.computed_at_bits()) +
                                                        " bits, " + std::to_string(need) + " required");
    if (!v.is_finite()) throw Error(ErrorKind::NonFinite, "value is not finite");
  }
  const PrecisionContext ctx = PrecisionContext::for_digits(precision_digits);
  const long bits = ctx.bits();
  const BigReal threshold = BigReal::pow10(-(precision_digits - options.safety_digits), 64);

  auto accept = [&](std::vector<std::int64_t> m) -> std::optional<std::vector<std::int64_t>> {
    m = normalize(std::move(m));
    for (auto v : m)
      if (v > options.coefficient_cap || v < -options.coefficient_cap) return std::nullopt;
    if (normalized_residual(values, m, bits) >= threshold) return std::nullopt;
    return m;
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (values[i].is_zero()) {
      std::vector<std::int64_t> unit(n, 0);
      unit[i] = 1;
      return unit;
    }
  }

  // x rounded to the requested digits, so that PSLQ cannot exploit digits
  // beyond the budget.
  std::vector<BigReal> x;
  for (const BigReal& v : values) x.push_back(v.at_bits(need).at_bits(bits));

  std::vector<BigReal> s(n, BigReal(0L, bits));
  {
    BigReal acc(0L, bits);
    for (std::size_t k = n; k-- > 0;) {
      acc += x[k] * x[k];
      s[k] = nk::sqrt(acc, ctx);
    }
  }
  std::vector<BigReal> y(n, BigReal(0L, bits));
  for (std::size_t k = 0; k < n; ++k) y[k] = x[k] / s[0];
  const BigReal s0 = s[0];
  for (auto& v : s) v /= s0;

  std::vector<Row> H(n, Row(n - 1, BigReal(0L, bits)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < n && j <= i; ++j)
      H[i][j] = i == j ? s[j + 1] / s[j] : -(y[i] * y[j]) / (s[j] * s[j + 1]);

  std::vector<Row> A(n, Row(n, BigReal(0L, bits)));
  std::vector<Row> B(n, Row(n, BigReal(0L, bits)));
  for (std::size_t i = 0; i < n; ++i) {
    A[i][i] = BigReal(1L, bits);
    B[i][i] = BigReal(1L, bits);
  }

  // Hermite reduction of H, mirrored in y, A and B.
  auto reduce = [&] {
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = std::min(i, n - 1); j-- > 0;) {
        if (H[j][j].is_zero()) continue;
        const BigReal t = round_nearest(H[i][j] / H[j][j]);
        if (t.is_zero()) continue;
        y[j] += t * y[i];
        for (std::size_t k = 0; k <= j; ++k) H[i][k] -= t * H[j][k];
        for (std::size_t k = 0; k < n; ++k) {
          A[i][k] -= t * A[j][k];
          B[k][j] += t * B[k][i];
        }
      }
    }
  };
  auto column = [&](std::size_t j) {
    std::vector<std::int64_t> m(n);
    for (std::size_t i = 0; i < n; ++i) {
      const BigReal& b = B[i][j];
      if (abs(b) > BigReal(9.0e18, 64)) return std::vector<std::int64_t>{};
      m[i] = static_cast<std::int64_t>(b.to_long());
    }
    return m;
  };

  reduce();
  const double gamma = std::sqrt(4.0 / 3.0) + 0.01;
  // Beyond this the lattice entries need more digits than the budget offers.
  const BigReal entry_limit = BigReal::pow10(precision_digits - options.safety_digits, 64);
  const BigReal cap(static_cast<long>(options.coefficient_cap), 64);

  for (long iter = 0;; ++iter) {
    for (std::size_t j = 0; j < n; ++j) {
      if (abs(y[j]) < threshold) {
        const auto candidate = column(j);
        if (candidate.empty()) return std::nullopt;
        return accept(candidate);
      }
    }

    BigReal hmax(0L, 64);
    for (std::size_t i = 0; i + 1 < n; ++i) hmax = max(hmax, abs(H[i][i]).at_bits(64));
    if (hmax.is_zero()) return std::nullopt;
    // Any relation has norm >= 1 / max |H_jj|.
    if (1L / hmax > cap) return std::nullopt;

    for (const Row& row : A)
      for (const BigReal& a : row)
        if (abs(a) > entry_limit)
          throw Error(ErrorKind::InsufficientPrecision,
                      "relation search exhausted " + std::to_string(precision_digits) + " digits");
    if (iter == options.max_iterations) break;

    std::size_t m = 0;
    double best = -1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double v = std::pow(gamma, static_cast<double>(i + 1)) * std::fabs(H[i][i].to_double());
      if (v > best) {
        best = v;
        m = i;
      }
    }
    std::swap(y[m], y[m + 1]);
    std::swap(A[m], A[m + 1]);
    std::swap(H[m], H[m + 1]);
    for (std::size_t k = 0; k < n; ++k) std::swap(B[k][m], B[k][m + 1]);
    if (m + 2 < n) {
      const BigReal t0 = nk::sqrt(H[m][m] * H[m][m] + H[m][m + 1] * H[m][m + 1], ctx);
      const BigReal t1 = H[m][m] / t0;
      const BigReal t2 = H[m][m + 1] / t0;
      for (std::size_t i = m; i < n; ++i) {
        const BigReal t3 = H[i][m];
        const BigReal t4 = H[i][m + 1];
        H[i][m] = t1 * t3 + t2 * t4;
        H[i][m + 1] = t1 * t4 - t2 * t3;
      }
    }
    reduce();

  }
  return std::nullopt;
}

namespace {

std::string render_match(const std::vector<std::int64_t>& relation, const std::vector<const BasisConstant*>& used) {
  // value = -sum_i m_i b_i / m_0
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < used.size(); ++i) {
    const std::int64_t c = relation[i + 1];
    if (c == 0) continue;
    const Rational r = Rational(-c, relation[0]);
    const bool negative = r.num() < 0;
    const Rational mag = negative ? -r : r;
    const bool unit_basis = used[i]->name == "one";
    std::string term;
    if (unit_basis) {
      term = mag.to_string();
    } else if (mag == Rational(1)) {
      term = used[i]->render;
    } else {
      term = mag.to_string() + "·" + used[i]->render;
    }
    if (first) {
      out = (negative ? "−" : "") + term;
      first = false;
    } else {
      out += (negative ? " − " : " + ") + term;
    }
  }
  return first ? "0" : out;
}

double coefficient_norm(const std::vector<std::int64_t>& m) {
  double s = 0.0;
  for (auto v : m) s += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(s);
}

}  // namespace

std::vector<RecognitionMatch> recognize(const BigReal& value, const std::vector<BasisConstant>& basis,
                                        int precision_digits, const RelationOptions& options) {
  if (basis.empty()) throw Error(ErrorKind::InvalidArgument, "basis is empty");
  if (basis.size() > 12) throw Error(ErrorKind::InvalidArgument, "basis must have at most 12 constants");
  const long bits = PrecisionContext::bits_for_digits(precision_digits) + 32;

  std::vector<RecognitionMatch> matches;
  std::vector<std::vector<std::int64_t>> seen;  // relations expanded to the full basis
  const unsigned long subsets = 1UL << basis.size();
  for (unsigned long mask = 1; mask < subsets; ++mask) {
    std::vector<const BasisConstant*> used;
    std::vector<BigReal> values{value};
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (mask & (1UL << i)) {
        used.push_back(&basis[i]);
        values.push_back(basis[i].value);
      }
    }
    const auto relation = find_integer_relation(values, precision_digits, options);
    if (!relation || (*relation)[0] == 0) continue;
    // Skip relations that leave a chosen constant unused; the smaller subset reports them.
    if (std::any_of(relation->begin() + 1, relation->end(), [](std::int64_t c) { return c == 0; })) continue;

    std::vector<std::int64_t> full(basis.size() + 1, 0);
    full[0] = (*relation)[0];
    std::size_t k = 1;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (mask & (1UL << i)) full[i + 1] = (*relation)[k++];
    if (std::find(seen.begin(), seen.end(), full) != seen.end()) continue;
    seen.push_back(full);

    const BigReal residual = normalized_residual(values, *relation, bits);
    matches.push_back(RecognitionMatch{*relation, residual, confidence_of(residual, precision_digits),
                                       render_match(*relation, used)});
  }
  std::stable_sort(matches.begin(), matches.end(), [](const RecognitionMatch& a, const RecognitionMatch& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    return coefficient_norm(a.coefficients) < coefficient_norm(b.coefficients);
  });
  return matches;
}

BigReal d4_closed_form(const PrecisionContext& ctx) {
  PrecisionContext work = ctx;
  for (int attempt = 0;; ++attempt) {
    const BigReal p = agmpi::pi(work);
    const BigReal a = p * p * 4 / 9;
    const BigReal b = nk::zeta3(work) * 7 / 2;
    const BigReal c = BigReal::ratio(1, 6, work.bits());
    const BigReal d = a - b - c;
    // Digits lost to cancellation: log10 of largest term over result.
    const double lost = log10_abs(a) - log10_abs(d);
    if (lost < work.guard_digits() / 2.0 || attempt == 4) return d.at_bits(ctx.bits());
    work = work.widened();
  }
}

}  // namespace expmath::recognize
