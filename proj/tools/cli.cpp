#include "expmath/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "expmath/agmpi.hpp"
#include "expmath/bbopt.hpp"
#include "expmath/errors.hpp"
#include "expmath/ising.hpp"
#include "expmath/numkernel.hpp"
#include "expmath/quadrature.hpp"
#include "expmath/rational.hpp"
#include "expmath/recognize.hpp"
#include "expmath/sinclab.hpp"
#include "expmath/walks.hpp"
#include "json.hpp"

namespace expmath::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A result: scalar fields plus an optional table, rendered as text, JSON or CSV.
struct Output {
  Json fields = Json::object();
  std::string table_key;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string field_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void emit(const Output& o, const std::string& format, std::ostream& os) {
  if (format == "json") {
    Json doc = o.fields;
    if (!o.table_key.empty()) {
      Json arr = Json::array();
      for (const auto& row : o.rows) {
        Json rec = Json::object();
        for (std::size_t i = 0; i < o.columns.size(); ++i) rec[o.columns[i]] = row[i];
        arr.push_back(std::move(rec));
      }
      doc[o.table_key] = std::move(arr);
    }
    os << doc.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    std::vector<std::string> header = o.columns;
    std::vector<std::vector<std::string>> rows = o.rows;
    if (o.table_key.empty()) {
      header.clear();
      rows.assign(1, {});
      for (const auto& [k, v] : o.fields.items()) {
        header.push_back(k);
        rows[0].push_back(field_text(v));
      }
    }
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_cell(header[i]);
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << "\n";
    }
    return;
  }
  for (const auto& [k, v] : o.fields.items()) os << k << ": " << field_text(v) << "\n";
  if (!o.table_key.empty()) {
    for (std::size_t i = 0; i < o.columns.size(); ++i) os << (i ? " " : "") << o.columns[i];
    os << "\n";
    for (const auto& row : o.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i];
      os << "\n";
    }
  }
}

// Error estimates never need more than a few digits.
std::string estimate(const BigReal& x, int digits) { return x.to_decimal(std::min(digits, 6)); }

std::string real_double(double v, int digits) {
  char buf[64];
  const auto r = digits >= 17 ? std::to_chars(buf, buf + sizeof buf, v)
                              : std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, r.ptr);
}

long parse_long(const std::string& s, const std::string& flag) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError(flag + ": '" + s + "' is not an integer");
  return v;
}

/// "k" or "a..b".
std::pair<long, long> parse_range(const std::string& s, const std::string& flag) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const long v = parse_long(s, flag);
    return {v, v};
  }
  const long a = parse_long(s.substr(0, dots), flag);
  const long b = parse_long(s.substr(dots + 2), flag);
  if (b < a) throw UsageError(flag + ": range end must not precede its start");
  return {a, b};
}

int significant_digits(const std::string& s) {
  int count = 0;
  bool leading = true;
  for (char c : s) {
    if (c == 'e' || c == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(c))) continue;
    if (leading && c == '0') continue;
    leading = false;
    ++count;
  }
  return count;
}

BigReal parse_decimal(const std::string& s, long bits, const std::string& flag) {
  try {
    return BigReal::parse(s, bits);
  } catch (const Error&) {
    throw UsageError(flag + ": '" + s + "' is not a decimal number");
  }
}

/// Runs f(n) for n in [lo, hi] concurrently; results in order of n.
template <typename F>
auto ordered_map(long lo, long hi, F f) {
  using R = decltype(f(lo));
  const long workers = std::max(1L, static_cast<long>(std::thread::hardware_concurrency()));
  std::vector<R> out;
  for (long start = lo; start <= hi; start += workers) {
    std::vector<std::future<R>> batch;
    for (long n = start; n <= std::min(hi, start + workers - 1); ++n)
      batch.push_back(std::async(std::launch::async, f, n));
    for (auto& fut : batch) out.push_back(fut.get());
  }
  return out;
}

struct Common {
  std::optional<int> digits_flag;
  std::string format = "text";
  std::string output_path;

  int digits(int fallback) const {
    if (digits_flag) return *digits_flag;
    if (const char* env = std::getenv(kDigitsEnv); env && *env) {
      const long v = parse_long(env, kDigitsEnv);
      if (v < 1 || v > 100000) throw UsageError(std::string(kDigitsEnv) + " must lie in [1, 100000]");
      return static_cast<int>(v);
    }
    return fallback;
  }
};

Output cmd_pi(const Common& c, std::optional<int> iterations) {
  const int d = c.digits(50);
  const auto ctx = PrecisionContext::for_digits(d);
  Output o;
  o.fields["digits"] = std::to_string(d);
  if (!iterations) {
    o.fields["value"] = agmpi::pi(ctx).to_decimal(d);
    return o;
  }
  if (*iterations < 1 || *iterations > 40) throw UsageError("--iterations must lie in [1, 40]");
  const auto r = agmpi::gauss_legendre_pi(*iterations, ctx);
  o.fields["iterations"] = std::to_string(r.iterations);
  o.fields["value"] = r.value.to_decimal(d);
  o.table_key = "per_iteration";
  o.columns = {"k", "value", "error"};
  for (std::size_t k = 0; k < r.per_iteration_error.size(); ++k)
    o.rows.push_back({std::to_string(k + 1), r.per_iteration_value[k].to_decimal(d),
                      estimate(r.per_iteration_error[k], d)});
  return o;
}

Output cmd_cn(const Common& c, const std::string& n_spec) {
  const auto [lo, hi] = parse_range(n_spec, "--n");
  if (lo < 1) throw UsageError("--n: n must be >= 1");
  if (hi - lo >= 1000) throw UsageError("--n: at most 1000 values per run");
  const int d = c.digits(30);
  const auto ctx = PrecisionContext::for_digits(d + 5);
  const BigReal eps = BigReal::pow10(-(d + 2), 64);
  const auto records = ordered_map(lo, hi, [&](long n) { return ising::c_n(n, ctx, eps); });
  Output o;
  if (lo == hi) {
    o.fields["n"] = std::to_string(lo);
    o.fields["value"] = records[0].value.to_decimal(d);
    o.fields["error_estimate"] = estimate(records[0].error_estimate, d);
    return o;
  }
  o.table_key = "records";
  o.columns = {"n", "value", "error_estimate"};
  for (const auto& r : records)
    o.rows.push_back({std::to_string(r.n), r.value.to_decimal(d), estimate(r.error_estimate, d)});
  return o;
}

Output cmd_cinf(const Common& c) {
  const int d = c.digits(50);
  Output o;
  o.fields["value"] = ising::c_infinity(PrecisionContext::for_digits(d)).to_decimal(d);
  return o;
}

Output cmd_sinc(const Common& c, const std::string& n_spec) {
  const auto [lo, hi] = parse_range(n_spec, "--N");
  if (lo < 1 || hi > sinclab::kMaxN) throw UsageError("--N: N must lie in [1, " + std::to_string(sinclab::kMaxN) + "]");
  const int d = c.digits(30);
  const auto ctx = PrecisionContext::for_digits(d);
  const BigReal eps = BigReal::pow10(-d, 64);
  const auto reports = ordered_map(lo, hi, [&](long n) { return sinclab::sinc_identity(n, eps, ctx); });
  Output o;
  auto row = [&](const sinclab::SincIdentityReport& r) {
    return std::vector<std::string>{std::to_string(r.N),           r.lhs.to_decimal(d),
                                    r.rhs.to_decimal(d),           estimate(r.difference, d),
                                    estimate(r.truncation_bound, d), estimate(r.integral_error, d)};
  };
  const std::vector<std::string> cols{"N", "lhs", "rhs", "difference", "truncation_bound", "integral_error"};
  if (lo == hi) {
    const auto values = row(reports[0]);
    for (std::size_t i = 0; i < cols.size(); ++i) o.fields[cols[i]] = values[i];
    return o;
  }
  o.table_key = "reports";
  o.columns = cols;
  for (const auto& r : reports) o.rows.push_back(row(r));
  return o;
}

Output cmd_threshold(const Common& c, const std::string& value) {
  const int d = c.digits(40);
  const auto ctx = PrecisionContext::for_digits(d);
  long n = 0;
  const auto pi_pos = value.find("pi");
  if (pi_pos != std::string::npos) {
    if (pi_pos + 2 != value.size()) throw UsageError("--value: 'pi' must end the value");
    const std::string k = value.substr(0, pi_pos);
    const BigReal factor = k.empty() ? BigReal(1L, ctx.bits()) : parse_decimal(k, ctx.bits(), "--value");
    n = sinclab::threshold_scan(factor * agmpi::pi(ctx), ctx);
  } else if (value.find('/') != std::string::npos) {
    Rational r;
    try {
      r = Rational::parse(value);
    } catch (const Error&) {
      throw UsageError("--value: '" + value + "' is not a rational p/q");
    }
    n = sinclab::threshold_scan(r, ctx);
  } else {
    n = sinclab::threshold_scan(parse_decimal(value, ctx.bits(), "--value"), ctx);
  }
  Output o;
  o.fields["threshold"] = value;
  o.fields["N"] = std::to_string(n);
  return o;
}

Output cmd_bb(const Common& c, const std::string& problem_name, const std::string& variant_name, double tol,
              long max_iter, bool nonmonotone, bool baseline) {
  const int d = c.digits(17);
  const auto names = bbopt::problem_names();
  if (std::find(names.begin(), names.end(), problem_name) == names.end())
    throw UsageError("--problem: unknown problem '" + problem_name + "'");
  if (variant_name != "bb1" && variant_name != "bb2") throw UsageError("--variant must be bb1 or bb2");
  const auto p = bbopt::problem(problem_name);
  bbopt::SafeguardConfig sg;
  sg.nonmonotone = nonmonotone || p.nonconvex;
  const auto r = bbopt::bb_minimize(p.objective, p.x0, tol, max_iter,
                                    variant_name == "bb1" ? bbopt::Variant::BB1 : bbopt::Variant::BB2, sg);
  Output o;
  o.fields["problem"] = problem_name;
  o.fields["variant"] = variant_name;
  o.fields["nonmonotone"] = sg.nonmonotone;
  o.fields["converged"] = r.converged;
  o.fields["iterations"] = std::to_string(r.iterations);
  o.fields["f"] = real_double(r.f, d);
  Json x = Json::array();
  for (Eigen::Index i = 0; i < r.x.size(); ++i) x.push_back(real_double(r.x[i], d));
  o.fields["x"] = x;
  if (baseline) {
    const auto sd = bbopt::steepest_descent_baseline(p.objective, p.x0, tol, max_iter);
    o.fields["steepest_descent_iterations"] = std::to_string(sd.iterations);
    o.fields["steepest_descent_converged"] = sd.converged;
  }
  o.table_key = "trace";
  o.columns = {"k", "f", "grad_norm", "gamma"};
  for (const auto& t : r.trace)
    o.rows.push_back({std::to_string(t.k), real_double(t.f, d), real_double(t.grad_norm, d), real_double(t.gamma, d)});
  return o;
}

Output cmd_agm(const Common& c, const std::string& a, const std::string& b, bool cubic) {
  const int d = c.digits(50);
  const auto ctx = PrecisionContext::for_digits(d);
  const BigReal x = parse_decimal(a, ctx.bits(), "--a");
  const BigReal y = parse_decimal(b, ctx.bits(), "--b");
  const auto states = cubic ? agmpi::agm3_iterates(x, y, ctx) : agmpi::agm2_iterates(x, y, ctx);
  Output o;
  o.fields["mean"] = cubic ? "agm3" : "agm2";
  o.fields["value"] = (cubic ? agmpi::agm3(x, y, ctx) : agmpi::agm2(x, y, ctx)).to_decimal(d);
  o.fields["iterations"] = std::to_string(states.back().iteration);
  return o;
}

Output cmd_recognize(const Common& c, const std::string& value, const std::string& basis_list) {
  const int d = c.digits(std::max(significant_digits(value), 1));
  const long bits = PrecisionContext::bits_for_digits(d);
  const BigReal v = parse_decimal(value, bits, "--value");
  const auto basis = recognize::parse_basis(basis_list, PrecisionContext::for_digits(d));
  const auto matches = recognize::recognize(v, basis, d);
  Output o;
  o.fields["value"] = v.to_decimal(d);
  o.fields["digits"] = std::to_string(d);
  o.fields["basis"] = basis_list;
  o.table_key = "matches";
  o.columns = {"rendering", "coefficients", "residual", "confidence_digits"};
  for (const auto& m : matches) {
    std::string coeffs;
    for (std::size_t i = 0; i < m.coefficients.size(); ++i)
      coeffs += (i ? " " : "") + std::to_string(m.coefficients[i]);
    o.rows.push_back({m.rendering, coeffs, estimate(m.residual, d), std::to_string(m.confidence_digits)});
  }
  return o;
}

Output cmd_quad(const Common& c, const std::string& name) {
  const int d = c.digits(30);
  const auto ctx = PrecisionContext::for_digits(d);
  const long bits = ctx.bits();
  const BigReal eps = BigReal::pow10(-d, 64);
  const BigReal zero(0L, bits), one(1L, bits);
  const BigReal pi = agmpi::pi(ctx);
  quadrature::IntegralResult r;
  BigReal exact(bits);
  if (name == "gauss") {
    r = quadrature::integrate_semi_infinite([&](const BigReal& x) { return numkernel::exp(-(x * x), ctx); }, zero,
                                            eps, ctx);
    exact = numkernel::sqrt(pi, ctx) / 2;
  } else if (name == "lorentz") {
    r = quadrature::integrate_semi_infinite([&](const BigReal& x) { return 1L / (x * x + 1); }, zero, eps, ctx);
    exact = pi / 2;
  } else if (name == "log") {
    r = quadrature::integrate_finite([&](const BigReal& x) { return -numkernel::ln(x, ctx); }, zero, one, eps, ctx);
    exact = one;
  } else if (name == "semicircle") {
    r = quadrature::integrate_finite([&](const BigReal& x) { return numkernel::sqrt(1L - x * x, ctx); }, zero, one,
                                     eps, ctx);
    exact = pi / 4;
  } else if (name == "tk0") {
    r = quadrature::integrate_semi_infinite(
        [&](const BigReal& t) { return numkernel::exp(numkernel::ln(t, ctx) + numkernel::bessel_k0(t, ctx).log_value, ctx); },
        zero, eps, ctx);
    exact = one;
  } else {
    throw UsageError("--integrand: unknown integrand '" + name + "' (gauss, lorentz, log, semicircle, tk0)");
  }
  Output o;
  o.fields["integrand"] = name;
  o.fields["value"] = r.value.to_decimal(d);
  o.fields["exact"] = exact.to_decimal(d);
  o.fields["error"] = estimate(abs(r.value - exact), d);
  o.fields["error_estimate"] = estimate(r.error_estimate, d);
  o.fields["levels_used"] = std::to_string(r.levels_used);
  o.fields["evaluations"] = std::to_string(r.evaluations);
  o.fields["converged"] = r.converged;
  return o;
}

Output cmd_walk(const std::string& constant, int base, long count, const std::string& path, int size,
                const std::string& color, const std::string& image_format) {
  if (count < 1) throw UsageError("--digits: count must be >= 1");
  if (count > 10'000'000) throw UsageError("--digits: at most 10000000 digits");
  if (color != "progress" && color != "mono") throw UsageError("--color must be progress or mono");
  std::string fmt = image_format;
  if (fmt.empty()) {
    const auto dot = path.rfind('.');
    fmt = dot == std::string::npos ? "" : path.substr(dot + 1);
  }
  if (fmt != "svg" && fmt != "ppm") throw UsageError("--image-format (or the --out extension) must be svg or ppm");
  const auto stream = walks::digits(constant, base, count, walks::context_for(base, count));
  const auto w = walks::walk(stream);
  const std::string bytes = walks::render(w, fmt == "svg" ? walks::ImageFormat::SVG : walks::ImageFormat::PPM, size,
                                          size, color == "mono" ? walks::ColorMode::Mono : walks::ColorMode::Progress);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "' for writing");
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw Error(ErrorKind::InvalidArgument, "failed writing '" + path + "'");
  Output o;
  o.fields["constant"] = constant;
  o.fields["base"] = std::to_string(base);
  o.fields["digits"] = std::to_string(count);
  std::string head;
  for (std::size_t i = 0; i < std::min<std::size_t>(stream.digits.size(), 20); ++i)
    head += "0123456789abcdefghijklmnopqrstuvwxyz"[stream.digits[i]];
  o.fields["leading_digits"] = head;
  o.fields["endpoint"] = std::to_string(w.points.back().first) + "," + std::to_string(w.points.back().second);
  o.fields["out"] = path;
  o.fields["bytes"] = std::to_string(bytes.size());
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Experimental mathematics toolkit", "expmath"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Common common;
  int digits_value = 0;
  auto* digits_opt = app.add_option("--digits", digits_value, "Significant digits (env " + std::string(kDigitsEnv) + ")");
  digits_opt->check(CLI::Range(1, 100000));
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--output", common.output_path, "Write results to this file");

  auto* pi = app.add_subcommand("pi", "Pi by AGM; --iterations gives the Gauss-Legendre table");
  int pi_iterations = 0;
  auto* pi_iter_opt = pi->add_option("--iterations", pi_iterations, "Gauss-Legendre iterations");

  auto* cn = app.add_subcommand("cn", "Bessel moment constants C_n");
  std::string cn_n;
  cn->add_option("--n", cn_n, "n or a range a..b")->required();

  auto* cinf = app.add_subcommand("cinf", "Limit 2 exp(-2 gamma)");

  auto* sinc = app.add_subcommand("sinc", "Sinc sum versus integral");
  std::string sinc_n = "1..6";
  sinc->add_option("--N", sinc_n, "N or a range a..b")->capture_default_str();

  auto* threshold = app.add_subcommand("threshold", "Smallest N with sum 1/(2k+1) over the threshold");
  std::string threshold_value = "2pi";
  threshold->add_option("--value", threshold_value, "Threshold: decimal, p/q, or [k]pi")->capture_default_str();

  auto* bb = app.add_subcommand("bb", "Two-point step-size (BB) minimization");
  std::string bb_problem = "quad", bb_variant = "bb2";
  double bb_tol = 1e-8;
  long bb_max_iter = 100000;
  bool bb_nonmonotone = false, bb_baseline = false;
  bb->add_option("--problem", bb_problem, "isotropic, quad or rosenbrock")->capture_default_str();
  bb->add_option("--variant", bb_variant, "bb1 or bb2")->capture_default_str();
  bb->add_option("--tol", bb_tol, "Gradient norm tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  bb->add_option("--max-iter", bb_max_iter, "Iteration limit")->capture_default_str()->check(CLI::NonNegativeNumber);
  bb->add_flag("--nonmonotone", bb_nonmonotone, "Enable the nonmonotone safeguard");
  bb->add_flag("--baseline", bb_baseline, "Also run steepest descent");

  auto* agm = app.add_subcommand("agm", "Arithmetic-geometric mean");
  std::string agm_a = "1", agm_b = "0.5";
  bool agm_cubic = false;
  agm->add_option("--a", agm_a, "First argument")->capture_default_str();
  agm->add_option("--b", agm_b, "Second argument")->capture_default_str();
  agm->add_flag("--cubic", agm_cubic, "Cubic mean instead of the classical one");

  auto* rec = app.add_subcommand("recognize", "Integer-relation recognition against a basis");
  std::string rec_value, rec_basis = "gamma,zeta3,pi2,one";
  rec->add_option("--value", rec_value, "Decimal value")->required();
  rec->add_option("--basis", rec_basis, "Comma-separated basis names")->capture_default_str();

  auto* quad = app.add_subcommand("quad", "Tanh-sinh quadrature of a bundled integrand");
  std::string quad_name = "gauss";
  quad->add_option("--integrand", quad_name, "gauss, lorentz, log, semicircle or tk0")->capture_default_str();

  auto* walk = app.add_subcommand("walk", "Digit walk image");
  std::string walk_constant = "pi", walk_out, walk_color = "progress", walk_format;
  int walk_base = 4, walk_size = 1024;
  long walk_digits = 10000;
  walk->add_option("--constant", walk_constant, "pi, e, champernowne or champernowne-<b>")->capture_default_str();
  walk->add_option("--base", walk_base, "Digit base")->capture_default_str();
  walk->add_option("--out", walk_out, "Image path (.svg or .ppm)")->required();
  walk->add_option("--size", walk_size, "Image width and height")->capture_default_str();
  walk->add_option("--color", walk_color, "progress or mono")->capture_default_str();
  walk->add_option("--image-format", walk_format, "svg or ppm (default: from --out)");

  // Within walk, --digits is the digit count, not the precision.
  auto* walk_digits_opt = walk->add_option("--digits", walk_digits, "Number of digits")->capture_default_str();

  std::vector<std::string> argv_store{"expmath"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  (void)walk_digits_opt;
  if (digits_opt->count() > 0) common.digits_flag = digits_value;

  try {
    Output o;
    if (*pi) {
      o = cmd_pi(common, pi_iter_opt->count() ? std::optional<int>(pi_iterations) : std::nullopt);
    } else if (*cn) {
      o = cmd_cn(common, cn_n);
    } else if (*cinf) {
      o = cmd_cinf(common);
    } else if (*sinc) {
      o = cmd_sinc(common, sinc_n);
    } else if (*threshold) {
      o = cmd_threshold(common, threshold_value);
    } else if (*bb) {
      o = cmd_bb(common, bb_problem, bb_variant, bb_tol, bb_max_iter, bb_nonmonotone, bb_baseline);
    } else if (*agm) {
      o = cmd_agm(common, agm_a, agm_b, agm_cubic);
    } else if (*rec) {
      o = cmd_recognize(common, rec_value, rec_basis);
    } else if (*quad) {
      o = cmd_quad(common, quad_name);
    } else if (*walk) {
      o = cmd_walk(walk_constant, walk_base, walk_digits, walk_out, walk_size, walk_color, walk_format);
    }
    if (common.output_path.empty()) {
      emit(o, common.format, out);
    } else {
      std::ofstream file(common.output_path);
      if (!file) throw Error(ErrorKind::InvalidArgument, "cannot open '" + common.output_path + "' for writing");
      emit(o, common.format, file);
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidArgument ? kUsage : kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace expmath::cli
