#include "expmath/walks.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "expmath/agmpi.hpp"
#include "expmath/errors.hpp"
#include "expmath/numkernel.hpp"

namespace expmath::walks {

namespace {

class Mpz {
 public:
  Mpz() { mpz_init(v_); }
  ~Mpz() { mpz_clear(v_); }
  Mpz(const Mpz&) = delete;
  Mpz& operator=(const Mpz&) = delete;
  mpz_ptr get() { return v_; }

 private:
  mpz_t v_;
};

int digit_value(char c) { return c <= '9' ? c - '0' : c - 'a' + 10; }

// Base-b digits of a nonnegative integer, padded with leading zeros to `width`.
std::vector<int> integer_digits(Mpz& z, int base, std::size_t width = 0) {
  std::vector<char> buf(mpz_sizeinbase(z.get(), base) + 2);
  mpz_get_str(buf.data(), base, z.get());
  std::vector<int> out;
  for (const char* p = buf.data(); *p; ++p) out.push_back(digit_value(*p));
  if (out.size() == 1 && out[0] == 0 && width > 0) out.clear();
  if (out.size() < width) out.insert(out.begin(), width - out.size(), 0);
  return out;
}

std::vector<int> champernowne_digits(int base, long count) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count));
  for (unsigned long k = 1; static_cast<long>(out.size()) < count; ++k) {
    std::vector<int> block;
    for (unsigned long v = k; v > 0; v /= static_cast<unsigned long>(base))
      block.push_back(static_cast<int>(v % static_cast<unsigned long>(base)));
    for (auto it = block.rbegin(); it != block.rend() && static_cast<long>(out.size()) < count; ++it)
      out.push_back(*it);
  }
  return out;
}

std::vector<int> real_digits(const BigReal& x, int base, long count) {
  const long bits = x.computed_at_bits();
  Mpz whole;
  mpfr_get_z(whole.get(), x.get(), MPFR_RNDD);
  std::vector<int> out = integer_digits(whole, base);
  if (static_cast<long>(out.size()) >= count) {
    out.resize(static_cast<std::size_t>(count));
    return out;
  }
  const long frac_count = count - static_cast<long>(out.size());

  BigReal frac(bits);
  mpfr_sub_z(frac.get(), x.get(), whole.get(), MPFR_RNDN);
  Mpz scale;
  mpz_ui_pow_ui(scale.get(), static_cast<unsigned long>(base), static_cast<unsigned long>(frac_count));
  mpfr_mul_z(frac.get(), frac.get(), scale.get(), MPFR_RNDN);
  Mpz scaled;
  mpfr_get_z(scaled.get(), frac.get(), MPFR_RNDD);
  const auto tail = integer_digits(scaled, base, static_cast<std::size_t>(frac_count));
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

}  // namespace

long required_bits(int base, long count) {
  return static_cast<long>(std::ceil(static_cast<double>(count) * std::log2(static_cast<double>(base)))) + 64;
}

PrecisionContext context_for(int base, long count) {
  const long bits = required_bits(base, count);
  int decimal = static_cast<int>(std::ceil(static_cast<double>(bits) * std::log10(2.0)));
  PrecisionContext ctx = PrecisionContext::for_digits(std::max(decimal, 1));
  return ctx.bits() >= bits ? ctx : ctx.with_extra_bits(bits - ctx.bits());
}

DigitStream digits(const std::string& constant, int base, long count, const PrecisionContext& ctx) {
  if (base < 2 || base > 36) throw Error(ErrorKind::InvalidArgument, "base must lie in [2, 36]");
  if (count < 0) throw Error(ErrorKind::InvalidArgument, "digit count must be >= 0");
  DigitStream out{constant, base, {}};
  if (constant == "champernowne" || constant.rfind("champernowne-", 0) == 0) {
    if (constant != "champernowne") {
      const std::string suffix = constant.substr(13);
      int named = 0;
      const auto [ptr, ec] = std::from_chars(suffix.data(), suffix.data() + suffix.size(), named);
      if (ec != std::errc() || ptr != suffix.data() + suffix.size() || named != base)
        throw Error(ErrorKind::InvalidArgument, "'" + constant + "' does not match base " + std::to_string(base));
    }
    out.digits = champernowne_digits(base, count);
    return out;
  }
  if (constant != "pi" && constant != "e") throw Error(ErrorKind::InvalidArgument, "unknown constant '" + constant + "'");
  if (ctx.bits() < required_bits(base, count))
    throw Error(ErrorKind::InsufficientPrecision, std::to_string(count) + " base-" + std::to_string(base) +
                                                      " digits need " + std::to_string(required_bits(base, count)) +
                                                      " bits, context has " + std::to_string(ctx.bits()));
  const BigReal x = constant == "pi" ? agmpi::pi(ctx) : numkernel::exp(BigReal(1L, ctx.bits()), ctx);
  out.digits = real_digits(x, base, count);
  return out;
}

WalkPath walk(const DigitStream& stream, const Mapping& mapping) {
  if (stream.digits.empty()) throw Error(ErrorKind::EmptyStream, "digit stream is empty");
  WalkPath path;
  path.mapping = mapping;
  path.points.reserve(stream.digits.size() + 1);
  Point p{0, 0};
  path.points.push_back(p);
  for (int d : stream.digits) {
    if (d < 0 || d >= stream.base) throw Error(ErrorKind::InvalidArgument, "digit outside [0, base)");
    const Point step = mapping[static_cast<std::size_t>(d % 4)];
    p.first += step.first;
    p.second += step.second;
    path.points.push_back(p);
  }
  return path;
}

namespace {

struct Rgb {
  unsigned char r, g, b;
};

// Hue in [0, 270] degrees at full saturation and value; red through violet.
Rgb hue_color(double t) {
  const double h = std::clamp(t, 0.0, 1.0) * 270.0 / 60.0;
  const int sector = std::min(static_cast<int>(h), 5);
  const double f = h - sector;
  const auto up = static_cast<unsigned char>(std::lround(255.0 * f));
  const auto down = static_cast<unsigned char>(std::lround(255.0 * (1.0 - f)));
  switch (sector) {
    case 0: return {255, up, 0};
    case 1: return {down, 255, 0};
    case 2: return {0, 255, up};
    case 3: return {0, down, 255};
    case 4: return {up, 0, 255};
    default: return {255, 0, down};
  }
}

struct Bounds {
  long min_x, max_x, min_y, max_y;
  long span_x() const { return std::max(max_x - min_x, 1L); }
  long span_y() const { return std::max(max_y - min_y, 1L); }
};

Bounds bounds_of(const std::vector<Point>& pts) {
  Bounds b{pts[0].first, pts[0].first, pts[0].second, pts[0].second};
  for (const auto& [x, y] : pts) {
    b.min_x = std::min(b.min_x, x);
    b.max_x = std::max(b.max_x, x);
    b.min_y = std::min(b.min_y, y);
    b.max_y = std::max(b.max_y, y);
  }
  return b;
}

std::string render_ppm(const WalkPath& path, int width, int height, ColorMode color) {
  const Bounds b = bounds_of(path.points);
  const double ex = static_cast<double>(b.span_x()) * 1.1;
  const double ey = static_cast<double>(b.span_y()) * 1.1;
  const double s = std::min((width - 1) / ex, (height - 1) / ey);
  const double off_x = (width - 1 - s * static_cast<double>(b.max_x - b.min_x)) / 2.0;
  const double off_y = (height - 1 - s * static_cast<double>(b.max_y - b.min_y)) / 2.0;
  auto pixel = [&](const Point& p) {
    return std::pair<long, long>{std::lround(off_x + static_cast<double>(p.first - b.min_x) * s),
                                 std::lround(off_y + static_cast<double>(b.max_y - p.second) * s)};
  };

  std::vector<unsigned char> img(static_cast<std::size_t>(width) * height * 3, 255);
  auto plot = [&](long x, long y, Rgb c) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    const std::size_t i = (static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)) * 3;
    img[i] = c.r;
    img[i + 1] = c.g;
    img[i + 2] = c.b;
  };
  const std::size_t segments = path.points.size() - 1;
  if (segments == 0) {
    const auto [x, y] = pixel(path.points[0]);
    plot(x, y, Rgb{0, 0, 0});
  }
  for (std::size_t i = 0; i < segments; ++i) {
    const Rgb c = color == ColorMode::Mono
                      ? Rgb{0, 0, 0}
                      : hue_color(segments > 1 ? static_cast<double>(i) / static_cast<double>(segments - 1) : 0.0);
    auto [x0, y0] = pixel(path.points[i]);
    const auto [x1, y1] = pixel(path.points[i + 1]);
    // Bresenham.
    const long dx = std::labs(x1 - x0), dy = -std::labs(y1 - y0);
    const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    long err = dx + dy;
    while (true) {
      plot(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const long e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.data()), img.size());
  return out;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

std::string render_svg(const WalkPath& path, int width, int height, ColorMode color) {
  const Bounds b = bounds_of(path.points);
  const double mx = 0.05 * static_cast<double>(b.span_x());
  const double my = 0.05 * static_cast<double>(b.span_y());
  // SVG y grows downward; lattice y is negated.
  const double vx = static_cast<double>(b.min_x) - mx;
  const double vy = static_cast<double>(-b.max_y) - my;
  const double vw = static_cast<double>(b.span_x()) + 2 * mx;
  const double vh = static_cast<double>(b.span_y()) + 2 * my;

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"" + fixed2(vx) + " " + fixed2(vy) + " " + fixed2(vw) + " " +
         fixed2(vh) + "\">\n";
  std::string stroke = "#000000";
  if (color == ColorMode::Progress) {
    const Point& first = path.points.front();
    Point last = path.points.back();
    if (last == first) last.first += 1;
    out += "<defs>\n<linearGradient id=\"progress\" gradientUnits=\"userSpaceOnUse\" x1=\"" +
           std::to_string(first.first) + "\" y1=\"" + std::to_string(-first.second) + "\" x2=\"" +
           std::to_string(last.first) + "\" y2=\"" + std::to_string(-last.second) + "\">\n";
    for (int k = 0; k <= 6; ++k) {
      const double t = k / 6.0;
      out += "<stop offset=\"" + fixed2(t) + "\" stop-color=\"" + hex(hue_color(t)) + "\"/>\n";
    }
    out += "</linearGradient>\n</defs>\n";
    stroke = "url(#progress)";
  }
  out += "<polyline fill=\"none\" stroke=\"" + stroke +
         "\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\" stroke-linejoin=\"round\" points=\"";
  char buf[24];
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    if (i > 0) out += ' ';
    out.append(buf, std::to_chars(buf, buf + sizeof buf, path.points[i].first).ptr);
    out += ',';
    out.append(buf, std::to_chars(buf, buf + sizeof buf, -path.points[i].second).ptr);
  }
  out += "\"/>\n</svg>\n";
  return out;
}

}  // namespace

std::string render(const WalkPath& path, ImageFormat format, int width, int height, ColorMode color) {
  if (path.points.empty()) throw Error(ErrorKind::EmptyStream, "path is empty");
  if (width < 16 || height < 16) throw Error(ErrorKind::SizeTooSmall, "image must be at least 16 x 16");
  return format == ImageFormat::PPM ? render_ppm(path, width, height, color) : render_svg(path, width, height, color);
}

}  // namespace expmath::walks
