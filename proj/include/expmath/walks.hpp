#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "expmath/bigreal.hpp"

namespace expmath::walks {

/// Constant identifiers: "pi", "e", "champernowne" (in the stream's base) or
/// "champernowne-<b>" (b must equal the requested base).
struct DigitStream {
  std::string constant;
  int base = 10;
  std::vector<int> digits;  // each in [0, base)
};

/// Bits a context needs for `count` digits in `base`: count log2(base) + 64.
long required_bits(int base, long count);
/// Smallest default-guard context meeting required_bits(base, count).
PrecisionContext context_for(int base, long count);

/// First `count` digits of the constant, integer part first. Fractional
/// digits are floor(frac(x) b^k) expanded in base b, which equals repeated
/// multiply-and-floor. Champernowne's number is built by concatenating the
/// base-b expansions of 1, 2, 3, ... (no integer part, no rounding).
/// Throws InvalidArgument for a base outside [2, 36] or an unknown constant,
/// InsufficientPrecision when ctx.bits() < required_bits(base, count) (not
/// checked for Champernowne, which is exact).
DigitStream digits(const std::string& constant, int base, long count, const PrecisionContext& ctx);

using Point = std::pair<long, long>;
using Mapping = std::array<Point, 4>;

/// 0 -> E, 1 -> N, 2 -> W, 3 -> S.
constexpr Mapping kDefaultMapping{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

struct WalkPath {
  std::vector<Point> points;  // starts at (0, 0); one more than the digit count
  Mapping mapping = kDefaultMapping;
};

/// Digit d steps in direction mapping[d mod 4]. Throws EmptyStream.
WalkPath walk(const DigitStream& stream, const Mapping& mapping = kDefaultMapping);

enum class ImageFormat { PPM, SVG };
enum class ColorMode { Mono, Progress };

/// Image bytes. PPM: binary P6 with header "P6\n<w> <h>\n255\n", white
/// background, path drawn as connected unit segments. SVG: one polyline
/// whose viewBox is the path's bounding box grown by 5% per side (y axis
/// flipped so that north is up). Progress mode colours by step index (hue
/// ramp in PPM, linear gradient in SVG). Output depends only on the inputs.
/// Throws EmptyStream for an empty path, SizeTooSmall below 16 x 16.
std::string render(const WalkPath& path, ImageFormat format, int width, int height,
                   ColorMode color = ColorMode::Progress);

}  // namespace expmath::walks
