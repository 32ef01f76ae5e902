#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expmath/bigreal.hpp"

namespace expmath::recognize {

struct BasisConstant {
  std::string name;    // lookup key, e.g. "zeta3"
  BigReal value;
  std::string render;  // e.g. "ζ(3)"
};

/// Known keys: one, gamma, expm2gamma (e^(-2 gamma)), zeta3, pi, pi2, ln2.
std::vector<std::string> basis_names();
/// Computes the named constant at ctx from numkernel / agmpi.
BasisConstant basis_constant(const std::string& name, const PrecisionContext& ctx);
/// Parses a comma-separated list of names.
std::vector<BasisConstant> parse_basis(const std::string& list, const PrecisionContext& ctx);

struct RelationOptions {
  std::int64_t coefficient_cap = 1'000'000;
  /// A relation must leave a residual below 10^-(digits - safety_digits).
  int safety_digits = 15;
  long max_iterations = 20000;
};

/// PSLQ integer-relation search. Returns m with |sum m_i v_i| / max|v_i| <
/// 10^-(digits - safety) and max |m_i| <= cap, normalized so that the first
/// nonzero entry is positive and gcd(m) = 1; nullopt when the norm bound
/// certifies that no relation within the cap exists.
/// Throws InsufficientPrecision if a value carries fewer than
/// precision_digits digits, if (n - 1) log10(cap) >= digits - safety, or
/// if the iteration uses up the available
/// digits before reaching a verdict.
std::optional<std::vector<std::int64_t>> find_integer_relation(std::span<const BigReal> values, int precision_digits,
                                                               const RelationOptions& options = {});

struct RecognitionMatch {
  /// Relation over (value, basis...) as found; the value's coefficient is
  /// nonzero.
  std::vector<std::int64_t> coefficients;
  BigReal residual;
  int confidence_digits = 0;  // residual < 10^-confidence_digits
  std::string rendering;      // value as a rational combination, e.g. "2·e^(−2γ)"
};

/// Searches every nonempty subset of the basis for a relation involving the
/// value. Matches are sorted by residual, then by coefficient norm.
std::vector<RecognitionMatch> recognize(const BigReal& value, const std::vector<BasisConstant>& basis,
                                        int precision_digits, const RelationOptions& options = {});

/// 4 pi^2 / 9 - 7 zeta(3) / 2 - 1/6, recomputed with wider guard digits while
/// the cancellation between its terms eats into the guard.
BigReal d4_closed_form(const PrecisionContext& ctx);

}  // namespace expmath::recognize
