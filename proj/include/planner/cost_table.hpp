#pragma once

/** Saturating integer cost arithmetic used by the lookup databases.  Exact
    rational tables stay authoritative; when every entry shares a modest
    common denominator the databases also keep a scaled int64 copy so that
    per-state evaluations avoid rational arithmetic entirely. */

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>

#include "planner/fraction.hpp"

namespace planner::detail {

/** Integer stand-in for an infinite cost; additions saturate to it. */
constexpr std::int64_t kInfCost = std::numeric_limits<std::int64_t>::max();

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a == kInfCost || b == kInfCost) return kInfCost;
  std::int64_t result = 0;
  if (__builtin_add_overflow(a, b, &result)) return kInfCost;
  return result;
}

/** Fold another denominator into a running least common multiple; fails when
    the result would exceed `cap`. */
inline bool lcm_accumulate(std::int64_t& acc, std::int64_t denominator, std::int64_t cap) {
  const std::int64_t step = denominator / std::gcd(acc, denominator);
  if (step != 0 && acc > cap / step) return false;
  acc *= step;
  return true;
}

/** f * scale as an integer, or nullopt when it would not fit comfortably. */
inline std::optional<std::int64_t> scale_cost(const Fraction& f, std::int64_t scale) {
  if (f.is_infinite()) return kInfCost;
  const std::int64_t factor = scale / f.denominator();
  const std::int64_t magnitude = std::abs(f.numerator());
  if (magnitude != 0 && factor > kInfCost / 8 / magnitude) return std::nullopt;
  return f.numerator() * factor;
}

}  // namespace planner::detail
