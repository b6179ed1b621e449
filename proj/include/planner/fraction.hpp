#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace planner {

/**
 * Exact non-negative-biased rational arithmetic with a dedicated infinity.
 *
 * Invariants:
 *  - finite values are stored fully reduced with denominator > 0;
 *  - infinity is stored canonically as 1/0, so defaulted equality works;
 *  - intermediate products are evaluated in 128-bit and narrowing back to
 *    64-bit throws std::overflow_error instead of wrapping silently.
 *
 * Infinity follows saturation semantics (inf + x = inf, inf * x = inf for
 * x > 0) with the planning-specific convention inf * 0 = 0, which keeps
 * "unreachable times never used" from poisoning sums.  Operations whose
 * result would be indeterminate (inf - inf, finite - inf, 0/0) throw
 * std::domain_error.
 */
class Fraction {
 public:
  constexpr Fraction() : num_(0), den_(1) {}
  constexpr Fraction(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design

  Fraction(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) {
      if (numerator <= 0) {
        throw std::domain_error("Fraction: n/0 with n <= 0 is indeterminate");
      }
      num_ = 1;
      den_ = 0;
      return;
    }
    if (denominator < 0) {
      numerator = -numerator;
      denominator = -denominator;
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    num_ = numerator / g;
    den_ = denominator / g;
  }

  static constexpr Fraction infinity() {
    Fraction f;
    f.num_ = 1;
    f.den_ = 0;
    return f;
  }

  [[nodiscard]] constexpr std::int64_t numerator() const { return num_; }
  [[nodiscard]] constexpr std::int64_t denominator() const { return den_; }
  [[nodiscard]] constexpr bool is_infinite() const { return den_ == 0; }
  [[nodiscard]] constexpr bool is_zero() const { return num_ == 0 && den_ != 0; }
  [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }

  friend bool operator==(const Fraction&, const Fraction&) = default;

  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    if (a.is_infinite() || b.is_infinite()) {
      return (a.is_infinite() ? 1 : 0) <=> (b.is_infinite() ? 1 : 0);
    }
    const Int128 lhs = Int128(a.num_) * b.den_;
    const Int128 rhs = Int128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const Int128 num = Int128(a.num_) * (b.den_ / g) + Int128(b.num_) * (a.den_ / g);
    const Int128 den = Int128(a.den_) * (b.den_ / g);
    return from_128(num, den);
  }

  friend Fraction operator-(const Fraction& a, const Fraction& b) {
    if (b.is_infinite()) {
      throw std::domain_error("Fraction: subtracting infinity");
    }
    if (a.is_infinite()) return infinity();
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const Int128 num = Int128(a.num_) * (b.den_ / g) - Int128(b.num_) * (a.den_ / g);
    const Int128 den = Int128(a.den_) * (b.den_ / g);
    return from_128(num, den);
  }

  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    if (a.is_infinite() || b.is_infinite()) {
      if (a.is_zero() || b.is_zero()) return Fraction(0);
      if ((a.is_infinite() ? b.num_ : a.num_) < 0) {
        throw std::domain_error("Fraction: infinity times negative value");
      }
      return infinity();
    }
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const Int128 num = Int128(a.num_ / g1) * (b.num_ / g2);
    const Int128 den = Int128(a.den_ / g2) * (b.den_ / g1);
    return from_128(num, den);
  }

  friend Fraction operator/(const Fraction& a, const Fraction& b) {
    if (b.is_infinite()) {
      if (a.is_infinite()) throw std::domain_error("Fraction: infinity / infinity");
      return Fraction(0);
    }
    if (b.is_zero()) {
      if (a.is_zero()) throw std::domain_error("Fraction: 0 / 0");
      if (a.num_ < 0) throw std::domain_error("Fraction: negative / 0");
      return infinity();
    }
    if (a.is_infinite()) {
      if (b.num_ < 0) throw std::domain_error("Fraction: infinity / negative value");
      return infinity();
    }
    const std::int64_t g1 = std::gcd(a.num_, b.num_);
    const std::int64_t g2 = std::gcd(b.den_, a.den_);
    Int128 num = Int128(a.num_ / g1) * (b.den_ / g2);
    Int128 den = Int128(a.den_ / g2) * (b.num_ / g1);
    return from_128(num, den);
  }

  Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
  Fraction& operator-=(const Fraction& o) { return *this = *this - o; }
  Fraction& operator*=(const Fraction& o) { return *this = *this * o; }
  Fraction& operator/=(const Fraction& o) { return *this = *this / o; }

  friend Fraction operator-(const Fraction& a) {
    if (a.is_infinite()) throw std::domain_error("Fraction: negating infinity");
    Fraction r;
    r.num_ = -a.num_;
    r.den_ = a.den_;
    return r;
  }

  /** Smallest integer >= *this; throws on infinity. */
  [[nodiscard]] std::int64_t ceil_to_integer() const {
    if (is_infinite()) throw std::domain_error("Fraction: ceil of infinity");
    if (num_ >= 0) return (num_ + den_ - 1) / den_;
    return num_ / den_;  // trunc toward zero == ceil for negatives
  }

  /** Largest integer <= *this; throws on infinity. */
  [[nodiscard]] std::int64_t floor_to_integer() const {
    if (is_infinite()) throw std::domain_error("Fraction: floor of infinity");
    if (num_ >= 0) return num_ / den_;
    return -((-num_ + den_ - 1) / den_);
  }

  /** "inf", "3", or "7/5". */
  [[nodiscard]] std::string str() const {
    if (is_infinite()) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.str(); }

 private:
  using Int128 = __int128;

  static Fraction from_128(Int128 num, Int128 den) {
    if (den == 0) {
      if (num <= 0) throw std::domain_error("Fraction: n/0 with n <= 0 is indeterminate");
      Fraction f;
      f.num_ = 1;
      f.den_ = 0;
      return f;
    }
    if (den < 0) {
      num = -num;
      den = -den;
    }
    Int128 a = num < 0 ? -num : num;
    Int128 b = den;
    while (b != 0) {
      const Int128 t = a % b;
      a = b;
      b = t;
    }
    if (a != 0) {
      num /= a;
      den /= a;
    }
    constexpr Int128 kMax = INT64_MAX;
    constexpr Int128 kMin = INT64_MIN;
    if (num > kMax || num < kMin || den > kMax) {
      throw std::overflow_error("Fraction: result exceeds 64-bit range");
    }
    Fraction f;
    f.num_ = static_cast<std::int64_t>(num);
    f.den_ = static_cast<std::int64_t>(den);
    return f;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace planner
