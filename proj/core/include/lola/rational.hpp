#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lola {

/// Thrown when an exact rational result does not fit in 64-bit numerator or
/// denominator.
class RationalOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Exact rational number with a 64-bit numerator and a positive 64-bit
/// denominator, always kept in lowest terms. Intermediate products use
/// 128-bit arithmetic, so results are exact or the operation throws.
///
/// Used for frequencies, durations and timestamps so that divisibility and
/// deadline comparisons never depend on floating-point rounding.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den);

  static Rational from_parts(__int128 num, __int128 den);

  /// Parses `[-]digits[.digits][e[+-]digits]` exactly; either side of the
  /// point may be empty (`1.`, `.5`) but not both. Returns nullopt on
  /// malformed text or overflow.
  static std::optional<Rational> parse_decimal(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  bool is_positive() const { return num_ > 0; }
  bool is_negative() const { return num_ < 0; }

  /// Largest integer <= value.
  std::int64_t floor() const;

  double to_double() const;

  /// Exact decimal if the denominator has only factors 2 and 5, otherwise
  /// rounded half-up to `max_fraction_digits` places. Integers always print
  /// with a trailing `.0`.
  std::string to_decimal(int max_fraction_digits = 9) const;

  /// Exact `num/den`, or just `num` for integers.
  std::string to_fraction() const;

  Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                         const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// gcd(a/b, c/d) = gcd(a, c) / lcm(b, d); both arguments must be positive.
Rational rational_gcd(const Rational& a, const Rational& b);
/// lcm(a/b, c/d) = lcm(a, c) / gcd(b, d); both arguments must be positive.
Rational rational_lcm(const Rational& a, const Rational& b);

}  // namespace lola
