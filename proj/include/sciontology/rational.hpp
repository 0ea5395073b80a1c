#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sciontology {

/// Exact rational number with a positive, reduced denominator. Rubric scores
/// and averages are carried as rationals so that endorsement decisions never
/// depend on floating-point rounding.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t integer) : num_(integer) {}  // NOLINT: implicit by intent
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "9/2", or "5" when the value is an integer.
  std::string to_string() const;

  /// Half-up rounding to two decimals, e.g. 53/12 -> "4.42".
  std::string to_fixed2() const;

  /// True when the value is an integer multiple of 1/2.
  bool is_half_step() const noexcept { return den_ == 1 || den_ == 2; }

  /// Accepts "n/d", "n" or a plain decimal such as "4.5". Throws InvalidArgument.
  static Rational parse(std::string_view text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace sciontology
