#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace cloudcost {

namespace detail {

__extension__ using int128 = __int128;
__extension__ using uint128 = unsigned __int128;

// Divide with round-half-to-even. `divisor` must be positive.
std::int64_t divide_half_even(int128 numerator, std::int64_t divisor);

// Parses an optionally signed decimal literal ("12", "-0.5", "3.141592") into
// millionths. More than six fractional digits is rejected, not rounded.
std::int64_t parse_micros(std::string_view text);

std::string format_micros(std::int64_t micros, int decimals);

}  // namespace detail

// Exact decimal with six fractional digits. Tag keeps amounts and quantities
// from being mixed by accident.
template <typename Tag>
class FixedDecimal {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr FixedDecimal() = default;

  static constexpr FixedDecimal from_micros(std::int64_t micros) { return FixedDecimal(micros); }
  static constexpr FixedDecimal from_units(std::int64_t units) { return FixedDecimal(units * kScale); }
  static FixedDecimal parse(std::string_view text) { return FixedDecimal(detail::parse_micros(text)); }

  // Nearest representable value, ties to even. Throws std::overflow_error for
  // values that do not fit and std::invalid_argument for nan.
  static FixedDecimal from_double(double value);

  constexpr std::int64_t micros() const { return micros_; }
  double to_double() const { return static_cast<double>(micros_) / kScale; }

  // Rendered with `decimals` digits (0..6), rounding half-even.
  std::string to_string(int decimals = 2) const { return detail::format_micros(micros_, decimals); }
  // All six digits, trailing zeros trimmed.
  std::string to_plain_string() const;

  FixedDecimal rounded(int decimals) const;
  FixedDecimal divided_by(std::int64_t divisor) const {
    return FixedDecimal(detail::divide_half_even(micros_, divisor));
  }

  constexpr FixedDecimal& operator+=(FixedDecimal other) {
    micros_ += other.micros_;
    return *this;
  }
  constexpr FixedDecimal& operator-=(FixedDecimal other) {
    micros_ -= other.micros_;
    return *this;
  }
  friend constexpr FixedDecimal operator+(FixedDecimal a, FixedDecimal b) { return a += b; }
  friend constexpr FixedDecimal operator-(FixedDecimal a, FixedDecimal b) { return a -= b; }
  friend constexpr FixedDecimal operator-(FixedDecimal a) { return FixedDecimal(-a.micros_); }
  friend constexpr FixedDecimal operator*(FixedDecimal a, std::int64_t k) { return FixedDecimal(a.micros_ * k); }
  friend constexpr FixedDecimal operator*(std::int64_t k, FixedDecimal a) { return a * k; }

  friend constexpr bool operator==(FixedDecimal, FixedDecimal) = default;
  friend constexpr auto operator<=>(FixedDecimal, FixedDecimal) = default;

 private:
  constexpr explicit FixedDecimal(std::int64_t micros) : micros_(micros) {}

  std::int64_t micros_ = 0;
};

struct MoneyTag {};
struct QuantityTag {};

// Currency amount; the currency itself lives on the catalog.
using Money = FixedDecimal<MoneyTag>;
// Billable usage quantity in the unit of its dimension.
using Quantity = FixedDecimal<QuantityTag>;

// unit_price × quantity, exact product rounded half-even to six digits.
Money operator*(Money unit_price, Quantity quantity);
inline Money operator*(Quantity quantity, Money unit_price) { return unit_price * quantity; }

extern template class FixedDecimal<MoneyTag>;
extern template class FixedDecimal<QuantityTag>;

}  // namespace cloudcost
