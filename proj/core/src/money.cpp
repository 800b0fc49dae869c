#include "cloudcost/money.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cloudcost {

namespace detail {

namespace {

std::int64_t checked_narrow(detail::int128 value) {
  if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("decimal value out of range");
  }
  return static_cast<std::int64_t>(value);
}

constexpr std::int64_t kPow10[] = {1, 10, 100, 1000, 10000, 100000, 1000000};

}  // namespace

std::int64_t divide_half_even(detail::int128 numerator, std::int64_t divisor) {
  if (divisor <= 0) throw std::invalid_argument("divisor must be positive");
  detail::int128 quotient = numerator / divisor;
  detail::int128 remainder = numerator % divisor;
  if (remainder < 0) {
    remainder += divisor;
    quotient -= 1;
  }
  // quotient is now floor(numerator / divisor) and 0 <= remainder < divisor.
  const detail::int128 twice = remainder * 2;
  if (twice > divisor || (twice == divisor && (quotient % 2 != 0))) quotient += 1;
  return checked_narrow(quotient);
}

std::int64_t parse_micros(std::string_view text) {
  const std::string_view original = text;
  auto fail = [&](const char* why) {
    throw std::invalid_argument("invalid decimal '" + std::string(original) + "': " + why);
  };
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) fail("no digits");
  detail::int128 whole = 0;
  std::size_t i = 0;
  std::size_t int_digits = 0;
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (text[i] < '0' || text[i] > '9') fail("unexpected character");
    whole = whole * 10 + (text[i] - '0');
    if (whole > std::numeric_limits<std::int64_t>::max()) fail("too large");
    ++int_digits;
  }
  std::int64_t fraction = 0;
  std::size_t frac_digits = 0;
  if (i < text.size()) {
    ++i;  // '.'
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') fail("unexpected character");
      if (++frac_digits > 6) fail("more than six fractional digits");
      fraction = fraction * 10 + (text[i] - '0');
    }
    if (frac_digits == 0) fail("no digits after decimal point");
  }
  if (int_digits == 0 && frac_digits == 0) fail("no digits");
  const detail::int128 micros = whole * 1'000'000 + fraction * kPow10[6 - frac_digits];
  try {
    return checked_narrow(negative ? -micros : micros);
  } catch (const std::overflow_error&) {
    fail("too large");
  }
  return 0;
}

std::string format_micros(std::int64_t micros, int decimals) {
  if (decimals < 0 || decimals > 6) throw std::invalid_argument("decimals must be in 0..6");
  const std::int64_t step = kPow10[6 - decimals];
  const std::int64_t scaled = divide_half_even(micros, step);
  const bool negative = scaled < 0;
  const detail::uint128 magnitude = negative ? -static_cast<detail::int128>(scaled) : scaled;
  const auto unit = static_cast<detail::uint128>(kPow10[decimals]);
  std::string whole = std::to_string(static_cast<unsigned long long>(magnitude / unit));
  std::string out = negative ? "-" + whole : whole;
  if (decimals > 0) {
    std::string frac = std::to_string(static_cast<unsigned long long>(magnitude % unit));
    out += '.';
    out.append(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

}  // namespace detail

template <typename Tag>
FixedDecimal<Tag> FixedDecimal<Tag>::from_double(double value) {
  if (std::isnan(value)) throw std::invalid_argument("decimal from nan");
  const double scaled = value * static_cast<double>(kScale);
  if (!(std::fabs(scaled) < 9.2e18)) throw std::overflow_error("decimal value out of range");
  // nearbyint honours the default round-to-nearest-even mode.
  return FixedDecimal(static_cast<std::int64_t>(std::nearbyint(scaled)));
}

template <typename Tag>
std::string FixedDecimal<Tag>::to_plain_string() const {
  std::string s = detail::format_micros(micros_, 6);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

template <typename Tag>
FixedDecimal<Tag> FixedDecimal<Tag>::rounded(int decimals) const {
  if (decimals < 0 || decimals > 6) throw std::invalid_argument("decimals must be in 0..6");
  const std::int64_t step = detail::kPow10[6 - decimals];
  return FixedDecimal(detail::divide_half_even(micros_, step) * step);
}

template class FixedDecimal<MoneyTag>;
template class FixedDecimal<QuantityTag>;

Money operator*(Money unit_price, Quantity quantity) {
  const detail::int128 product = static_cast<detail::int128>(unit_price.micros()) * quantity.micros();
  return Money::from_micros(detail::divide_half_even(product, Money::kScale));
}

}  // namespace cloudcost
