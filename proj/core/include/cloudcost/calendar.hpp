#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace cloudcost {

using Date = std::chrono::year_month_day;

// A calendar month, e.g. 2011-06. Months are totally ordered and can be
// stepped with plain integer offsets.
class YearMonth {
 public:
  constexpr YearMonth() = default;
  constexpr YearMonth(int year, unsigned month) : year_(year), month_(month) {}

  // "YYYY-MM"; throws cloudcost::ParseError.
  static YearMonth parse(std::string_view text);
  static constexpr YearMonth from_index(int index) {
    const int y = index >= 0 ? index / 12 : (index - 11) / 12;
    return YearMonth(y, static_cast<unsigned>(index - y * 12) + 1);
  }

  constexpr int year() const { return year_; }
  constexpr unsigned month() const { return month_; }
  constexpr int index() const { return year_ * 12 + static_cast<int>(month_) - 1; }
  constexpr YearMonth plus(int months) const { return from_index(index() + months); }
  unsigned days() const;
  Date first_day() const;
  Date day(unsigned d) const;
  bool valid() const { return month_ >= 1 && month_ <= 12; }

  std::string to_string() const;

  friend constexpr bool operator==(YearMonth, YearMonth) = default;
  friend constexpr auto operator<=>(YearMonth a, YearMonth b) { return a.index() <=> b.index(); }

 private:
  int year_ = 1970;
  unsigned month_ = 1;
};

// Inclusive number of months from `first` to `last` (1 when equal).
constexpr int months_between(YearMonth first, YearMonth last) { return last.index() - first.index() + 1; }

YearMonth month_of(const Date& date);

// ISO weekday: 1 = Monday ... 7 = Sunday.
unsigned iso_weekday(const Date& date);

std::string to_string(const Date& date);

}  // namespace cloudcost
