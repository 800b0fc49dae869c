#include "cloudcost/calendar.hpp"

#include <cstdio>

#include "cloudcost/error.hpp"

namespace cloudcost {

namespace chr = std::chrono;

YearMonth YearMonth::parse(std::string_view text) {
  auto digit = [&](std::size_t i) {
    if (i >= text.size() || text[i] < '0' || text[i] > '9') {
      throw ParseError("expected YYYY-MM, got '" + std::string(text) + "'", i);
    }
    return text[i] - '0';
  };
  if (text.size() != 7 || text[4] != '-') throw ParseError("expected YYYY-MM, got '" + std::string(text) + "'", 0);
  const int year = digit(0) * 1000 + digit(1) * 100 + digit(2) * 10 + digit(3);
  const int month = digit(5) * 10 + digit(6);
  if (month < 1 || month > 12) throw ParseError("month out of range in '" + std::string(text) + "'", 5);
  return YearMonth(year, static_cast<unsigned>(month));
}

unsigned YearMonth::days() const {
  const chr::year_month_day_last last{chr::year{year_}, chr::month_day_last{chr::month{month_}}};
  return static_cast<unsigned>(last.day());
}

Date YearMonth::first_day() const { return Date{chr::year{year_}, chr::month{month_}, chr::day{1}}; }

Date YearMonth::day(unsigned d) const { return Date{chr::year{year_}, chr::month{month_}, chr::day{d}}; }

std::string YearMonth::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", year_, month_);
  return buf;
}

YearMonth month_of(const Date& date) {
  return YearMonth(static_cast<int>(date.year()), static_cast<unsigned>(date.month()));
}

unsigned iso_weekday(const Date& date) { return chr::weekday{chr::sys_days{date}}.iso_encoding(); }

std::string to_string(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

}  // namespace cloudcost
