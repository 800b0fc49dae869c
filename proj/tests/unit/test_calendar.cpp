#include <doctest.h>

#include "cloudcost/calendar.hpp"
#include "cloudcost/error.hpp"
#include "oracles.hpp"

using cloudcost::YearMonth;

TEST_CASE("YearMonth parse and format") {
  const YearMonth ym = YearMonth::parse("2011-06");
  CHECK(ym.year() == 2011);
  CHECK(ym.month() == 6u);
  CHECK(ym.to_string() == "2011-06");
  CHECK(YearMonth(987, 1).to_string() == "0987-01");
  for (const char* bad : {"2011-13", "2011-00", "2011-6", "201106", "2011/06", "", "abcd-ef"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(YearMonth::parse(bad), cloudcost::ParseError);
  }
}

TEST_CASE("month arithmetic") {
  const YearMonth nov = YearMonth::parse("2011-11");
  CHECK(nov.plus(2).to_string() == "2012-01");
  CHECK(nov.plus(-11).to_string() == "2010-12");
  CHECK(cloudcost::months_between(YearMonth::parse("2011-01"), YearMonth::parse("2013-12")) == 36);
  CHECK(cloudcost::months_between(nov, nov) == 1);
  CHECK(YearMonth::from_index(nov.index()) == nov);
  CHECK(YearMonth::parse("2011-12") < YearMonth::parse("2012-01"));
}

TEST_CASE("days in month follow the Gregorian leap rule") {
  CHECK(YearMonth(2011, 2).days() == 28u);
  CHECK(YearMonth(2012, 2).days() == 29u);
  CHECK(YearMonth(1900, 2).days() == 28u);
  CHECK(YearMonth(2000, 2).days() == 29u);
  for (int y = 1990; y <= 2030; ++y) {
    for (unsigned m = 1; m <= 12; ++m) {
      CHECK(YearMonth(y, m).days() == static_cast<unsigned>(oracle::days_in(y, static_cast<int>(m))));
    }
  }
}

TEST_CASE("weekday agrees with Sakamoto's formula") {
  CHECK(cloudcost::iso_weekday(YearMonth(2011, 6).day(4)) == 6u);  // Saturday
  CHECK(cloudcost::iso_weekday(YearMonth(2011, 12).day(26)) == 1u);  // Monday
  for (int y = 1999; y <= 2025; ++y) {
    for (unsigned m = 1; m <= 12; ++m) {
      for (unsigned d = 1; d <= YearMonth(y, m).days(); ++d) {
        REQUIRE(cloudcost::iso_weekday(YearMonth(y, m).day(d)) ==
                static_cast<unsigned>(oracle::iso_weekday(y, static_cast<int>(m), static_cast<int>(d))));
      }
    }
  }
}

TEST_CASE("date formatting") {
  CHECK(cloudcost::to_string(YearMonth(2011, 12).day(26)) == "2011-12-26");
  CHECK(cloudcost::month_of(YearMonth(2011, 3).day(9)) == YearMonth(2011, 3));
}
