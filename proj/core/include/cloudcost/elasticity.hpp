#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cloudcost/calendar.hpp"

namespace cloudcost {

// Elasticity patterns modify a baseline usage level on matching months/days:
//
//   temp|perm ":" "every" <months> [ "on" <days> ] <op> <number>
//
//   months := "month" | jan..dec | jan..dec "-" jan..dec   (ranges may wrap)
//   days   := "everyday" | "weekdays" | "weekends" | 1..31 | 1..31 "-" 1..31
//           | mon..sun | mon..sun "-" mon..sun             (no wrapping)
//   op     := "+" | "-" | "*" | "/" | "^"
//
// Keywords are case-insensitive and whitespace is free between tokens, except
// that a day-of-month range is written without spaces ("25-30").

enum class PatternMode { temporary, permanent };

enum class VariationOp { add, subtract, multiply, divide, power };

struct MonthSelector {
  enum class Kind { every_month, single, range };

  Kind kind = Kind::every_month;
  unsigned first = 1;  // 1 = jan
  unsigned last = 12;

  bool contains(unsigned month) const;
  friend bool operator==(const MonthSelector&, const MonthSelector&) = default;
};

struct DaySelector {
  enum class Kind { empty, everyday, weekdays, weekends, day_of_month, day_of_month_range, day_of_week, day_of_week_range };

  Kind kind = Kind::empty;
  unsigned first = 0;  // day of month 1..31, or ISO weekday 1 = mon .. 7 = sun
  unsigned last = 0;

  // Calendar test only; `empty` is resolved by the pattern mode.
  bool matches(const Date& date) const;
  friend bool operator==(const DaySelector&, const DaySelector&) = default;
};

struct PatternSpec {
  PatternMode mode = PatternMode::temporary;
  MonthSelector months;
  DaySelector days;
  VariationOp op = VariationOp::add;
  double operand = 0.0;

  // Canonical text form; reparses to an equal spec.
  std::string to_string() const;
  friend bool operator==(const PatternSpec&, const PatternSpec&) = default;
};

// Throws ParseError carrying the byte offset of the offending token.
PatternSpec parse_pattern(std::string_view text);

// Patterns separated by ',', ';' or newlines. Empty segments are skipped.
std::vector<PatternSpec> parse_pattern_block(std::string_view text);

// A full usage block, optionally headed by "Baseline: <n>" and "Patterns:".
struct UsageBlock {
  std::optional<double> baseline;
  std::vector<PatternSpec> patterns;
};
UsageBlock parse_usage_block(std::string_view text);

// True when `date` is selected. An empty day selector selects the first day
// of each matching month for permanent patterns and every day for temporary ones.
bool matches(const PatternSpec& pattern, const Date& date);

// One variation step. Callers clamp the result at zero.
double apply_variation(VariationOp op, double value, double operand);

// Stock quantities are levels billed by time average (GB-month); flows are
// consumed amounts billed by monthly sum.
enum class QuantityClass { stock, flow };

struct UsageSchedule {
  QuantityClass kind_class = QuantityClass::flow;
  double baseline = 0.0;
  std::vector<PatternSpec> patterns;
};

struct ClampEvent {
  Date date;
  std::size_t pattern_index;
};

// Walks a schedule forward one day at a time from the first day of the
// starting month. Permanent patterns with an empty day selector fire at each
// month boundary after the first month; other permanent patterns fire at the
// start of each matching day. Temporary patterns then act on the day's value.
// Within each class patterns apply in declaration order.
class ScheduleEvaluator {
 public:
  ScheduleEvaluator(const UsageSchedule& schedule, YearMonth sim_start);

  // Billable quantity of the next month in sequence, starting at sim_start.
  double next_month();
  // Effective value of `date`, which must not precede the current position.
  double value_on(const Date& date);

  YearMonth next_month_to_evaluate() const { return cursor_month_; }
  double level() const { return level_; }
  const std::vector<ClampEvent>& clamp_events() const { return clamps_; }

 private:
  void fire_permanent(const Date& date);
  double day_value(const Date& date, unsigned days_in_month);
  double step(double value, VariationOp op, double operand, const Date& date, std::size_t index);

  const UsageSchedule* schedule_;
  YearMonth sim_start_;
  YearMonth cursor_month_;
  unsigned cursor_day_ = 1;  // next day whose permanent firings are pending
  double level_;
  std::vector<ClampEvent> clamps_;
};

// Value of a single day: the level for stocks, the day's consumed amount for flows.
double evaluate_day(const UsageSchedule& schedule, const Date& date, YearMonth sim_start,
                    std::vector<ClampEvent>* clamps = nullptr);

// Stock: time average of daily levels. Flow: sum of daily amounts.
double monthly_quantity(const UsageSchedule& schedule, YearMonth month, YearMonth sim_start,
                        std::vector<ClampEvent>* clamps = nullptr);

// Quantities for every month of [first, last], in order.
std::vector<double> monthly_series(const UsageSchedule& schedule, YearMonth first, YearMonth last,
                                   std::vector<ClampEvent>* clamps = nullptr);

std::string_view month_name(unsigned month);
std::string_view weekday_name(unsigned iso_weekday);

}  // namespace cloudcost
