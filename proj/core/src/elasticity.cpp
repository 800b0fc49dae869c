#include "cloudcost/elasticity.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "cloudcost/error.hpp"

namespace cloudcost {

namespace {

constexpr std::array<std::string_view, 12> kMonths = {"jan", "feb", "mar", "apr", "may", "jun",
                                                      "jul", "aug", "sep", "oct", "nov", "dec"};
constexpr std::array<std::string_view, 7> kWeekdays = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

std::optional<unsigned> lookup(std::string_view word, auto const& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == word) return static_cast<unsigned>(i + 1);
  }
  return std::nullopt;
}

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

class PatternParser {
 public:
  PatternParser(std::string_view text, std::size_t base) : text_(text), base_(base) {
    lowered_.reserve(text.size());
    for (char c : text) lowered_.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }

  PatternSpec parse() {
    PatternSpec spec;
    skip_space();
    const std::size_t mode_at = pos_;
    const std::string mode = word();
    if (mode == "temp") {
      spec.mode = PatternMode::temporary;
    } else if (mode == "perm") {
      spec.mode = PatternMode::permanent;
    } else {
      fail(mode.empty() ? "expected mode 'temp' or 'perm'" : "unknown mode keyword '" + mode + "'", mode_at);
    }
    skip_space();
    expect(':', "expected ':' after mode");
    skip_space();
    const std::size_t every_at = pos_;
    if (word() != "every") fail("expected 'every'", every_at);
    skip_space();
    spec.months = months();
    skip_space();
    const std::size_t on_at = pos_;
    if (peek_word() == "on") {
      word();
      skip_space();
      spec.days = days();
      skip_space();
    } else {
      pos_ = on_at;
    }
    spec.op = op();
    skip_space();
    const std::size_t operand_at = pos_;
    spec.operand = number();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing text", pos_);

    if (spec.op == VariationOp::divide && spec.operand == 0.0) fail("division by zero", operand_at);
    if (spec.op == VariationOp::power && spec.operand < 0.0) fail("negative exponent", operand_at);
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t at) const { throw ParseError(message, base_ + at); }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  void expect(char c, const char* message) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(message, pos_);
    ++pos_;
  }

  std::string word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_alpha(text_[pos_])) ++pos_;
    return lowered_.substr(start, pos_ - start);
  }

  std::string peek_word() {
    const std::size_t saved = pos_;
    std::string w = word();
    pos_ = saved;
    return w;
  }

  // True when, after optional spaces, a '-' is followed by a letter.
  bool range_dash_then_word() {
    std::size_t p = pos_;
    while (p < text_.size() && is_space(text_[p])) ++p;
    if (p >= text_.size() || text_[p] != '-') return false;
    ++p;
    while (p < text_.size() && is_space(text_[p])) ++p;
    return p < text_.size() && is_alpha(text_[p]);
  }

  void consume_range_dash() {
    skip_space();
    ++pos_;
    skip_space();
  }

  unsigned month_token() {
    const std::size_t at = pos_;
    const std::string w = word();
    if (w.empty()) fail("expected month name", at);
    if (auto m = lookup(w, kMonths)) return *m;
    fail("unknown month '" + w + "'", at);
  }

  MonthSelector months() {
    const std::size_t at = pos_;
    if (peek_word() == "month") {
      word();
      return {};
    }
    if (pos_ >= text_.size() || !is_alpha(text_[pos_])) fail("expected 'month' or a month name", at);
    MonthSelector sel;
    sel.first = sel.last = month_token();
    sel.kind = MonthSelector::Kind::single;
    if (range_dash_then_word()) {
      consume_range_dash();
      sel.last = month_token();
      sel.kind = MonthSelector::Kind::range;
    }
    return sel;
  }

  unsigned day_of_month() {
    const std::size_t at = pos_;
    unsigned value = 0;
    std::size_t digits = 0;
    while (pos_ < text_.size() && is_digit(text_[pos_])) {
      value = value * 10 + static_cast<unsigned>(text_[pos_] - '0');
      ++pos_;
      if (++digits > 2) fail("day of month must be 01-31", at);
    }
    if (value < 1 || value > 31) fail("day of month must be 01-31", at);
    return value;
  }

  unsigned weekday_token() {
    const std::size_t at = pos_;
    const std::string w = word();
    if (auto d = lookup(w, kWeekdays)) return *d;
    fail("unknown weekday '" + w + "'", at);
  }

  DaySelector days() {
    const std::size_t at = pos_;
    DaySelector sel;
    if (pos_ < text_.size() && is_digit(text_[pos_])) {
      sel.kind = DaySelector::Kind::day_of_month;
      sel.first = sel.last = day_of_month();
      if (pos_ + 1 < text_.size() && text_[pos_] == '-' && is_digit(text_[pos_ + 1])) {
        ++pos_;
        sel.last = day_of_month();
        sel.kind = DaySelector::Kind::day_of_month_range;
        if (sel.first > sel.last) fail("day-of-month range must be ascending", at);
      }
      return sel;
    }
    const std::string w = peek_word();
    if (w.empty()) fail("expected day selector", at);
    if (w == "everyday" || w == "weekdays" || w == "weekends") {
      word();
      sel.kind = w == "everyday"   ? DaySelector::Kind::everyday
                 : w == "weekdays" ? DaySelector::Kind::weekdays
                                   : DaySelector::Kind::weekends;
      return sel;
    }
    sel.kind = DaySelector::Kind::day_of_week;
    sel.first = sel.last = weekday_token();
    if (range_dash_then_word()) {
      consume_range_dash();
      sel.last = weekday_token();
      sel.kind = DaySelector::Kind::day_of_week_range;
      if (sel.first > sel.last) fail("day-of-week ranges cannot wrap", at);
    }
    return sel;
  }

  VariationOp op() {
    if (pos_ >= text_.size()) fail("missing operator", pos_);
    switch (text_[pos_]) {
      case '+': ++pos_; return VariationOp::add;
      case '-': ++pos_; return VariationOp::subtract;
      case '*': ++pos_; return VariationOp::multiply;
      case '/': ++pos_; return VariationOp::divide;
      case '^': ++pos_; return VariationOp::power;
      default: break;
    }
    if (is_digit(text_[pos_])) fail("missing operator", pos_);
    fail(std::string("unknown operator '") + text_[pos_] + "'", pos_);
  }

  double number() {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    if (p < text_.size() && (text_[p] == '-' || text_[p] == '+')) ++p;
    std::size_t digits = 0;
    while (p < text_.size() && is_digit(text_[p])) ++p, ++digits;
    if (p < text_.size() && text_[p] == '.') {
      ++p;
      while (p < text_.size() && is_digit(text_[p])) ++p, ++digits;
    }
    if (digits == 0) fail(pos_ < text_.size() ? "non-numeric operand" : "missing operand", start);
    std::size_t from = start;
    if (text_[from] == '+') ++from;
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text_.data() + from, text_.data() + p, value);
    if (ec != std::errc() || end != text_.data() + p || !std::isfinite(value)) fail("operand out of range", start);
    pos_ = p;
    return value;
  }

  std::string_view text_;
  std::string lowered_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

std::string format_operand(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc() ? end : buf);
}

char op_symbol(VariationOp op) {
  switch (op) {
    case VariationOp::add: return '+';
    case VariationOp::subtract: return '-';
    case VariationOp::multiply: return '*';
    case VariationOp::divide: return '/';
    case VariationOp::power: return '^';
  }
  return '?';
}

std::string_view trim(std::string_view s, std::size_t* offset) {
  std::size_t b = 0;
  while (b < s.size() && is_space(s[b])) ++b;
  std::size_t e = s.size();
  while (e > b && is_space(s[e - 1])) --e;
  *offset += b;
  return s.substr(b, e - b);
}

template <typename Fn>
void for_each_segment(std::string_view text, Fn&& fn) {
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',' || text[i] == ';' || text[i] == '\n') {
      std::size_t offset = start;
      const std::string_view segment = trim(text.substr(start, i - start), &offset);
      if (!segment.empty()) fn(segment, offset);
      start = i + 1;
    }
  }
}

bool starts_with_keyword(std::string_view segment, std::string_view keyword) {
  if (segment.size() < keyword.size()) return false;
  for (std::size_t i = 0; i < keyword.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(segment[i])) != keyword[i]) return false;
  }
  return true;
}

}  // namespace

bool MonthSelector::contains(unsigned month) const {
  switch (kind) {
    case Kind::every_month: return true;
    case Kind::single: return month == first;
    case Kind::range:
      return first <= last ? (month >= first && month <= last) : (month >= first || month <= last);
  }
  return false;
}

bool DaySelector::matches(const Date& date) const {
  const unsigned dom = static_cast<unsigned>(date.day());
  switch (kind) {
    case Kind::empty:
    case Kind::everyday: return true;
    case Kind::weekdays: return iso_weekday(date) <= 5;
    case Kind::weekends: return iso_weekday(date) >= 6;
    case Kind::day_of_month:
    case Kind::day_of_month_range: return dom >= first && dom <= last;
    case Kind::day_of_week:
    case Kind::day_of_week_range: {
      const unsigned wd = iso_weekday(date);
      return wd >= first && wd <= last;
    }
  }
  return false;
}

std::string_view month_name(unsigned month) { return kMonths.at(month - 1); }
std::string_view weekday_name(unsigned iso_weekday) { return kWeekdays.at(iso_weekday - 1); }

std::string PatternSpec::to_string() const {
  std::string out = mode == PatternMode::permanent ? "perm: every " : "temp: every ";
  switch (months.kind) {
    case MonthSelector::Kind::every_month: out += "month"; break;
    case MonthSelector::Kind::single: out += month_name(months.first); break;
    case MonthSelector::Kind::range:
      out += month_name(months.first);
      out += '-';
      out += month_name(months.last);
      break;
  }
  auto two_digits = [](unsigned d) { return (d < 10 ? "0" : "") + std::to_string(d); };
  switch (days.kind) {
    case DaySelector::Kind::empty: break;
    case DaySelector::Kind::everyday: out += " on everyday"; break;
    case DaySelector::Kind::weekdays: out += " on weekdays"; break;
    case DaySelector::Kind::weekends: out += " on weekends"; break;
    case DaySelector::Kind::day_of_month: out += " on " + two_digits(days.first); break;
    case DaySelector::Kind::day_of_month_range:
      out += " on " + two_digits(days.first) + "-" + two_digits(days.last);
      break;
    case DaySelector::Kind::day_of_week: out += " on " + std::string(weekday_name(days.first)); break;
    case DaySelector::Kind::day_of_week_range:
      out += " on " + std::string(weekday_name(days.first)) + "-" + std::string(weekday_name(days.last));
      break;
  }
  out += ' ';
  out += op_symbol(op);
  out += format_operand(operand);
  return out;
}

PatternSpec parse_pattern(std::string_view text) { return PatternParser(text, 0).parse(); }

std::vector<PatternSpec> parse_pattern_block(std::string_view text) {
  std::vector<PatternSpec> out;
  for_each_segment(text, [&](std::string_view segment, std::size_t offset) {
    out.push_back(PatternParser(segment, offset).parse());
  });
  return out;
}

UsageBlock parse_usage_block(std::string_view text) {
  UsageBlock block;
  for_each_segment(text, [&](std::string_view segment, std::size_t offset) {
    if (starts_with_keyword(segment, "baseline")) {
      std::size_t p = 8;
      while (p < segment.size() && is_space(segment[p])) ++p;
      if (p >= segment.size() || segment[p] != ':') throw ParseError("expected ':' after 'Baseline'", offset + p);
      ++p;
      while (p < segment.size() && is_space(segment[p])) ++p;
      double value = 0.0;
      const auto [end, ec] = std::from_chars(segment.data() + p, segment.data() + segment.size(), value);
      if (ec != std::errc() || end != segment.data() + segment.size() || !std::isfinite(value) || value < 0.0) {
        throw ParseError("baseline must be a nonnegative number", offset + p);
      }
      if (block.baseline) throw ParseError("duplicate baseline", offset);
      block.baseline = value;
      return;
    }
    if (starts_with_keyword(segment, "patterns")) {
      std::string_view rest = segment.substr(8);
      std::size_t rest_offset = offset + 8;
      rest = trim(rest, &rest_offset);
      if (rest.empty() || rest.front() != ':') throw ParseError("expected ':' after 'Patterns'", rest_offset);
      rest.remove_prefix(1);
      ++rest_offset;
      rest = trim(rest, &rest_offset);
      if (!rest.empty()) block.patterns.push_back(PatternParser(rest, rest_offset).parse());
      return;
    }
    block.patterns.push_back(PatternParser(segment, offset).parse());
  });
  return block;
}

bool matches(const PatternSpec& pattern, const Date& date) {
  if (!pattern.months.contains(static_cast<unsigned>(date.month()))) return false;
  if (pattern.days.kind == DaySelector::Kind::empty) {
    return pattern.mode == PatternMode::temporary || static_cast<unsigned>(date.day()) == 1;
  }
  return pattern.days.matches(date);
}

double apply_variation(VariationOp op, double value, double operand) {
  switch (op) {
    case VariationOp::add: return value + operand;
    case VariationOp::subtract: return value - operand;
    case VariationOp::multiply: return value * operand;
    case VariationOp::divide: return value / operand;
    case VariationOp::power: return std::pow(value, operand);
  }
  return value;
}

ScheduleEvaluator::ScheduleEvaluator(const UsageSchedule& schedule, YearMonth sim_start)
    : schedule_(&schedule), sim_start_(sim_start), cursor_month_(sim_start), level_(schedule.baseline) {
  if (!(schedule.baseline >= 0.0) || !std::isfinite(schedule.baseline)) {
    throw EvaluationError("baseline must be a finite nonnegative number");
  }
}

double ScheduleEvaluator::step(double value, VariationOp op, double operand, const Date& date, std::size_t index) {
  double next = apply_variation(op, value, operand);
  if (!std::isfinite(next)) {
    throw EvaluationError("usage overflow on " + cloudcost::to_string(date) + " applying pattern " +
                          std::to_string(index + 1));
  }
  if (next < 0.0) {
    clamps_.push_back({date, index});
    next = 0.0;
  }
  return next;
}

void ScheduleEvaluator::fire_permanent(const Date& date) {
  const auto& patterns = schedule_->patterns;
  const bool first_month = month_of(date) == sim_start_;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const PatternSpec& p = patterns[i];
    if (p.mode != PatternMode::permanent) continue;
    if (p.days.kind == DaySelector::Kind::empty && first_month) continue;
    if (matches(p, date)) level_ = step(level_, p.op, p.operand, date, i);
  }
}

double ScheduleEvaluator::day_value(const Date& date, unsigned days_in_month) {
  double value = schedule_->kind_class == QuantityClass::stock ? level_ : level_ / days_in_month;
  const auto& patterns = schedule_->patterns;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const PatternSpec& p = patterns[i];
    if (p.mode == PatternMode::temporary && matches(p, date)) value = step(value, p.op, p.operand, date, i);
  }
  return value;
}

double ScheduleEvaluator::value_on(const Date& date) {
  const YearMonth target_month = month_of(date);
  const unsigned target_day = static_cast<unsigned>(date.day());
  if (target_month < cursor_month_ || (target_month == cursor_month_ && target_day + 1 < cursor_day_)) {
    throw Error("date " + cloudcost::to_string(date) + " precedes the evaluator position");
  }
  // Replay permanent firings up to and including `date`.
  while (cursor_month_ < target_month || (cursor_month_ == target_month && cursor_day_ <= target_day)) {
    fire_permanent(cursor_month_.day(cursor_day_));
    if (++cursor_day_ > cursor_month_.days()) {
      cursor_month_ = cursor_month_.plus(1);
      cursor_day_ = 1;
    }
  }
  return day_value(date, target_month.days());
}

double ScheduleEvaluator::next_month() {
  const YearMonth month = cursor_month_;
  if (cursor_day_ != 1) throw Error("evaluator is positioned mid-month");
  const unsigned dim = month.days();
  double sum = 0.0;
  for (unsigned d = 1; d <= dim; ++d) {
    const Date date = month.day(d);
    fire_permanent(date);
    sum += day_value(date, dim);
  }
  cursor_month_ = month.plus(1);
  return schedule_->kind_class == QuantityClass::stock ? sum / dim : sum;
}

double evaluate_day(const UsageSchedule& schedule, const Date& date, YearMonth sim_start,
                    std::vector<ClampEvent>* clamps) {
  if (!date.ok()) throw Error("invalid date");
  if (month_of(date) < sim_start) throw Error("date precedes the simulation start");
  ScheduleEvaluator evaluator(schedule, sim_start);
  const double value = evaluator.value_on(date);
  if (clamps) clamps->insert(clamps->end(), evaluator.clamp_events().begin(), evaluator.clamp_events().end());
  return value;
}

double monthly_quantity(const UsageSchedule& schedule, YearMonth month, YearMonth sim_start,
                        std::vector<ClampEvent>* clamps) {
  if (month < sim_start) throw Error("month precedes the simulation start");
  ScheduleEvaluator evaluator(schedule, sim_start);
  double value = 0.0;
  while (evaluator.next_month_to_evaluate() <= month) value = evaluator.next_month();
  if (clamps) clamps->insert(clamps->end(), evaluator.clamp_events().begin(), evaluator.clamp_events().end());
  return value;
}

std::vector<double> monthly_series(const UsageSchedule& schedule, YearMonth first, YearMonth last,
                                   std::vector<ClampEvent>* clamps) {
  if (last < first) throw WindowError("series end precedes start");
  ScheduleEvaluator evaluator(schedule, first);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(months_between(first, last)));
  while (evaluator.next_month_to_evaluate() <= last) out.push_back(evaluator.next_month());
  if (clamps) clamps->insert(clamps->end(), evaluator.clamp_events().begin(), evaluator.clamp_events().end());
  return out;
}

}  // namespace cloudcost
