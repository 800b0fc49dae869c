#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cloudcost/calendar.hpp"
#include "cloudcost/model.hpp"
#include "cloudcost/money.hpp"
#include "cloudcost/pricing.hpp"

namespace cloudcost {

// Inclusive month range.
struct SimulationWindow {
  YearMonth start;
  YearMonth end;

  int months() const { return months_between(start, end); }
  // Throws WindowError for reversed windows.
  void check() const;
};

struct PurchaseChoice {
  PurchaseKind kind = PurchaseKind::on_demand;
  std::optional<int> term_months;  // reserved: selects among the sku's reserved options
};

// Node id -> purchase choice. Nodes not listed run on demand.
using PurchasePlan = std::map<std::string, PurchaseChoice>;

// {"<node id>": {"option": "on_demand"|"reserved", "term_months": 36}, ...}
PurchasePlan parse_purchase_plan(std::string_view document);

inline constexpr std::string_view kReservationUpfront = "reservation_upfront";

struct UsageRecord {
  YearMonth month;
  std::string subject;  // node id or path id
  std::string dimension;
  double quantity = 0.0;
  std::string unit;
};

struct CostLine {
  YearMonth month;
  std::string subject;    // node id or path id
  std::string dimension;  // pricing dimension or reservation_upfront
  Quantity quantity;
  std::string unit;
  std::string basis;  // how the rate was applied
  Money cost;         // rounded half-even to cents
  std::string group;  // group of the charged node, empty when ungrouped
  std::string provider;
  std::string region;
};

struct CostReport {
  SimulationWindow window;
  std::string currency;
  std::vector<UsageRecord> usage;
  std::vector<CostLine> lines;  // sorted by (month, subject, dimension)
  std::vector<std::string> warnings;

  Money total() const;
  // One entry per window month, zero for months without lines.
  std::vector<Money> monthly_totals() const;
};

struct SimulateOptions {
  // Month whose first day starts every usage schedule and reservation term.
  // Defaults to the window start. Setting it earlier lets a window be split
  // into pieces that concatenate to the whole.
  std::optional<YearMonth> usage_origin;
};

// Prices every node requirement and path volume for each window month.
// Throws MissingRateError (naming subject and dimension), WindowError,
// ValidationError or ReferenceError.
CostReport simulate(const DeploymentModel& model, const PriceCatalog& catalog, const SimulationWindow& window,
                    const PurchasePlan& plan = {}, const SimulateOptions& options = {});

enum class RollupKey { group, node, dimension, provider, month };

std::string_view to_string(RollupKey key);
std::optional<RollupKey> rollup_key_from_string(std::string_view text);

inline constexpr std::string_view kUngrouped = "(ungrouped)";

// Totals per key, sorted by key. Keys sum to report.total() exactly.
std::vector<std::pair<std::string, Money>> rollup(const CostReport& report, RollupKey by);

// first_month, total and monthly average, where the average excludes the
// first month: (total - first) / (n - 1), or total when n = 1.
struct SummaryRow {
  std::string label;
  Money first_month;
  Money monthly_avg;
  Money total;
  int months = 0;
};

SummaryRow summarize(std::span<const Money> monthly, std::string label);
SummaryRow summarize(const CostReport& report, std::string label);

struct ComparisonRow {
  SummaryRow summary;
  std::optional<std::int64_t> multiple;  // nearest integer of total / baseline total; empty for the baseline
  std::string difference;                // "+2x", "" for the baseline
  Money delta;                           // total - baseline total
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  // input order
  std::string baseline_label;
  std::vector<std::string> warnings;

  const ComparisonRow& row(std::string_view label) const;
};

// Baseline is the cheapest total; equal totals go to the smallest label and
// raise a warning. Needs at least two rows.
ComparisonTable compare(std::vector<SummaryRow> rows);

struct Scenario {
  std::string label;
  DeploymentModel model;
  PurchasePlan plan;
};

struct ScenarioComparison {
  ComparisonTable table;
  std::vector<CostReport> reports;  // same order as the scenarios
};

ScenarioComparison compare_scenarios(std::span<const Scenario> scenarios, const PriceCatalog& catalog,
                                     const SimulationWindow& window);

// Re-placement of every cloud node onto one provider/region, renaming server
// types and storage types where the target uses different catalog names.
struct ProviderTarget {
  std::string label;
  Placement placement;
  std::map<std::string, std::string> sku_map;
  std::map<std::string, std::string> storage_map;
  PurchasePlan plan;  // applied when simulating this target
};

// {"targets": [{"label", "provider", "region", "sku_map"?, "storage_map"?, "plan"?}, ...]}
std::vector<ProviderTarget> parse_provider_map(std::string_view document);
DeploymentModel retarget(const DeploymentModel& model, const ProviderTarget& target);

}  // namespace cloudcost
