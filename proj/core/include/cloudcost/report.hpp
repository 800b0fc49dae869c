#pragma once

#include <span>
#include <string>

#include "cloudcost/assess.hpp"
#include "cloudcost/engine.hpp"
#include "cloudcost/model.hpp"

namespace cloudcost {

inline constexpr std::string_view kCsvHeader = "month,group,node,provider,region,dimension,quantity,unit,cost";

// One row per cost line in report order. RFC 4180 quoting, months as YYYY-MM,
// costs with two decimals. The cost column sums to report.total() exactly.
std::string to_csv(const CostReport& report);

// RFC 4180 field quoting.
std::string csv_field(std::string_view value);

struct HtmlOptions {
  std::string title = "Cost report";
  const RadarData* radar = nullptr;       // radar section omitted when null
  const DeploymentModel* model = nullptr;  // topology listing omitted when null
};

// Self-contained page: monthly-total chart (inline SVG), per-group and
// per-dimension tables, summary rows, warnings, optional radar and topology.
std::string to_html(const CostReport& report, std::span<const SummaryRow> summaries, const HtmlOptions& options = {});

// summary.json: the summary row plus group/dimension/provider rollups and warnings.
std::string summary_to_json(const CostReport& report, const SummaryRow& summary);

std::string comparison_to_json(const ComparisonTable& table, std::string_view currency);

// Console table: one column per row, lines for first month, monthly average,
// total and "Difference with <baseline>".
std::string format_comparison(const ComparisonTable& table, std::string_view currency);

// 1234567.891 -> "1,234,567.89"
std::string format_grouped(Money amount);

}  // namespace cloudcost
