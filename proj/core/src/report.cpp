#include "cloudcost/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cloudcost {

using nlohmann::ordered_json;

namespace {

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

void rollup_table(std::ostringstream& html, const CostReport& report, RollupKey by, const char* heading) {
  html << "<h2>Cost by " << heading << "</h2>\n";
  html << "<table id=\"by-" << to_string(by) << "\">\n<thead><tr><th>" << heading
       << "</th><th class=\"num\">Cost (" << escape_html(report.currency) << ")</th></tr></thead>\n<tbody>\n";
  for (const auto& [key, cost] : rollup(report, by)) {
    html << "<tr><td>" << escape_html(key) << "</td><td class=\"num\">" << cost.to_string(2) << "</td></tr>\n";
  }
  html << "</tbody>\n</table>\n";
}

void monthly_chart(std::ostringstream& html, const CostReport& report) {
  const std::vector<Money> monthly = report.monthly_totals();
  const double width = 720, height = 260, left = 70, right = 20, top = 20, bottom = 40;
  Money peak;
  for (const Money& m : monthly) peak = std::max(peak, m);
  const double ymax = peak > Money{} ? peak.to_double() : 1.0;
  const std::size_t n = monthly.size();
  auto x_at = [&](std::size_t i) {
    return n == 1 ? left + (width - left - right) / 2 : left + (width - left - right) * i / (n - 1);
  };
  auto y_at = [&](const Money& m) { return top + (height - top - bottom) * (1.0 - m.to_double() / ymax); };

  html << "<h2>Monthly cost</h2>\n";
  html << "<svg id=\"monthly-chart\" xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  html << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
       << height - bottom << "\" stroke=\"#555\"/>\n";
  html << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
       << "\" stroke=\"#555\"/>\n";
  html << "<text x=\"" << left - 6 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
       << peak.to_string(2) << "</text>\n";
  html << "<text x=\"" << left - 6 << "\" y=\"" << height - bottom << "\" text-anchor=\"end\" font-size=\"11\">0</text>\n";
  html << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < n; ++i) html << (i ? " " : "") << fixed(x_at(i), 2) << "," << fixed(y_at(monthly[i]), 2);
  html << "\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const std::string month = report.window.start.plus(static_cast<int>(i)).to_string();
    html << "<circle class=\"point\" data-month=\"" << month << "\" data-value=\"" << monthly[i].to_string(2)
         << "\" cx=\"" << fixed(x_at(i), 2) << "\" cy=\"" << fixed(y_at(monthly[i]), 2)
         << "\" r=\"3\" fill=\"#1f77b4\"><title>" << month << ": " << monthly[i].to_string(2) << "</title></circle>\n";
  }
  const std::size_t label_every = std::max<std::size_t>(1, n / 12);
  for (std::size_t i = 0; i < n; i += label_every) {
    html << "<text x=\"" << fixed(x_at(i), 2) << "\" y=\"" << height - bottom + 16
         << "\" text-anchor=\"middle\" font-size=\"11\">" << report.window.start.plus(static_cast<int>(i)).to_string()
         << "</text>\n";
  }
  html << "</svg>\n";
}

void radar_section(std::ostringstream& html, const RadarData& data) {
  const double size = 300, cx = 150, cy = 150, radius = 110;
  constexpr double kPi = 3.14159265358979323846;
  auto point = [&](std::size_t axis, double value) {
    const double angle = -kPi / 2 + 2 * kPi * static_cast<double>(axis) / 5.0;
    return std::pair{cx + radius * value / 5.0 * std::cos(angle), cy + radius * value / 5.0 * std::sin(angle)};
  };
  html << "<section id=\"radar\">\n<h2>Benefits and risks</h2>\n";
  html << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  for (int ring = 1; ring <= 5; ++ring) {
    html << "<polygon fill=\"none\" stroke=\"#ddd\" points=\"";
    for (std::size_t a = 0; a < 5; ++a) {
      const auto [x, y] = point(a, ring);
      html << (a ? " " : "") << fixed(x, 2) << "," << fixed(y, 2);
    }
    html << "\"/>\n";
  }
  for (std::size_t a = 0; a < 5; ++a) {
    const auto [x, y] = point(a, 5.6);
    html << "<text x=\"" << fixed(x, 2) << "\" y=\"" << fixed(y, 2) << "\" text-anchor=\"middle\" font-size=\"11\">"
         << to_string(kCategories[a]) << "</text>\n";
  }
  const std::pair<const std::vector<CategoryAverage>*, const char*> series[] = {{&data.benefits, "#2ca02c"},
                                                                               {&data.risks, "#d62728"}};
  for (const auto& [axis, colour] : series) {
    if (axis->empty()) continue;
    html << "<polygon class=\"" << to_string(axis->front().kind) << "\" fill=\"" << colour
         << "\" fill-opacity=\"0.2\" stroke=\"" << colour << "\" points=\"";
    bool first = true;
    for (const CategoryAverage& avg : *axis) {
      const auto [x, y] = point(static_cast<std::size_t>(avg.category), avg.average);
      html << (first ? "" : " ") << fixed(x, 2) << "," << fixed(y, 2);
      first = false;
    }
    html << "\"/>\n";
  }
  html << "</svg>\n";
  html << "<table id=\"radar-table\">\n<thead><tr><th>Kind</th><th>Category</th><th class=\"num\">Average</th>"
          "<th class=\"num\">Items</th></tr></thead>\n<tbody>\n";
  for (const auto* axis : {&data.benefits, &data.risks}) {
    for (const CategoryAverage& avg : *axis) {
      html << "<tr><td>" << to_string(avg.kind) << "</td><td>" << to_string(avg.category) << "</td><td class=\"num\">"
           << fixed(avg.average, 2) << "</td><td class=\"num\">" << avg.item_count << "</td></tr>\n";
    }
  }
  html << "</tbody>\n</table>\n</section>\n";
}

void topology_section(std::ostringstream& html, const DeploymentModel& model) {
  html << "<section id=\"model\">\n<h2>Model</h2>\n<ul>\n";
  for (const Node& node : model.nodes) {
    html << "<li>" << escape_html(node.id) << " (" << to_string(node.kind);
    if (node.placement) html << ", " << escape_html(node.placement->provider) << "/" << escape_html(node.placement->region);
    if (const Group* g = model.group_of(node.id)) html << ", group " << escape_html(g->id);
    html << ")";
    std::vector<std::string> hosted;
    for (const DeploymentBinding& b : model.bindings) {
      if (b.node_id == node.id) hosted.push_back(b.artifact_id);
    }
    if (!hosted.empty()) {
      html << ": hosts";
      for (const std::string& a : hosted) html << " " << escape_html(a);
    }
    html << "</li>\n";
  }
  for (const CommunicationPath& p : model.paths) {
    html << "<li>" << escape_html(p.id) << ": " << escape_html(p.from_node) << " &rarr; " << escape_html(p.to_node)
         << "</li>\n";
  }
  html << "</ul>\n</section>\n";
}

ordered_json rollup_json(const CostReport& report, RollupKey by) {
  ordered_json out = ordered_json::object();
  for (const auto& [key, cost] : rollup(report, by)) out[key] = cost.to_string(2);
  return out;
}

}  // namespace

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const CostReport& report) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const CostLine& l : report.lines) {
    out += l.month.to_string();
    for (std::string_view field : {std::string_view(l.group), std::string_view(l.subject), std::string_view(l.provider),
                                   std::string_view(l.region), std::string_view(l.dimension)}) {
      out += ',';
      out += csv_field(field);
    }
    out += ',';
    out += l.quantity.to_plain_string();
    out += ',';
    out += csv_field(l.unit);
    out += ',';
    out += l.cost.to_string(2);
    out += '\n';
  }
  return out;
}

std::string to_html(const CostReport& report, std::span<const SummaryRow> summaries, const HtmlOptions& options) {
  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>" << escape_html(options.title)
       << "</title>\n<style>\n"
          "body{font-family:sans-serif;margin:2em;color:#222}\n"
          "table{border-collapse:collapse;margin-bottom:1.5em}\n"
          "th,td{border:1px solid #ccc;padding:4px 10px}\n"
          ".num{text-align:right;font-variant-numeric:tabular-nums}\n"
          "</style>\n</head>\n<body>\n";
  html << "<h1>" << escape_html(options.title) << "</h1>\n";
  html << "<p>" << report.window.start.to_string() << " to " << report.window.end.to_string() << " ("
       << report.window.months() << " months), currency " << escape_html(report.currency) << ". Grand total "
       << report.total().to_string(2) << ".</p>\n";

  html << "<h2>Summary</h2>\n<table id=\"summary\">\n<thead><tr><th>Scenario</th><th class=\"num\">1st month</th>"
          "<th class=\"num\">Monthly avg.</th><th class=\"num\">Total</th></tr></thead>\n<tbody>\n";
  for (const SummaryRow& row : summaries) {
    html << "<tr><td>" << escape_html(row.label) << "</td><td class=\"num\">" << row.first_month.to_string(2)
         << "</td><td class=\"num\">" << row.monthly_avg.to_string(2) << "</td><td class=\"num\">"
         << row.total.to_string(2) << "</td></tr>\n";
  }
  html << "</tbody>\n</table>\n";

  monthly_chart(html, report);
  rollup_table(html, report, RollupKey::group, "group");
  rollup_table(html, report, RollupKey::dimension, "dimension");

  if (!report.warnings.empty()) {
    std::set<std::string> seen;
    html << "<section id=\"warnings\">\n<h2>Warnings</h2>\n<ul>\n";
    for (const std::string& w : report.warnings) {
      if (seen.insert(w).second) html << "<li>" << escape_html(w) << "</li>\n";
    }
    html << "</ul>\n</section>\n";
  }
  if (options.radar) radar_section(html, *options.radar);
  if (options.model) topology_section(html, *options.model);
  html << "</body>\n</html>\n";
  return html.str();
}

std::string summary_to_json(const CostReport& report, const SummaryRow& summary) {
  ordered_json out;
  out["label"] = summary.label;
  out["currency"] = report.currency;
  out["start"] = report.window.start.to_string();
  out["end"] = report.window.end.to_string();
  out["months"] = summary.months;
  out["first_month"] = summary.first_month.to_string(2);
  out["monthly_avg"] = summary.monthly_avg.to_string(2);
  out["total"] = summary.total.to_string(2);
  out["by_group"] = rollup_json(report, RollupKey::group);
  out["by_dimension"] = rollup_json(report, RollupKey::dimension);
  out["by_provider"] = rollup_json(report, RollupKey::provider);
  out["warnings"] = report.warnings;
  return out.dump(2) + "\n";
}

std::string comparison_to_json(const ComparisonTable& table, std::string_view currency) {
  ordered_json out;
  out["currency"] = currency;
  out["baseline"] = table.baseline_label;
  out["rows"] = ordered_json::array();
  for (const ComparisonRow& r : table.rows) {
    ordered_json row;
    row["label"] = r.summary.label;
    row["months"] = r.summary.months;
    row["first_month"] = r.summary.first_month.to_string(2);
    row["monthly_avg"] = r.summary.monthly_avg.to_string(2);
    row["total"] = r.summary.total.to_string(2);
    row["delta_vs_baseline"] = r.delta.to_string(2);
    row["difference"] = r.difference;
    out["rows"].push_back(row);
  }
  out["warnings"] = table.warnings;
  return out.dump(2) + "\n";
}

std::string format_grouped(Money amount) {
  std::string plain = amount.to_string(2);
  const bool negative = plain.front() == '-';
  if (negative) plain.erase(0, 1);
  const auto dot = plain.find('.');
  std::string whole = plain.substr(0, dot);
  std::string grouped;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    if (i && (whole.size() - i) % 3 == 0) grouped += ',';
    grouped += whole[i];
  }
  return (negative ? "-" : "") + grouped + plain.substr(dot);
}

std::string format_comparison(const ComparisonTable& table, std::string_view currency) {
  const int months = table.rows.empty() ? 0 : table.rows.front().summary.months;
  const std::string total_label = months % 12 == 0 && months > 0
                                      ? "Total, " + std::to_string(months / 12) + (months == 12 ? " year" : " years")
                                      : "Total, " + std::to_string(months) + " months";
  std::vector<std::vector<std::string>> grid;
  grid.push_back({"Cost (" + std::string(currency) + ")"});
  grid.push_back({"1st month"});
  grid.push_back({"Monthly avg."});
  grid.push_back({total_label});
  grid.push_back({"Difference with " + table.baseline_label});
  for (const ComparisonRow& r : table.rows) {
    grid[0].push_back(r.summary.label);
    grid[1].push_back(format_grouped(r.summary.first_month));
    grid[2].push_back(format_grouped(r.summary.monthly_avg));
    grid[3].push_back(format_grouped(r.summary.total));
    grid[4].push_back(r.difference);
  }
  std::vector<std::size_t> widths(grid[0].size(), 0);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) widths[c] = std::max(widths[c], line[c].size());
  }
  std::string out;
  for (const auto& line : grid) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      const std::size_t pad = widths[c] - line[c].size();
      if (c == 0) {
        text += line[c] + std::string(pad, ' ');
      } else {
        text += "  " + std::string(pad, ' ') + line[c];
      }
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + "\n";
  }
  for (const std::string& w : table.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace cloudcost
