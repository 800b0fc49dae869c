#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cloudcost/assess.hpp"
#include "cloudcost/engine.hpp"
#include "cloudcost/error.hpp"
#include "cloudcost/model.hpp"
#include "cloudcost/pricing.hpp"
#include "cloudcost/report.hpp"

namespace cloudcost::cli {

namespace fs = std::filesystem;

namespace {

// Bad flags, unreadable inputs, malformed months.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_atomic(const fs::path& target, const std::string& content) {
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot write '" + temp.string() + "'");
    file << content;
    file.flush();
    if (!file) throw Error("failed writing '" + temp.string() + "'");
  }
  fs::rename(temp, target);
}

YearMonth month_flag(const std::string& flag, const std::string& text) {
  try {
    return YearMonth::parse(text);
  } catch (const ParseError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

SimulationWindow window_flags(const std::string& start, const std::string& end) {
  SimulationWindow window{month_flag("--start", start), month_flag("--end", end)};
  try {
    window.check();
  } catch (const WindowError& e) {
    throw UsageError(e.what());
  }
  return window;
}

PriceCatalog catalog_flag(const std::string& path) {
  std::string resolved = path;
  if (resolved.empty()) {
    if (const char* env = std::getenv("CLOUDCOST_CATALOG")) resolved = env;
  }
  if (resolved.empty()) throw UsageError("no catalog: pass --catalog or set CLOUDCOST_CATALOG");
  return load_catalog(read_file(resolved));
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  std::vector<std::string> seen;
  for (const std::string& w : warnings) {
    if (std::find(seen.begin(), seen.end(), w) != seen.end()) continue;
    seen.push_back(w);
    err << "warning: " << w << "\n";
  }
}

void print_diagnostics(std::ostream& err, const std::vector<Diagnostic>& diagnostics) {
  for (const Diagnostic& d : diagnostics) err << to_string(d.severity) << ": " << d.path << ": " << d.message << "\n";
}

struct SimulateArgs {
  std::string model;
  std::string catalog;
  std::string start;
  std::string end;
  std::string plan;
  std::string out;
  std::string items;
  std::string ratings;
};

void add_simulate_flags(CLI::App* cmd, SimulateArgs& a) {
  cmd->add_option("--model", a.model, "Deployment model JSON")->required();
  cmd->add_option("--catalog", a.catalog, "Price catalog JSON (default: $CLOUDCOST_CATALOG)");
  cmd->add_option("--start", a.start, "First month, YYYY-MM")->required();
  cmd->add_option("--end", a.end, "Last month, YYYY-MM")->required();
  cmd->add_option("--plan", a.plan, "Purchase plan JSON");
  cmd->add_option("--out", a.out, "Output directory")->required();
}

struct Simulated {
  DeploymentModel model;
  CostReport report;
};

Simulated run_simulation(const SimulateArgs& a, std::ostream& err) {
  const SimulationWindow window = window_flags(a.start, a.end);
  PriceCatalog catalog = catalog_flag(a.catalog);
  DeploymentModel model = parse_model(read_file(a.model));
  const PurchasePlan plan = a.plan.empty() ? PurchasePlan{} : parse_purchase_plan(read_file(a.plan));
  CostReport report = simulate(model, catalog, window, plan);
  print_warnings(err, report.warnings);
  return {std::move(model), std::move(report)};
}

int cmd_validate(const std::string& path, std::ostream& err) {
  const DeploymentModel model = read_model(read_file(path));
  const std::vector<Diagnostic> diagnostics = validate(model);
  print_diagnostics(err, diagnostics);
  return has_errors(diagnostics) ? kValidationFailure : kOk;
}

struct Assessment {
  RadarData radar;
  ImportantItems important;
};

Assessment run_assessment(const std::string& items_path, const std::string& ratings_path, int threshold,
                          std::ostream& err) {
  const std::vector<AssessmentItem> items = load_items(read_file(items_path));
  const RatingSheet sheet = parse_ratings_csv(read_file(ratings_path));
  std::vector<Diagnostic> diagnostics = validate_sheet(sheet, items);
  if (has_errors(diagnostics)) throw ValidationError(std::move(diagnostics));
  print_diagnostics(err, diagnostics);
  return {radar(sheet, items), important_items(sheet, items, threshold)};
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const Simulated sim = run_simulation(a, err);
  const SummaryRow summary = summarize(sim.report, sim.model.name);
  std::optional<Assessment> assessment;
  if (!a.items.empty() || !a.ratings.empty()) {
    if (a.items.empty() || a.ratings.empty()) throw UsageError("--items and --ratings go together");
    assessment = run_assessment(a.items, a.ratings, 4, err);
  }
  HtmlOptions html;
  html.title = sim.model.name + " cost report";
  html.model = &sim.model;
  if (assessment) html.radar = &assessment->radar;

  const fs::path dir(a.out);
  write_atomic(dir / "report.csv", to_csv(sim.report));
  write_atomic(dir / "report.html", to_html(sim.report, std::span(&summary, 1), html));
  write_atomic(dir / "summary.json", summary_to_json(sim.report, summary));
  out << sim.model.name << ": first month " << format_grouped(summary.first_month) << ", monthly avg "
      << format_grouped(summary.monthly_avg) << ", total " << format_grouped(summary.total) << " "
      << sim.report.currency << " over " << summary.months << " months\n";
  return kOk;
}

int cmd_export_csv(const SimulateArgs& a, std::ostream& err) {
  const Simulated sim = run_simulation(a, err);
  write_atomic(fs::path(a.out) / "report.csv", to_csv(sim.report));
  return kOk;
}

struct CompareArgs {
  std::vector<std::string> models;
  std::vector<std::string> labels;
  std::vector<std::string> plans;
  std::string catalog;
  std::string start;
  std::string end;
  std::string out;
};

void emit_comparison(const ComparisonTable& table, const std::string& currency, const std::string& out_dir,
                     std::ostream& out, std::ostream& err) {
  out << format_comparison(table, currency);
  print_warnings(err, table.warnings);
  if (!out_dir.empty()) write_atomic(fs::path(out_dir) / "comparison.json", comparison_to_json(table, currency));
}

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  if (a.models.size() < 2) throw UsageError("--models needs at least two models");
  if (!a.labels.empty() && a.labels.size() != a.models.size()) throw UsageError("--labels must match --models");
  if (!a.plans.empty() && a.plans.size() != a.models.size()) throw UsageError("--plans must match --models");
  const SimulationWindow window = window_flags(a.start, a.end);
  const PriceCatalog catalog = catalog_flag(a.catalog);
  std::vector<Scenario> scenarios;
  for (std::size_t i = 0; i < a.models.size(); ++i) {
    Scenario s;
    s.model = parse_model(read_file(a.models[i]));
    s.label = a.labels.empty() ? s.model.name : a.labels[i];
    if (!a.plans.empty() && a.plans[i] != "-") s.plan = parse_purchase_plan(read_file(a.plans[i]));
    scenarios.push_back(std::move(s));
  }
  const ScenarioComparison result = compare_scenarios(scenarios, catalog, window);
  for (const CostReport& r : result.reports) print_warnings(err, r.warnings);
  emit_comparison(result.table, catalog.currency(), a.out, out, err);
  return kOk;
}

struct ProvidersArgs {
  std::string model;
  std::string catalog;
  std::string map;
  std::string start;
  std::string end;
  std::string out;
};

int cmd_compare_providers(const ProvidersArgs& a, std::ostream& out, std::ostream& err) {
  const SimulationWindow window = window_flags(a.start, a.end);
  const PriceCatalog catalog = catalog_flag(a.catalog);
  const DeploymentModel model = parse_model(read_file(a.model));
  const std::vector<ProviderTarget> targets = parse_provider_map(read_file(a.map));
  if (targets.size() < 2) throw UsageError("provider map needs at least two targets");
  std::vector<SummaryRow> rows;
  for (const ProviderTarget& target : targets) {
    const CostReport report = simulate(retarget(model, target), catalog, window, target.plan);
    print_warnings(err, report.warnings);
    rows.push_back(summarize(report, target.label));
  }
  emit_comparison(compare(std::move(rows)), catalog.currency(), a.out, out, err);
  return kOk;
}

struct AssessArgs {
  std::string items;
  std::string ratings;
  int threshold = 4;
  std::string out;
};

int cmd_assess(const AssessArgs& a, std::ostream& out, std::ostream& err) {
  const Assessment result = run_assessment(a.items, a.ratings, a.threshold, err);
  const fs::path dir(a.out);
  write_atomic(dir / "radar.json", radar_to_json(result.radar));
  write_atomic(dir / "important.json", important_items_to_json(result.important, a.threshold));
  for (const auto* axis : {&result.radar.benefits, &result.radar.risks}) {
    for (const CategoryAverage& avg : *axis) {
      std::ostringstream value;
      value.setf(std::ios::fixed);
      value.precision(2);
      value << avg.average;
      out << to_string(avg.kind) << " " << to_string(avg.category) << " " << value.str() << " (" << avg.item_count
          << " rated)\n";
    }
  }
  out << "important benefits: " << result.important.benefits.size() << ", important risks: "
      << result.important.risks.size() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cloud infrastructure cost modelling and migration assessment", "cloudcost"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a deployment model");
  validate_cmd->add_option("model", validate_path, "Deployment model JSON")->required();
  validate_cmd->callback([&] { action = [&] { return cmd_validate(validate_path, err); }; });

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Cost a model over a window; write report.csv, report.html, summary.json");
  add_simulate_flags(simulate_cmd, sim);
  simulate_cmd->add_option("--items", sim.items, "Assessment items JSON, adds a radar section");
  simulate_cmd->add_option("--ratings", sim.ratings, "Ratings CSV, adds a radar section");
  simulate_cmd->callback([&] { action = [&] { return cmd_simulate(sim, out, err); }; });

  SimulateArgs csv;
  auto* csv_cmd = app.add_subcommand("export-csv", "Like simulate, writing report.csv only");
  add_simulate_flags(csv_cmd, csv);
  csv_cmd->callback([&] { action = [&] { return cmd_export_csv(csv, err); }; });

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Compare scenario models under one catalog");
  compare_cmd->add_option("--models", cmp.models, "Comma-separated model files")->required()->delimiter(',');
  compare_cmd->add_option("--labels", cmp.labels, "Comma-separated labels")->delimiter(',');
  compare_cmd->add_option("--plans", cmp.plans, "Comma-separated purchase plans, '-' for none")->delimiter(',');
  compare_cmd->add_option("--catalog", cmp.catalog, "Price catalog JSON (default: $CLOUDCOST_CATALOG)");
  compare_cmd->add_option("--start", cmp.start, "First month, YYYY-MM")->required();
  compare_cmd->add_option("--end", cmp.end, "Last month, YYYY-MM")->required();
  compare_cmd->add_option("--out", cmp.out, "Directory for comparison.json");
  compare_cmd->callback([&] { action = [&] { return cmd_compare(cmp, out, err); }; });

  ProvidersArgs prov;
  auto* providers_cmd = app.add_subcommand("compare-providers", "Re-place a model on each mapped provider and compare");
  providers_cmd->add_option("--model", prov.model, "Deployment model JSON")->required();
  providers_cmd->add_option("--catalog", prov.catalog, "Price catalog JSON (default: $CLOUDCOST_CATALOG)");
  providers_cmd->add_option("--map", prov.map, "Provider map JSON")->required();
  providers_cmd->add_option("--start", prov.start, "First month, YYYY-MM")->required();
  providers_cmd->add_option("--end", prov.end, "Last month, YYYY-MM")->required();
  providers_cmd->add_option("--out", prov.out, "Directory for comparison.json");
  providers_cmd->callback([&] { action = [&] { return cmd_compare_providers(prov, out, err); }; });

  AssessArgs assess;
  auto* assess_cmd = app.add_subcommand("assess", "Category averages and important items from a rating sheet");
  assess_cmd->add_option("--items", assess.items, "Assessment items JSON")->required();
  assess_cmd->add_option("--ratings", assess.ratings, "Ratings CSV")->required();
  assess_cmd->add_option("--threshold", assess.threshold, "Minimum rating counted as important")
      ->check(CLI::Range(1, 5));
  assess_cmd->add_option("--out", assess.out, "Output directory")->required();
  assess_cmd->callback([&] { action = [&] { return cmd_assess(assess, out, err); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const MissingRateError& e) {
    err << "error: " << e.what() << "\n";
    return kMissingRate;
  } catch (const ValidationError& e) {
    print_diagnostics(err, e.diagnostics());
    return kValidationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
}

}  // namespace cloudcost::cli
