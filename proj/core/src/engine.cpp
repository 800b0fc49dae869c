#include "cloudcost/engine.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

#include "cloudcost/error.hpp"

namespace cloudcost {

using nlohmann::ordered_json;

namespace {

Dimension dimension_for(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::vm_hours: return Dimension::vm_hours;
    case ResourceKind::storage_gb: return Dimension::storage_gb_month;
    case ResourceKind::io_in_requests: return Dimension::io_in_requests;
    case ResourceKind::io_out_requests: return Dimension::io_out_requests;
    case ResourceKind::io_gb: return Dimension::io_gb;
    case ResourceKind::data_in_gb: return Dimension::data_in_gb;
    case ResourceKind::data_out_gb: return Dimension::data_out_gb;
    case ResourceKind::data_link_gb: break;
  }
  throw Error("data_link_gb has no direct pricing dimension");
}

TransferScope scope_between(const Placement& a, const Placement& b) {
  if (a.provider != b.provider) return TransferScope::internet;
  return a.region == b.region ? TransferScope::intra_region : TransferScope::inter_region;
}

// How one line gets its money: a catalog rate, or a sku purchase option.
struct Pricer {
  const RateEntry* rate = nullptr;
  std::optional<PurchaseOption> option;

  Money price(Quantity q) const { return rate ? price_quantity(*rate, q) : option->hourly_rate * q; }
  std::string basis() const {
    if (rate) return rate->basis();
    if (option->kind == PurchaseKind::on_demand) return "on_demand " + option->hourly_rate.to_string(6) + "/hour";
    return "reserved " + std::to_string(option->term_months) + "m " + option->hourly_rate.to_string(6) + "/hour";
  }
};

class Simulation {
 public:
  Simulation(const DeploymentModel& model, const PriceCatalog& catalog, const SimulationWindow& window,
             const PurchasePlan& plan, YearMonth origin)
      : model_(model), catalog_(catalog), window_(window), plan_(plan), origin_(origin) {}

  CostReport run() {
    report_.window = window_;
    report_.currency = catalog_.currency();
    report_.warnings = catalog_.warnings();
    check_plan();
    for (const Node& node : model_.nodes) simulate_node(node);
    for (const CommunicationPath& path : model_.paths) simulate_path(path);

    auto order = [](const auto& a, const auto& b) {
      return std::tie(a.month, a.subject, a.dimension) < std::tie(b.month, b.subject, b.dimension);
    };
    std::stable_sort(report_.lines.begin(), report_.lines.end(), order);
    std::stable_sort(report_.usage.begin(), report_.usage.end(), order);
    return std::move(report_);
  }

 private:
  void check_plan() {
    for (const auto& [node_id, choice] : plan_) {
      const Node* node = model_.find_node(node_id);
      if (!node) throw ReferenceError(node_id, "purchase plan names unknown node '" + node_id + "'");
      if (choice.kind == PurchaseKind::reserved && node->kind != NodeKind::virtual_machine) {
        throw Error("purchase plan reserves non-VM node '" + node_id + "'");
      }
    }
  }

  std::vector<double> series(const ResourceRequirement& requirement, const std::string& subject) {
    const UsageSchedule schedule = to_schedule(requirement);
    std::vector<ClampEvent> clamps;
    std::vector<double> all = monthly_series(schedule, origin_, window_.end, &clamps);
    if (!clamps.empty()) {
      report_.warnings.push_back(subject + " " + std::string(to_string(requirement.kind)) + ": usage clamped at 0 on " +
                                 std::to_string(clamps.size()) + " occasion(s), first on " +
                                 to_string(clamps.front().date) + " (pattern " +
                                 std::to_string(clamps.front().pattern_index + 1) + ")");
    }
    const auto skip = static_cast<std::size_t>(window_.start.index() - origin_.index());
    return std::vector<double>(all.begin() + static_cast<std::ptrdiff_t>(skip), all.end());
  }

  void add_line(YearMonth month, const std::string& subject, Dimension dimension, double amount,
                const Pricer& pricer, const Node& charged) {
    const Quantity q = Quantity::from_double(amount);
    CostLine line;
    line.month = month;
    line.subject = subject;
    line.dimension = std::string(to_string(dimension));
    line.quantity = q;
    line.unit = std::string(unit_of(dimension));
    line.basis = pricer.basis();
    line.cost = pricer.price(q).rounded(2);
    if (const Group* g = model_.group_of(charged.id)) line.group = g->id;
    line.provider = charged.placement->provider;
    line.region = charged.placement->region;
    report_.lines.push_back(std::move(line));
  }

  void add_usage(YearMonth month, const std::string& subject, Dimension dimension, double amount) {
    report_.usage.push_back({month, subject, std::string(to_string(dimension)), amount,
                             std::string(unit_of(dimension))});
  }

  Pricer resolve(const Node& node, Dimension dimension, const std::optional<TransferScope>& scope) {
    const Placement& at = *node.placement;
    std::optional<std::string> sku;
    if (dimension == Dimension::vm_hours) {
      if (node.kind == NodeKind::virtual_machine) {
        const InstanceSku& instance = node.vm->sku ? catalog_.sku(at.provider, at.region, *node.vm->sku)
                                                   : catalog_.match_sku(at.provider, at.region, node.vm->raw->cpu_ghz,
                                                                        node.vm->raw->ram_gb);
        const auto choice = plan_.find(node.id);
        if (choice != plan_.end() && choice->second.kind == PurchaseKind::reserved) {
          const PurchaseOption* option = instance.reserved(choice->second.term_months);
          if (!option) {
            throw MissingRateError(at.provider + "/" + at.region + "/sku/" + instance.name + "/reserved" +
                                       (choice->second.term_months ? "/" + std::to_string(*choice->second.term_months)
                                                                   : std::string()),
                                   "node '" + node.id + "' dimension vm_hours");
          }
          return Pricer{nullptr, *option};
        }
        // A vm_hours entry overrides the sku's own on-demand rate.
        if (const RateEntry* rate = catalog_.find_rate(at.provider, at.region, dimension, instance.name, std::nullopt)) {
          return Pricer{rate, std::nullopt};
        }
        return Pricer{nullptr, instance.on_demand()};
      } else if (node.database && node.database->sku) {
        if (const RateEntry* rate = catalog_.find_rate(at.provider, at.region, dimension, node.database->sku, std::nullopt)) {
          return Pricer{rate, std::nullopt};
        }
        return Pricer{nullptr, catalog_.sku(at.provider, at.region, *node.database->sku).on_demand()};
      }
    } else if (!is_transfer(dimension)) {
      if (node.storage) sku = node.storage->storage_type;
      if (node.database) sku = node.database->storage_type;
    }
    return Pricer{&catalog_.lookup_rate(at.provider, at.region, dimension, sku, scope), std::nullopt};
  }

  Pricer resolve_or_throw(const Node& node, Dimension dimension, const std::optional<TransferScope>& scope,
                          const std::string& subject) {
    try {
      return resolve(node, dimension, scope);
    } catch (const MissingRateError& e) {
      throw MissingRateError(e.key(), "'" + subject + "' dimension " + std::string(to_string(dimension)));
    }
  }

  void simulate_node(const Node& node) {
    const bool priced = node.kind != NodeKind::remote_node;
    for (const ResourceRequirement& req : node.requirements) {
      const Dimension dimension = dimension_for(req.kind);
      const std::vector<double> values = series(req, node.id);
      if (!priced) {
        report_.warnings.push_back(node.id + " " + std::string(to_string(req.kind)) +
                                   ": requirement on remote node is not priced");
        for (int i = 0; i < window_.months(); ++i) add_usage(window_.start.plus(i), node.id, dimension, values[i]);
        continue;
      }
      const std::optional<TransferScope> scope =
          is_transfer(dimension) ? std::optional(TransferScope::internet) : std::nullopt;
      const Pricer pricer = resolve_or_throw(node, dimension, scope, node.id);
      for (int i = 0; i < window_.months(); ++i) {
        const YearMonth month = window_.start.plus(i);
        add_usage(month, node.id, dimension, values[i]);
        add_line(month, node.id, dimension, values[i], pricer, node);
      }
    }
    add_reservation(node);
  }

  void add_reservation(const Node& node) {
    const auto choice = plan_.find(node.id);
    if (choice == plan_.end() || choice->second.kind != PurchaseKind::reserved) return;
    const Pricer pricer = resolve_or_throw(node, Dimension::vm_hours, std::nullopt, node.id);
    const PurchaseOption& option = *pricer.option;
    for (const auto& [month, fee] : reservation_charges(option, origin_, window_.end)) {
      if (month < window_.start) continue;
      CostLine line;
      line.month = month;
      line.subject = node.id;
      line.dimension = std::string(kReservationUpfront);
      line.quantity = Quantity::from_units(1);
      line.unit = "fee";
      line.basis = "upfront " + std::to_string(option.term_months) + "m " + fee.to_string(6);
      line.cost = fee.rounded(2);
      if (const Group* g = model_.group_of(node.id)) line.group = g->id;
      line.provider = node.placement->provider;
      line.region = node.placement->region;
      report_.lines.push_back(std::move(line));
    }
  }

  void simulate_path(const CommunicationPath& path) {
    const Node& from = *model_.find_node(path.from_node);
    const Node& to = *model_.find_node(path.to_node);
    const bool from_cloud = from.kind != NodeKind::remote_node;
    const bool to_cloud = to.kind != NodeKind::remote_node;
    const TransferScope scope =
        from_cloud && to_cloud ? scope_between(*from.placement, *to.placement) : TransferScope::internet;
    const std::vector<double> values = series(path.volume, path.id);

    std::optional<Pricer> out_pricer;
    std::optional<Pricer> in_pricer;
    if (from_cloud) out_pricer = resolve_or_throw(from, Dimension::data_out_gb, scope, path.id);
    if (to_cloud) in_pricer = resolve_or_throw(to, Dimension::data_in_gb, scope, path.id);
    for (int i = 0; i < window_.months(); ++i) {
      const YearMonth month = window_.start.plus(i);
      if (out_pricer) {
        add_usage(month, path.id, Dimension::data_out_gb, values[i]);
        add_line(month, path.id, Dimension::data_out_gb, values[i], *out_pricer, from);
      }
      if (in_pricer) {
        add_usage(month, path.id, Dimension::data_in_gb, values[i]);
        add_line(month, path.id, Dimension::data_in_gb, values[i], *in_pricer, to);
      }
    }
  }

  const DeploymentModel& model_;
  const PriceCatalog& catalog_;
  const SimulationWindow& window_;
  const PurchasePlan& plan_;
  YearMonth origin_;
  CostReport report_;
};

std::string rollup_key(const CostLine& line, RollupKey by) {
  switch (by) {
    case RollupKey::group: return line.group.empty() ? std::string(kUngrouped) : line.group;
    case RollupKey::node: return line.subject;
    case RollupKey::dimension: return line.dimension;
    case RollupKey::provider: return line.provider;
    case RollupKey::month: return line.month.to_string();
  }
  return {};
}

}  // namespace

void SimulationWindow::check() const {
  if (end < start) throw WindowError("simulation window ends (" + end.to_string() + ") before it starts (" +
                                     start.to_string() + ")");
}

namespace {

PurchasePlan read_plan(const ordered_json& root, const std::string& where) {
  if (!root.is_object()) throw SchemaError(where, "expected an object of node id -> purchase choice");
  PurchasePlan plan;
  for (const auto& [node_id, value] : root.items()) {
    const std::string path = where + "." + node_id;
    if (!value.is_object()) throw SchemaError(path, "expected an object");
    PurchaseChoice choice;
    for (const auto& [key, v] : value.items()) {
      if (key == "option") {
        if (!v.is_string()) throw SchemaError(path + ".option", "expected a string");
        const std::string option = v.get<std::string>();
        if (option == "on_demand") {
          choice.kind = PurchaseKind::on_demand;
        } else if (option == "reserved") {
          choice.kind = PurchaseKind::reserved;
        } else {
          throw SchemaError(path + ".option", "unknown purchase option '" + option + "'");
        }
      } else if (key == "term_months") {
        if (!v.is_number_integer() || v.get<int>() <= 0) {
          throw SchemaError(path + ".term_months", "expected a positive integer");
        }
        choice.term_months = v.get<int>();
      } else {
        throw SchemaError(path, "unknown field '" + key + "'");
      }
    }
    plan.emplace(node_id, choice);
  }
  return plan;
}

}  // namespace

PurchasePlan parse_purchase_plan(std::string_view document) {
  ordered_json root;
  try {
    root = ordered_json::parse(document.begin(), document.end());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  return read_plan(root, "$");
}

Money CostReport::total() const {
  Money sum;
  for (const CostLine& l : lines) sum += l.cost;
  return sum;
}

std::vector<Money> CostReport::monthly_totals() const {
  std::vector<Money> out(static_cast<std::size_t>(window.months()));
  for (const CostLine& l : lines) out.at(static_cast<std::size_t>(l.month.index() - window.start.index())) += l.cost;
  return out;
}

CostReport simulate(const DeploymentModel& model, const PriceCatalog& catalog, const SimulationWindow& window,
                    const PurchasePlan& plan, const SimulateOptions& options) {
  window.check();
  const YearMonth origin = options.usage_origin.value_or(window.start);
  if (window.start < origin) throw WindowError("usage origin is after the window start");
  std::vector<Diagnostic> diagnostics = validate(model);
  if (has_errors(diagnostics)) throw ValidationError(std::move(diagnostics));
  return Simulation(model, catalog, window, plan, origin).run();
}

std::string_view to_string(RollupKey key) {
  switch (key) {
    case RollupKey::group: return "group";
    case RollupKey::node: return "node";
    case RollupKey::dimension: return "dimension";
    case RollupKey::provider: return "provider";
    case RollupKey::month: return "month";
  }
  return "?";
}

std::optional<RollupKey> rollup_key_from_string(std::string_view text) {
  for (RollupKey k : {RollupKey::group, RollupKey::node, RollupKey::dimension, RollupKey::provider, RollupKey::month}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::vector<std::pair<std::string, Money>> rollup(const CostReport& report, RollupKey by) {
  std::map<std::string, Money> totals;
  for (const CostLine& line : report.lines) totals[rollup_key(line, by)] += line.cost;
  return {totals.begin(), totals.end()};
}

SummaryRow summarize(std::span<const Money> monthly, std::string label) {
  if (monthly.empty()) throw Error("cannot summarize an empty series");
  SummaryRow row;
  row.label = std::move(label);
  row.months = static_cast<int>(monthly.size());
  row.first_month = monthly.front();
  for (const Money& m : monthly) row.total += m;
  row.monthly_avg = row.months == 1 ? row.total : (row.total - row.first_month).divided_by(row.months - 1);
  return row;
}

SummaryRow summarize(const CostReport& report, std::string label) {
  const std::vector<Money> monthly = report.monthly_totals();
  return summarize(monthly, std::move(label));
}

const ComparisonRow& ComparisonTable::row(std::string_view label) const {
  for (const ComparisonRow& r : rows) {
    if (r.summary.label == label) return r;
  }
  throw Error("no comparison row labelled '" + std::string(label) + "'");
}

ComparisonTable compare(std::vector<SummaryRow> rows) {
  if (rows.size() < 2) throw Error("comparison needs at least two rows");
  ComparisonTable table;
  const SummaryRow* base = &rows.front();
  for (const SummaryRow& r : rows) {
    if (r.total < base->total || (r.total == base->total && r.label < base->label)) base = &r;
  }
  std::vector<std::string> tied;
  for (const SummaryRow& r : rows) {
    if (r.total == base->total) tied.push_back(r.label);
  }
  if (tied.size() > 1) {
    std::string names;
    for (const std::string& t : tied) names += (names.empty() ? "" : ", ") + t;
    table.warnings.push_back("tie for cheapest total between " + names + "; baseline is '" + base->label + "'");
  }
  table.baseline_label = base->label;
  const Money base_total = base->total;
  for (SummaryRow& r : rows) {
    ComparisonRow row;
    row.delta = r.total - base_total;
    if (&r != base) {
      if (base_total > Money{}) {
        // round(total / base) with halves rounded up, in exact integer arithmetic
        const detail::int128 num = static_cast<detail::int128>(r.total.micros()) * 2 + base_total.micros();
        row.multiple = static_cast<std::int64_t>(num / (static_cast<detail::int128>(base_total.micros()) * 2));
        row.difference = "+" + std::to_string(*row.multiple) + "x";
      } else {
        row.difference = "n/a";
      }
    }
    row.summary = std::move(r);
    table.rows.push_back(std::move(row));
  }
  return table;
}

ScenarioComparison compare_scenarios(std::span<const Scenario> scenarios, const PriceCatalog& catalog,
                                     const SimulationWindow& window) {
  ScenarioComparison out;
  std::vector<SummaryRow> rows;
  for (const Scenario& s : scenarios) {
    out.reports.push_back(simulate(s.model, catalog, window, s.plan));
    rows.push_back(summarize(out.reports.back(), s.label));
  }
  out.table = compare(std::move(rows));
  return out;
}

std::vector<ProviderTarget> parse_provider_map(std::string_view document) {
  ordered_json root;
  try {
    root = ordered_json::parse(document.begin(), document.end());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!root.is_object() || !root.contains("targets") || !root.at("targets").is_array()) {
    throw SchemaError("$", "expected {\"targets\": [...]}");
  }
  for (const auto& [key, _] : root.items()) {
    if (key != "targets") throw SchemaError("$", "unknown field '" + key + "'");
  }
  std::vector<ProviderTarget> out;
  const auto& targets = root.at("targets");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string path = "$.targets[" + std::to_string(i) + "]";
    const auto& t = targets[i];
    if (!t.is_object()) throw SchemaError(path, "expected an object");
    ProviderTarget target;
    for (const auto& [key, v] : t.items()) {
      if (key == "label" || key == "provider" || key == "region") {
        if (!v.is_string() || v.get<std::string>().empty()) throw SchemaError(path + "." + key, "expected a string");
        (key == "label" ? target.label : key == "provider" ? target.placement.provider : target.placement.region) =
            v.get<std::string>();
      } else if (key == "sku_map" || key == "storage_map") {
        if (!v.is_object()) throw SchemaError(path + "." + key, "expected an object");
        auto& dest = key == "sku_map" ? target.sku_map : target.storage_map;
        for (const auto& [from, to] : v.items()) {
          if (!to.is_string()) throw SchemaError(path + "." + key + "." + from, "expected a string");
          dest.emplace(from, to.get<std::string>());
        }
      } else if (key == "plan") {
        target.plan = read_plan(v, path + ".plan");
      } else {
        throw SchemaError(path, "unknown field '" + key + "'");
      }
    }
    if (target.label.empty() || target.placement.provider.empty() || target.placement.region.empty()) {
      throw SchemaError(path, "label, provider and region are required");
    }
    out.push_back(std::move(target));
  }
  return out;
}

DeploymentModel retarget(const DeploymentModel& model, const ProviderTarget& target) {
  DeploymentModel out = model;
  auto rename = [](std::optional<std::string>& name, const std::map<std::string, std::string>& map) {
    if (!name) return;
    if (const auto it = map.find(*name); it != map.end()) name = it->second;
  };
  for (Node& node : out.nodes) {
    if (node.kind == NodeKind::remote_node) continue;
    node.placement = target.placement;
    if (node.vm) rename(node.vm->sku, target.sku_map);
    if (node.storage) rename(node.storage->storage_type, target.storage_map);
    if (node.database) {
      rename(node.database->sku, target.sku_map);
      rename(node.database->storage_type, target.storage_map);
    }
  }
  return out;
}

}  // namespace cloudcost
