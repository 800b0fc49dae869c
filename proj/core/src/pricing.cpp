#include "cloudcost/pricing.hpp"

#include <algorithm>
#include <initializer_list>
#include <stdexcept>

#include <json.hpp>

#include "cloudcost/error.hpp"

namespace cloudcost {

using nlohmann::ordered_json;

namespace {

constexpr std::pair<Dimension, std::string_view> kDimensions[] = {
    {Dimension::vm_hours, "vm_hours"},
    {Dimension::storage_gb_month, "storage_gb_month"},
    {Dimension::io_in_requests, "io_in_requests"},
    {Dimension::io_out_requests, "io_out_requests"},
    {Dimension::io_gb, "io_gb"},
    {Dimension::data_in_gb, "data_in_gb"},
    {Dimension::data_out_gb, "data_out_gb"},
};

constexpr std::pair<TransferScope, std::string_view> kScopes[] = {
    {TransferScope::internet, "internet"},
    {TransferScope::intra_region, "intra_region"},
    {TransferScope::inter_region, "inter_region"},
};

void require_keys(const ordered_json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError(path, "unknown field '" + key + "'");
    }
  }
}

std::string get_string(const ordered_json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw SchemaError(path, std::string("missing field '") + key + "'");
  if (!j.at(key).is_string()) throw SchemaError(path + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

std::optional<std::string> get_optional_string(const ordered_json& j, const std::string& path, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_string(j, path, key);
}

template <typename T>
T get_decimal(const ordered_json& j, const std::string& path, const char* key) {
  const std::string text = get_string(j, path, key);
  try {
    return T::parse(text);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path + "." + key, e.what());
  }
}

Money get_price(const ordered_json& j, const std::string& path, const char* key) {
  const Money m = get_decimal<Money>(j, path, key);
  if (m < Money{}) throw SchemaError(path + "." + key, "negative price");
  return m;
}

RateEntry read_entry(const ordered_json& j, const std::string& path) {
  require_keys(j, path, {"provider", "region", "dimension", "sku", "scope", "price", "tiers"});
  RateEntry e;
  e.provider = get_string(j, path, "provider");
  e.region = get_string(j, path, "region");
  const std::string dim = get_string(j, path, "dimension");
  const auto d = dimension_from_string(dim);
  if (!d) throw SchemaError(path + ".dimension", "unknown dimension '" + dim + "'");
  e.dimension = *d;
  e.sku = get_optional_string(j, path, "sku");
  if (auto scope = get_optional_string(j, path, "scope")) {
    const auto s = scope_from_string(*scope);
    if (!s) throw SchemaError(path + ".scope", "unknown transfer scope '" + *scope + "'");
    e.scope = *s;
  }
  if (is_transfer(e.dimension) != e.scope.has_value()) {
    throw SchemaError(path, is_transfer(e.dimension) ? "transfer dimensions require a scope"
                                                     : "scope is only valid on transfer dimensions");
  }
  const bool flat = j.contains("price");
  const bool tiered = j.contains("tiers");
  if (flat == tiered) throw SchemaError(path, "exactly one of 'price' or 'tiers' is required");
  if (flat) {
    e.pricing = FlatPricing{get_price(j, path, "price")};
    return e;
  }
  const auto& tiers = j.at("tiers");
  if (!tiers.is_array() || tiers.empty()) throw SchemaError(path + ".tiers", "expected a non-empty array");
  TieredPricing tp;
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    const std::string tpath = path + ".tiers[" + std::to_string(i) + "]";
    require_keys(tiers[i], tpath, {"up_to", "price"});
    Tier t;
    t.unit_price = get_price(tiers[i], tpath, "price");
    if (tiers[i].contains("up_to") && !tiers[i].at("up_to").is_null()) {
      t.upper_bound = get_decimal<Quantity>(tiers[i], tpath, "up_to");
      if (*t.upper_bound <= Quantity{}) throw SchemaError(tpath + ".up_to", "tier bound must be positive");
    }
    if (!tp.tiers.empty()) {
      const Tier& prev = tp.tiers.back();
      if (!prev.upper_bound) throw SchemaError(tpath, "only the last tier may be unbounded");
      if (t.upper_bound && *t.upper_bound <= *prev.upper_bound) {
        throw SchemaError(tpath + ".up_to", "tier bounds must be strictly increasing");
      }
    }
    tp.tiers.push_back(t);
  }
  if (tp.tiers.back().upper_bound) throw SchemaError(path + ".tiers", "last tier must be unbounded");
  e.pricing = std::move(tp);
  return e;
}

InstanceSku read_sku(const ordered_json& j, const std::string& path) {
  require_keys(j, path, {"provider", "region", "name", "cpu_ghz", "ram_gb", "purchase_options"});
  InstanceSku s;
  s.provider = get_string(j, path, "provider");
  s.region = get_string(j, path, "region");
  s.name = get_string(j, path, "name");
  for (const char* key : {"cpu_ghz", "ram_gb"}) {
    if (!j.contains(key)) continue;
    if (!j.at(key).is_number()) throw SchemaError(path + "." + key, "expected a number");
    (std::string_view(key) == "cpu_ghz" ? s.cpu_ghz : s.ram_gb) = j.at(key).get<double>();
  }
  if (!j.contains("purchase_options") || !j.at("purchase_options").is_array()) {
    throw SchemaError(path, "missing array 'purchase_options'");
  }
  const auto& options = j.at("purchase_options");
  for (std::size_t i = 0; i < options.size(); ++i) {
    const std::string opath = path + ".purchase_options[" + std::to_string(i) + "]";
    require_keys(options[i], opath, {"kind", "hourly_rate", "term_months", "upfront_fee"});
    PurchaseOption o;
    const std::string kind = get_string(options[i], opath, "kind");
    if (kind == "on_demand") {
      o.kind = PurchaseKind::on_demand;
      if (options[i].contains("term_months") || options[i].contains("upfront_fee")) {
        throw SchemaError(opath, "on_demand options take no term or upfront fee");
      }
    } else if (kind == "reserved") {
      o.kind = PurchaseKind::reserved;
      const auto& term = options[i].contains("term_months") ? options[i].at("term_months") : ordered_json();
      if (!term.is_number_integer() || term.get<int>() <= 0) {
        throw SchemaError(opath + ".term_months", "reserved options need a positive integer term");
      }
      o.term_months = term.get<int>();
      o.upfront_fee = get_price(options[i], opath, "upfront_fee");
    } else {
      throw SchemaError(opath + ".kind", "unknown purchase option '" + kind + "'");
    }
    o.hourly_rate = get_price(options[i], opath, "hourly_rate");
    s.purchase_options.push_back(o);
  }
  const auto on_demand_count = std::count_if(s.purchase_options.begin(), s.purchase_options.end(),
                                             [](const PurchaseOption& o) { return o.kind == PurchaseKind::on_demand; });
  if (on_demand_count != 1) throw SchemaError(path, "exactly one on_demand purchase option is required");
  return s;
}

}  // namespace

std::string_view to_string(Dimension dimension) {
  for (const auto& [d, name] : kDimensions) {
    if (d == dimension) return name;
  }
  return "?";
}

std::string_view to_string(TransferScope scope) {
  for (const auto& [s, name] : kScopes) {
    if (s == scope) return name;
  }
  return "?";
}

std::optional<Dimension> dimension_from_string(std::string_view text) {
  for (const auto& [d, name] : kDimensions) {
    if (name == text) return d;
  }
  return std::nullopt;
}

std::optional<TransferScope> scope_from_string(std::string_view text) {
  for (const auto& [s, name] : kScopes) {
    if (name == text) return s;
  }
  return std::nullopt;
}

bool is_transfer(Dimension dimension) {
  return dimension == Dimension::data_in_gb || dimension == Dimension::data_out_gb;
}

std::string_view unit_of(Dimension dimension) {
  switch (dimension) {
    case Dimension::vm_hours: return "hour";
    case Dimension::storage_gb_month: return "GB-month";
    case Dimension::io_in_requests:
    case Dimension::io_out_requests: return "request";
    case Dimension::io_gb:
    case Dimension::data_in_gb:
    case Dimension::data_out_gb: return "GB";
  }
  return "";
}

std::string rate_key(std::string_view provider, std::string_view region, Dimension dimension,
                     const std::optional<std::string>& sku, const std::optional<TransferScope>& scope) {
  std::string key = std::string(provider) + "/" + std::string(region) + "/" + std::string(to_string(dimension));
  if (sku) key += "/" + *sku;
  if (scope) key += "/" + std::string(to_string(*scope));
  return key;
}

std::string RateEntry::key() const { return rate_key(provider, region, dimension, sku, scope); }

std::string RateEntry::basis() const {
  const std::string unit(unit_of(dimension));
  if (const auto* flat = std::get_if<FlatPricing>(&pricing)) return flat->unit_price.to_string(6) + "/" + unit;
  std::string out = "tiered[";
  const auto& tiers = std::get<TieredPricing>(pricing).tiers;
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    if (i) out += ',';
    out += tiers[i].upper_bound ? tiers[i].upper_bound->to_plain_string() : "inf";
    out += '@';
    out += tiers[i].unit_price.to_string(6);
  }
  return out + "]/" + unit;
}

const PurchaseOption& InstanceSku::on_demand() const {
  for (const PurchaseOption& o : purchase_options) {
    if (o.kind == PurchaseKind::on_demand) return o;
  }
  throw Error("sku '" + name + "' has no on_demand option");
}

const PurchaseOption* InstanceSku::reserved(std::optional<int> term_months) const {
  const PurchaseOption* found = nullptr;
  for (const PurchaseOption& o : purchase_options) {
    if (o.kind != PurchaseKind::reserved) continue;
    if (term_months && o.term_months != *term_months) continue;
    if (found) return nullptr;
    found = &o;
  }
  return found;
}

PriceCatalog::Key PriceCatalog::make_key(std::string_view provider, std::string_view region, Dimension dimension,
                                         const std::optional<std::string>& sku,
                                         const std::optional<TransferScope>& scope) {
  // sku "" never collides with a real sku because empty sku names are rejected at load.
  return {std::string(provider), std::string(region), dimension, sku.value_or(""),
          scope ? static_cast<int>(*scope) : -1};
}

PriceCatalog::PriceCatalog(std::string currency, std::vector<RateEntry> entries, std::vector<InstanceSku> skus)
    : currency_(std::move(currency)), entries_(std::move(entries)), skus_(std::move(skus)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const RateEntry& e = entries_[i];
    if (e.sku && e.sku->empty()) throw SchemaError("entries[" + std::to_string(i) + "]", "empty sku");
    if (!index_.emplace(make_key(e.provider, e.region, e.dimension, e.sku, e.scope), i).second) {
      throw SchemaError("entries[" + std::to_string(i) + "]", "duplicate rate key " + e.key());
    }
  }
  for (std::size_t i = 0; i < skus_.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (skus_[k].provider == skus_[i].provider && skus_[k].region == skus_[i].region &&
          skus_[k].name == skus_[i].name) {
        throw SchemaError("skus[" + std::to_string(i) + "]", "duplicate sku " + skus_[i].provider + "/" +
                                                                 skus_[i].region + "/" + skus_[i].name);
      }
    }
    const InstanceSku& s = skus_[i];
    const Money on_demand = s.on_demand().hourly_rate;
    for (const PurchaseOption& o : s.purchase_options) {
      if (o.kind == PurchaseKind::reserved && o.hourly_rate > on_demand) {
        warnings_.push_back("sku " + s.provider + "/" + s.region + "/" + s.name + ": reserved hourly rate " +
                            o.hourly_rate.to_string(6) + " exceeds on-demand rate " + on_demand.to_string(6));
      }
    }
  }
}

const RateEntry* PriceCatalog::find_rate(std::string_view provider, std::string_view region, Dimension dimension,
                                         const std::optional<std::string>& sku,
                                         const std::optional<TransferScope>& scope) const {
  const auto it = index_.find(make_key(provider, region, dimension, sku, scope));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const RateEntry& PriceCatalog::lookup_rate(std::string_view provider, std::string_view region, Dimension dimension,
                                           const std::optional<std::string>& sku,
                                           const std::optional<TransferScope>& scope) const {
  if (const RateEntry* e = find_rate(provider, region, dimension, sku, scope)) return *e;
  throw MissingRateError(rate_key(provider, region, dimension, sku, scope), "");
}

const InstanceSku& PriceCatalog::sku(std::string_view provider, std::string_view region,
                                     std::string_view name) const {
  for (const InstanceSku& s : skus_) {
    if (s.provider == provider && s.region == region && s.name == name) return s;
  }
  throw MissingRateError(std::string(provider) + "/" + std::string(region) + "/sku/" + std::string(name), "");
}

const InstanceSku& PriceCatalog::match_sku(std::string_view provider, std::string_view region, double cpu_ghz,
                                           double ram_gb) const {
  const InstanceSku* best = nullptr;
  for (const InstanceSku& s : skus_) {
    if (s.provider != provider || s.region != region || !s.cpu_ghz || !s.ram_gb) continue;
    if (*s.cpu_ghz < cpu_ghz || *s.ram_gb < ram_gb) continue;
    if (!best || s.on_demand().hourly_rate < best->on_demand().hourly_rate ||
        (s.on_demand().hourly_rate == best->on_demand().hourly_rate && s.name < best->name)) {
      best = &s;
    }
  }
  if (!best) {
    throw MissingRateError(std::string(provider) + "/" + std::string(region) + "/sku/>=" + std::to_string(cpu_ghz) +
                               "GHz," + std::to_string(ram_gb) + "GB",
                           "");
  }
  return *best;
}

PriceCatalog load_catalog(std::string_view document) {
  ordered_json root;
  try {
    root = ordered_json::parse(document.begin(), document.end());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  require_keys(root, "$", {"currency", "entries", "skus", "$schema", "description"});
  const std::string currency = get_string(root, "$", "currency");
  std::vector<RateEntry> entries;
  if (root.contains("entries")) {
    if (!root.at("entries").is_array()) throw SchemaError("$.entries", "expected an array");
    for (std::size_t i = 0; i < root.at("entries").size(); ++i) {
      entries.push_back(read_entry(root.at("entries")[i], "$.entries[" + std::to_string(i) + "]"));
    }
  }
  std::vector<InstanceSku> skus;
  if (root.contains("skus")) {
    if (!root.at("skus").is_array()) throw SchemaError("$.skus", "expected an array");
    for (std::size_t i = 0; i < root.at("skus").size(); ++i) {
      skus.push_back(read_sku(root.at("skus")[i], "$.skus[" + std::to_string(i) + "]"));
    }
  }
  return PriceCatalog(currency, std::move(entries), std::move(skus));
}

std::vector<TierCharge> tier_breakdown(const TieredPricing& pricing, Quantity quantity) {
  std::vector<TierCharge> out;
  Quantity lower;
  for (const Tier& tier : pricing.tiers) {
    if (quantity <= lower) break;
    const Quantity upper = tier.upper_bound ? std::min(*tier.upper_bound, quantity) : quantity;
    const Quantity portion = upper - lower;
    out.push_back({portion, tier.unit_price, tier.unit_price * portion});
    if (!tier.upper_bound) break;
    lower = *tier.upper_bound;
  }
  return out;
}

Money price_quantity(const RateEntry& entry, Quantity quantity) {
  if (quantity < Quantity{}) throw std::invalid_argument("negative quantity");
  if (const auto* flat = std::get_if<FlatPricing>(&entry.pricing)) return flat->unit_price * quantity;
  Money total;
  for (const TierCharge& c : tier_breakdown(std::get<TieredPricing>(entry.pricing), quantity)) total += c.cost;
  return total;
}

std::vector<std::pair<YearMonth, Money>> reservation_charges(const PurchaseOption& option, YearMonth first,
                                                             YearMonth last) {
  std::vector<std::pair<YearMonth, Money>> out;
  if (option.kind != PurchaseKind::reserved) throw std::invalid_argument("reservation charges need a reserved option");
  if (option.term_months <= 0) throw std::invalid_argument("reserved term must be positive");
  if (option.upfront_fee == Money{}) return out;
  for (YearMonth m = first; m <= last; m = m.plus(option.term_months)) out.emplace_back(m, option.upfront_fee);
  return out;
}

}  // namespace cloudcost
