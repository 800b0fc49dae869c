#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "cloudcost/calendar.hpp"
#include "cloudcost/money.hpp"

namespace cloudcost {

enum class Dimension {
  vm_hours,
  storage_gb_month,
  io_in_requests,
  io_out_requests,
  io_gb,
  data_in_gb,
  data_out_gb,
};

enum class TransferScope { internet, intra_region, inter_region };

std::string_view to_string(Dimension dimension);
std::string_view to_string(TransferScope scope);
std::optional<Dimension> dimension_from_string(std::string_view text);
std::optional<TransferScope> scope_from_string(std::string_view text);
bool is_transfer(Dimension dimension);
std::string_view unit_of(Dimension dimension);

struct Tier {
  std::optional<Quantity> upper_bound;  // nullopt = unbounded
  Money unit_price;

  friend bool operator==(const Tier&, const Tier&) = default;
};

struct FlatPricing {
  Money unit_price;

  friend bool operator==(const FlatPricing&, const FlatPricing&) = default;
};

// Graduated tiers: each tier charges only the part of the quantity inside it.
struct TieredPricing {
  std::vector<Tier> tiers;

  friend bool operator==(const TieredPricing&, const TieredPricing&) = default;
};

struct RateEntry {
  std::string provider;
  std::string region;
  Dimension dimension = Dimension::vm_hours;
  std::optional<std::string> sku;
  std::optional<TransferScope> scope;
  std::variant<FlatPricing, TieredPricing> pricing;

  // "provider/region/dimension[/sku][/scope]"
  std::string key() const;
  // Human readable pricing basis, e.g. "0.100000/hour" or "tiered[100@1.000000,inf@0.500000]/GB".
  std::string basis() const;
};

enum class PurchaseKind { on_demand, reserved };

struct PurchaseOption {
  PurchaseKind kind = PurchaseKind::on_demand;
  Money hourly_rate;
  int term_months = 0;  // reserved only
  Money upfront_fee;    // reserved only
};

struct InstanceSku {
  std::string provider;
  std::string region;
  std::string name;
  std::optional<double> cpu_ghz;
  std::optional<double> ram_gb;
  std::vector<PurchaseOption> purchase_options;

  const PurchaseOption& on_demand() const;
  // Reserved option with the given term, or the only reserved option when
  // `term_months` is empty. nullptr when there is no unique match.
  const PurchaseOption* reserved(std::optional<int> term_months) const;
};

class PriceCatalog {
 public:
  PriceCatalog(std::string currency, std::vector<RateEntry> entries, std::vector<InstanceSku> skus);

  const std::string& currency() const { return currency_; }
  const std::vector<RateEntry>& entries() const { return entries_; }
  const std::vector<InstanceSku>& skus() const { return skus_; }
  // Non-fatal findings, e.g. a reserved rate above its on-demand rate.
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Throws MissingRateError naming the full key.
  const RateEntry& lookup_rate(std::string_view provider, std::string_view region, Dimension dimension,
                               const std::optional<std::string>& sku = std::nullopt,
                               const std::optional<TransferScope>& scope = std::nullopt) const;
  const RateEntry* find_rate(std::string_view provider, std::string_view region, Dimension dimension,
                             const std::optional<std::string>& sku = std::nullopt,
                             const std::optional<TransferScope>& scope = std::nullopt) const;

  // Throws MissingRateError when the SKU is unknown.
  const InstanceSku& sku(std::string_view provider, std::string_view region, std::string_view name) const;
  // Cheapest on-demand SKU whose declared cpu/ram cover the request (ties by
  // name). Throws MissingRateError when none qualifies.
  const InstanceSku& match_sku(std::string_view provider, std::string_view region, double cpu_ghz,
                               double ram_gb) const;

 private:
  using Key = std::tuple<std::string, std::string, Dimension, std::string, int>;
  static Key make_key(std::string_view provider, std::string_view region, Dimension dimension,
                      const std::optional<std::string>& sku, const std::optional<TransferScope>& scope);

  std::string currency_;
  std::vector<RateEntry> entries_;
  std::vector<InstanceSku> skus_;
  std::vector<std::string> warnings_;
  std::map<Key, std::size_t> index_;
};

std::string rate_key(std::string_view provider, std::string_view region, Dimension dimension,
                     const std::optional<std::string>& sku, const std::optional<TransferScope>& scope);

// Parses and validates a catalog document. Prices and tier bounds are decimal
// strings. Throws ParseError or SchemaError.
PriceCatalog load_catalog(std::string_view document);

// Flat: quantity × price. Tiered: sum over tiers of (portion inside tier) × tier price.
Money price_quantity(const RateEntry& entry, Quantity quantity);

struct TierCharge {
  Quantity quantity;
  Money unit_price;
  Money cost;
};
std::vector<TierCharge> tier_breakdown(const TieredPricing& pricing, Quantity quantity);

// Upfront fee at the first month of the window and at every term renewal
// inside it. Zero fees produce no charges.
std::vector<std::pair<YearMonth, Money>> reservation_charges(const PurchaseOption& option, YearMonth first,
                                                             YearMonth last);

}  // namespace cloudcost
