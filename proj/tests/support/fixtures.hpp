#pragma once

#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "cloudcost/engine.hpp"
#include "cloudcost/model.hpp"
#include "cloudcost/pricing.hpp"

namespace fixture {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::string data(const std::string& name) { return read_file(std::string(CLOUDCOST_DATA_DIR) + "/" + name); }

inline cloudcost::Node vm(const std::string& id, const std::string& sku, double hours,
                          std::vector<std::string> patterns = {}, cloudcost::Placement at = {"aws", "us-east"}) {
  cloudcost::Node n;
  n.id = id;
  n.kind = cloudcost::NodeKind::virtual_machine;
  n.placement = at;
  n.vm = cloudcost::VmSpec{"linux", sku, std::nullopt};
  n.requirements.push_back({cloudcost::ResourceKind::vm_hours, hours, std::move(patterns)});
  return n;
}

inline cloudcost::Node remote(const std::string& id) {
  cloudcost::Node n;
  n.id = id;
  n.kind = cloudcost::NodeKind::remote_node;
  return n;
}

inline cloudcost::CommunicationPath path(const std::string& id, const std::string& from, const std::string& to,
                                         double gb) {
  return {id, from, to, {cloudcost::ResourceKind::data_link_gb, gb, {}}};
}

// One sku "small" in aws/us-east: on demand `hourly`, optional 36-month reservation.
inline cloudcost::InstanceSku sku(const std::string& name, const std::string& hourly,
                                  const std::string& reserved_hourly = "", const std::string& upfront = "",
                                  cloudcost::Placement at = {"aws", "us-east"}) {
  cloudcost::InstanceSku s{at.provider, at.region, name, std::nullopt, std::nullopt, {}};
  s.purchase_options.push_back({cloudcost::PurchaseKind::on_demand, cloudcost::Money::parse(hourly), 0, {}});
  if (!reserved_hourly.empty()) {
    s.purchase_options.push_back({cloudcost::PurchaseKind::reserved, cloudcost::Money::parse(reserved_hourly), 36,
                                  cloudcost::Money::parse(upfront)});
  }
  return s;
}

inline cloudcost::RateEntry transfer(cloudcost::Dimension d, cloudcost::TransferScope scope, const std::string& price,
                                     cloudcost::Placement at = {"aws", "us-east"}) {
  return {at.provider, at.region, d, std::nullopt, scope, cloudcost::FlatPricing{cloudcost::Money::parse(price)}};
}

inline cloudcost::SimulationWindow window(const char* start, const char* end) {
  return {cloudcost::YearMonth::parse(start), cloudcost::YearMonth::parse(end)};
}

}  // namespace fixture
