#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cloudcost/diagnostic.hpp"
#include "cloudcost/elasticity.hpp"

namespace cloudcost {

enum class NodeKind { virtual_machine, virtual_storage, hosted_database, remote_node };

enum class ResourceKind {
  vm_hours,
  storage_gb,
  io_in_requests,
  io_out_requests,
  io_gb,
  data_in_gb,
  data_out_gb,
  data_link_gb,
};

enum class ArtifactKind { application, data_set };

std::string_view to_string(NodeKind kind);
std::string_view to_string(ResourceKind kind);
std::string_view to_string(ArtifactKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view text);
std::optional<ResourceKind> resource_kind_from_string(std::string_view text);
std::optional<ArtifactKind> artifact_kind_from_string(std::string_view text);

// Which requirement kinds a node kind may carry. data_link_gb lives on paths only.
bool requirement_allowed(NodeKind node, ResourceKind resource);
QuantityClass quantity_class(ResourceKind kind);

struct Placement {
  std::string provider;
  std::string region;

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct RawSpec {
  double cpu_ghz = 0.0;
  double ram_gb = 0.0;

  friend bool operator==(const RawSpec&, const RawSpec&) = default;
};

// A VM is sized either by catalog server type or by raw specification.
struct VmSpec {
  std::string operating_system;
  std::optional<std::string> sku;
  std::optional<RawSpec> raw;

  friend bool operator==(const VmSpec&, const VmSpec&) = default;
};

struct StorageSpec {
  std::optional<std::string> storage_type;

  friend bool operator==(const StorageSpec&, const StorageSpec&) = default;
};

struct DatabaseSpec {
  std::string engine;
  std::optional<std::string> sku;           // prices vm_hours
  std::optional<std::string> storage_type;  // prices the storage family

  friend bool operator==(const DatabaseSpec&, const DatabaseSpec&) = default;
};

struct ResourceRequirement {
  ResourceKind kind = ResourceKind::vm_hours;
  double baseline = 0.0;
  std::vector<std::string> patterns;

  friend bool operator==(const ResourceRequirement&, const ResourceRequirement&) = default;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::virtual_machine;
  std::optional<Placement> placement;
  std::optional<VmSpec> vm;
  std::optional<StorageSpec> storage;
  std::optional<DatabaseSpec> database;
  std::vector<ResourceRequirement> requirements;

  friend bool operator==(const Node&, const Node&) = default;
};

struct ArtifactItem {
  std::string id;
  ArtifactKind kind = ArtifactKind::application;
  std::string label;

  friend bool operator==(const ArtifactItem&, const ArtifactItem&) = default;
};

struct DeploymentBinding {
  std::string artifact_id;
  std::string node_id;

  friend bool operator==(const DeploymentBinding&, const DeploymentBinding&) = default;
};

// Data flowing from `from_node` to `to_node`, in GB per month.
struct CommunicationPath {
  std::string id;
  std::string from_node;
  std::string to_node;
  ResourceRequirement volume{ResourceKind::data_link_gb, 0.0, {}};

  friend bool operator==(const CommunicationPath&, const CommunicationPath&) = default;
};

struct Group {
  std::string id;
  std::string label;
  std::vector<std::string> node_ids;

  friend bool operator==(const Group&, const Group&) = default;
};

struct DeploymentModel {
  std::string name;
  std::vector<Node> nodes;
  std::vector<ArtifactItem> artifacts;
  std::vector<DeploymentBinding> bindings;
  std::vector<CommunicationPath> paths;
  std::vector<Group> groups;

  const Node* find_node(std::string_view id) const;
  const CommunicationPath* find_path(std::string_view id) const;
  // Group containing the node, or nullptr.
  const Group* group_of(std::string_view node_id) const;

  friend bool operator==(const DeploymentModel&, const DeploymentModel&) = default;
};

// Parses and validates a model document. Throws ParseError (JSON syntax),
// SchemaError (unknown keys or kinds, wrong types), ReferenceError (dangling
// id) or ValidationError (any other invariant).
DeploymentModel parse_model(std::string_view document);

// Syntax and schema checks only; pair with validate() to list every problem.
DeploymentModel read_model(std::string_view document);

// Canonical JSON text: fixed key order, two-space indent, trailing newline.
std::string serialize_model(const DeploymentModel& model);

// All invariant violations, sorted by location path. Never throws.
std::vector<Diagnostic> validate(const DeploymentModel& model);

UsageSchedule to_schedule(const ResourceRequirement& requirement);

// Directed graph over the model: one vertex per node (same index as
// model.nodes), one edge per communication path (same index as model.paths).
// Cycles and self-loops are kept as declared.
class ModelGraph {
 public:
  struct Edge {
    std::size_t from;
    std::size_t to;
    std::size_t path;
  };

  explicit ModelGraph(const DeploymentModel& model);

  std::size_t vertex_count() const { return vertex_ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& out_edges(std::size_t vertex) const { return out_.at(vertex); }
  const std::vector<std::size_t>& in_edges(std::size_t vertex) const { return in_.at(vertex); }
  std::optional<std::size_t> vertex_of(std::string_view node_id) const;
  const std::string& vertex_id(std::size_t vertex) const { return vertex_ids_.at(vertex); }

  const std::vector<ResourceRequirement>& requirements(std::size_t vertex) const;
  const ResourceRequirement& volume(std::size_t edge) const;

  bool has_cycle() const;

 private:
  const DeploymentModel* model_;
  std::vector<std::string> vertex_ids_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

// Requires a valid model; the model must outlive the graph.
ModelGraph build_graph(const DeploymentModel& model);

}  // namespace cloudcost
