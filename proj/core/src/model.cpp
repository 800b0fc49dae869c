#include "cloudcost/model.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <set>

#include <json.hpp>

#include "cloudcost/error.hpp"

namespace cloudcost {

using nlohmann::ordered_json;

namespace {

constexpr std::pair<NodeKind, std::string_view> kNodeKinds[] = {
    {NodeKind::virtual_machine, "virtual_machine"},
    {NodeKind::virtual_storage, "virtual_storage"},
    {NodeKind::hosted_database, "hosted_database"},
    {NodeKind::remote_node, "remote_node"},
};

constexpr std::pair<ResourceKind, std::string_view> kResourceKinds[] = {
    {ResourceKind::vm_hours, "vm_hours"},
    {ResourceKind::storage_gb, "storage_gb"},
    {ResourceKind::io_in_requests, "io_in_requests"},
    {ResourceKind::io_out_requests, "io_out_requests"},
    {ResourceKind::io_gb, "io_gb"},
    {ResourceKind::data_in_gb, "data_in_gb"},
    {ResourceKind::data_out_gb, "data_out_gb"},
    {ResourceKind::data_link_gb, "data_link_gb"},
};

constexpr std::pair<ArtifactKind, std::string_view> kArtifactKinds[] = {
    {ArtifactKind::application, "application"},
    {ArtifactKind::data_set, "data_set"},
};

template <typename E, std::size_t N>
std::string_view name_of(E value, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(std::string_view text, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [v, name] : table) {
    if (name == text) return v;
  }
  return std::nullopt;
}

// Strict reader over nlohmann::json: every key must be known and typed.
class Reader {
 public:
  Reader(const ordered_json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

  void require_object(std::initializer_list<std::string_view> allowed) const {
    if (!value_.is_object()) throw SchemaError(path_, "expected an object");
    for (const auto& [key, _] : value_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw SchemaError(path_, "unknown field '" + key + "'");
      }
    }
  }

  bool has(std::string_view key) const { return value_.contains(key) && !value_.at(std::string(key)).is_null(); }

  Reader child(std::string_view key) const {
    if (!value_.contains(key)) throw SchemaError(path_, "missing field '" + std::string(key) + "'");
    return Reader(value_.at(std::string(key)), path_ + "." + std::string(key));
  }

  std::string string(std::string_view key) const {
    const Reader c = child(key);
    if (!c.value_.is_string()) throw SchemaError(c.path_, "expected a string");
    return c.value_.get<std::string>();
  }

  std::optional<std::string> optional_string(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return string(key);
  }

  double number(std::string_view key) const {
    const Reader c = child(key);
    if (!c.value_.is_number()) throw SchemaError(c.path_, "expected a number");
    return c.value_.get<double>();
  }

  std::vector<Reader> array(std::string_view key, bool required = false) const {
    std::vector<Reader> out;
    if (!value_.contains(key)) {
      if (required) throw SchemaError(path_, "missing field '" + std::string(key) + "'");
      return out;
    }
    const auto& arr = value_.at(std::string(key));
    if (!arr.is_array()) throw SchemaError(path_ + "." + std::string(key), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.emplace_back(arr[i], path_ + "." + std::string(key) + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  std::vector<std::string> string_array(std::string_view key) const {
    std::vector<std::string> out;
    for (const Reader& r : array(key)) {
      if (!r.value_.is_string()) throw SchemaError(r.path_, "expected a string");
      out.push_back(r.value_.get<std::string>());
    }
    return out;
  }

 private:
  const ordered_json& value_;
  std::string path_;
};

ResourceRequirement read_requirement(const Reader& r, std::optional<ResourceKind> fixed_kind) {
  r.require_object({"kind", "baseline", "patterns"});
  ResourceRequirement req;
  if (fixed_kind) {
    req.kind = *fixed_kind;
    if (r.has("kind")) {
      const std::string text = r.string("kind");
      if (resource_kind_from_string(text) != fixed_kind) {
        throw SchemaError(r.path(), "kind must be '" + std::string(to_string(*fixed_kind)) + "'");
      }
    }
  } else {
    const std::string text = r.string("kind");
    const auto kind = resource_kind_from_string(text);
    if (!kind) throw SchemaError(r.path() + ".kind", "unknown requirement kind '" + text + "'");
    req.kind = *kind;
  }
  req.baseline = r.number("baseline");
  req.patterns = r.string_array("patterns");
  return req;
}

Node read_node(const Reader& r) {
  r.require_object({"id", "kind", "placement", "vm", "storage", "database", "requirements"});
  Node node;
  node.id = r.string("id");
  const std::string kind = r.string("kind");
  const auto nk = node_kind_from_string(kind);
  if (!nk) throw SchemaError(r.path() + ".kind", "unknown node kind '" + kind + "'");
  node.kind = *nk;
  if (r.has("placement")) {
    const Reader p = r.child("placement");
    p.require_object({"provider", "region"});
    node.placement = Placement{p.string("provider"), p.string("region")};
  }
  if (r.has("vm")) {
    const Reader v = r.child("vm");
    v.require_object({"operating_system", "sku", "cpu_ghz", "ram_gb"});
    VmSpec vm;
    vm.operating_system = v.string("operating_system");
    vm.sku = v.optional_string("sku");
    if (v.has("cpu_ghz") || v.has("ram_gb")) vm.raw = RawSpec{v.number("cpu_ghz"), v.number("ram_gb")};
    node.vm = std::move(vm);
  }
  if (r.has("storage")) {
    const Reader s = r.child("storage");
    s.require_object({"storage_type"});
    node.storage = StorageSpec{s.optional_string("storage_type")};
  }
  if (r.has("database")) {
    const Reader d = r.child("database");
    d.require_object({"engine", "sku", "storage_type"});
    node.database = DatabaseSpec{d.string("engine"), d.optional_string("sku"), d.optional_string("storage_type")};
  }
  for (const Reader& req : r.array("requirements")) node.requirements.push_back(read_requirement(req, std::nullopt));
  return node;
}

ordered_json write_requirement(const ResourceRequirement& req) {
  ordered_json j;
  j["kind"] = to_string(req.kind);
  j["baseline"] = req.baseline;
  j["patterns"] = req.patterns;
  return j;
}

class Validator {
 public:
  explicit Validator(const DeploymentModel& model) : model_(model) {}

  std::vector<Diagnostic> run() {
    check_nodes();
    check_artifacts();
    check_bindings();
    check_paths();
    check_groups();
    std::stable_sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  void error(DiagnosticCode code, std::string path, std::string message) {
    out_.push_back({Severity::error, code, std::move(path), std::move(message)});
  }

  void check_requirement(const ResourceRequirement& req, const std::string& path) {
    if (!std::isfinite(req.baseline) || req.baseline < 0.0) {
      error(DiagnosticCode::bad_value, path + ".baseline", "baseline must be a finite nonnegative number");
    }
    for (std::size_t i = 0; i < req.patterns.size(); ++i) {
      try {
        parse_pattern_block(req.patterns[i]);
      } catch (const ParseError& e) {
        error(DiagnosticCode::bad_pattern, path + ".patterns[" + std::to_string(i) + "]", e.what());
      }
    }
  }

  void check_nodes() {
    std::set<std::string> seen;
    for (const Node& node : model_.nodes) {
      const std::string path = "nodes[" + node.id + "]";
      if (node.id.empty()) error(DiagnosticCode::bad_value, path, "node id must not be empty");
      if (!seen.insert(node.id).second) error(DiagnosticCode::duplicate_id, path, "duplicate node id '" + node.id + "'");

      if (node.kind == NodeKind::remote_node) {
        if (node.placement) error(DiagnosticCode::bad_placement, path + ".placement", "remote_node has no placement");
      } else if (!node.placement) {
        error(DiagnosticCode::bad_placement, path + ".placement", "cloud node requires a placement");
      } else if (node.placement->provider.empty() || node.placement->region.empty()) {
        error(DiagnosticCode::bad_placement, path + ".placement", "provider and region must be non-empty");
      }

      if (node.kind == NodeKind::virtual_machine) {
        if (!node.vm) {
          error(DiagnosticCode::bad_node_spec, path + ".vm", "virtual_machine requires a vm spec");
        } else if (node.vm->sku.has_value() == node.vm->raw.has_value()) {
          error(DiagnosticCode::bad_node_spec, path + ".vm", "exactly one of sku or cpu_ghz/ram_gb is required");
        } else if (node.vm->raw && (!(node.vm->raw->cpu_ghz > 0.0) || !(node.vm->raw->ram_gb > 0.0))) {
          error(DiagnosticCode::bad_node_spec, path + ".vm", "cpu_ghz and ram_gb must be positive");
        }
      } else if (node.vm) {
        error(DiagnosticCode::bad_node_spec, path + ".vm", "vm spec is only valid on virtual_machine");
      }
      if (node.storage && node.kind != NodeKind::virtual_storage) {
        error(DiagnosticCode::bad_node_spec, path + ".storage", "storage spec is only valid on virtual_storage");
      }
      if (node.database && node.kind != NodeKind::hosted_database) {
        error(DiagnosticCode::bad_node_spec, path + ".database", "database spec is only valid on hosted_database");
      }

      std::set<ResourceKind> kinds;
      for (std::size_t i = 0; i < node.requirements.size(); ++i) {
        const ResourceRequirement& req = node.requirements[i];
        const std::string rpath = path + ".requirements[" + std::to_string(i) + "]";
        if (!requirement_allowed(node.kind, req.kind)) {
          error(DiagnosticCode::illegal_requirement, rpath + ".kind",
                std::string(to_string(req.kind)) + " is not allowed on " + std::string(to_string(node.kind)));
        }
        if (!kinds.insert(req.kind).second) {
          error(DiagnosticCode::duplicate_id, rpath + ".kind",
                "duplicate requirement kind " + std::string(to_string(req.kind)));
        }
        check_requirement(req, rpath);
      }
    }
  }

  void check_artifacts() {
    std::set<std::string> seen;
    for (const ArtifactItem& a : model_.artifacts) {
      if (!seen.insert(a.id).second) {
        error(DiagnosticCode::duplicate_id, "artifacts[" + a.id + "]", "duplicate artifact id '" + a.id + "'");
      }
    }
  }

  void check_bindings() {
    for (std::size_t i = 0; i < model_.bindings.size(); ++i) {
      const DeploymentBinding& b = model_.bindings[i];
      const std::string path = "bindings[" + std::to_string(i) + "]";
      const ArtifactItem* artifact = nullptr;
      for (const ArtifactItem& a : model_.artifacts) {
        if (a.id == b.artifact_id) artifact = &a;
      }
      const Node* node = model_.find_node(b.node_id);
      if (!artifact) {
        error(DiagnosticCode::dangling_reference, path + ".artifact_id", "unknown artifact '" + b.artifact_id + "'");
      }
      if (!node) error(DiagnosticCode::dangling_reference, path + ".node_id", "unknown node '" + b.node_id + "'");
      if (!artifact || !node) continue;
      const bool ok = artifact->kind == ArtifactKind::application
                          ? (node->kind == NodeKind::virtual_machine || node->kind == NodeKind::remote_node)
                          : (node->kind == NodeKind::virtual_storage || node->kind == NodeKind::hosted_database);
      if (!ok) {
        error(DiagnosticCode::illegal_binding, path,
              std::string(to_string(artifact->kind)) + " '" + artifact->id + "' cannot be deployed on " +
                  std::string(to_string(node->kind)) + " '" + node->id + "'");
      }
    }
  }

  void check_paths() {
    std::set<std::string> seen;
    for (const CommunicationPath& p : model_.paths) {
      const std::string path = "paths[" + p.id + "]";
      if (!seen.insert(p.id).second) error(DiagnosticCode::duplicate_id, path, "duplicate path id '" + p.id + "'");
      if (!model_.find_node(p.from_node)) {
        error(DiagnosticCode::dangling_reference, path + ".from", "unknown node '" + p.from_node + "'");
      }
      if (!model_.find_node(p.to_node)) {
        error(DiagnosticCode::dangling_reference, path + ".to", "unknown node '" + p.to_node + "'");
      }
      if (p.volume.kind != ResourceKind::data_link_gb) {
        error(DiagnosticCode::illegal_requirement, path + ".volume.kind", "path volume must be data_link_gb");
      }
      check_requirement(p.volume, path + ".volume");
    }
  }

  void check_groups() {
    std::set<std::string> ids;
    std::map<std::string, std::string> owner;
    for (const Group& g : model_.groups) {
      const std::string path = "groups[" + g.id + "]";
      if (!ids.insert(g.id).second) error(DiagnosticCode::duplicate_id, path, "duplicate group id '" + g.id + "'");
      for (const std::string& n : g.node_ids) {
        if (!model_.find_node(n)) {
          error(DiagnosticCode::dangling_reference, path + ".node_ids", "unknown node '" + n + "'");
          continue;
        }
        auto [it, inserted] = owner.emplace(n, g.id);
        if (!inserted) {
          error(DiagnosticCode::group_overlap, path + ".node_ids",
                "node '" + n + "' already belongs to group '" + it->second + "'");
        }
      }
    }
  }

  const DeploymentModel& model_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::string_view to_string(NodeKind kind) { return name_of(kind, kNodeKinds); }
std::string_view to_string(ResourceKind kind) { return name_of(kind, kResourceKinds); }
std::string_view to_string(ArtifactKind kind) { return name_of(kind, kArtifactKinds); }
std::optional<NodeKind> node_kind_from_string(std::string_view text) { return value_of(text, kNodeKinds); }
std::optional<ResourceKind> resource_kind_from_string(std::string_view text) {
  return value_of(text, kResourceKinds);
}
std::optional<ArtifactKind> artifact_kind_from_string(std::string_view text) {
  return value_of(text, kArtifactKinds);
}

bool requirement_allowed(NodeKind node, ResourceKind resource) {
  switch (resource) {
    case ResourceKind::vm_hours:
      return node == NodeKind::virtual_machine || node == NodeKind::hosted_database;
    case ResourceKind::storage_gb:
    case ResourceKind::io_in_requests:
    case ResourceKind::io_out_requests:
    case ResourceKind::io_gb:
      return node == NodeKind::virtual_storage || node == NodeKind::hosted_database;
    case ResourceKind::data_in_gb:
    case ResourceKind::data_out_gb:
      return true;
    case ResourceKind::data_link_gb:
      return false;
  }
  return false;
}

QuantityClass quantity_class(ResourceKind kind) {
  return kind == ResourceKind::storage_gb ? QuantityClass::stock : QuantityClass::flow;
}

const Node* DeploymentModel::find_node(std::string_view id) const {
  for (const Node& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const CommunicationPath* DeploymentModel::find_path(std::string_view id) const {
  for (const CommunicationPath& p : paths) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const Group* DeploymentModel::group_of(std::string_view node_id) const {
  for (const Group& g : groups) {
    if (std::find(g.node_ids.begin(), g.node_ids.end(), node_id) != g.node_ids.end()) return &g;
  }
  return nullptr;
}

DeploymentModel read_model(std::string_view document) {
  ordered_json root;
  try {
    root = ordered_json::parse(document.begin(), document.end());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }

  const Reader r(root, "$");
  r.require_object({"name", "nodes", "artifacts", "bindings", "paths", "groups"});
  DeploymentModel model;
  model.name = r.string("name");
  for (const Reader& n : r.array("nodes", true)) model.nodes.push_back(read_node(n));
  for (const Reader& a : r.array("artifacts")) {
    a.require_object({"id", "kind", "label"});
    const std::string kind = a.string("kind");
    const auto ak = artifact_kind_from_string(kind);
    if (!ak) throw SchemaError(a.path() + ".kind", "unknown artifact kind '" + kind + "'");
    model.artifacts.push_back({a.string("id"), *ak, a.optional_string("label").value_or("")});
  }
  for (const Reader& b : r.array("bindings")) {
    b.require_object({"artifact_id", "node_id"});
    model.bindings.push_back({b.string("artifact_id"), b.string("node_id")});
  }
  for (const Reader& p : r.array("paths")) {
    p.require_object({"id", "from", "to", "volume"});
    CommunicationPath path;
    path.id = p.string("id");
    path.from_node = p.string("from");
    path.to_node = p.string("to");
    path.volume = read_requirement(p.child("volume"), ResourceKind::data_link_gb);
    model.paths.push_back(std::move(path));
  }
  for (const Reader& g : r.array("groups")) {
    g.require_object({"id", "label", "node_ids"});
    model.groups.push_back({g.string("id"), g.optional_string("label").value_or(""), g.string_array("node_ids")});
  }
  return model;
}

DeploymentModel parse_model(std::string_view document) {
  DeploymentModel model = read_model(document);
  std::vector<Diagnostic> diagnostics = validate(model);
  for (const Diagnostic& d : diagnostics) {
    if (d.severity == Severity::error && d.code == DiagnosticCode::dangling_reference) {
      // The message ends with the quoted id.
      const auto open = d.message.find('\'');
      const std::string id = d.message.substr(open + 1, d.message.size() - open - 2);
      throw ReferenceError(id, d.path + ": " + d.message);
    }
  }
  if (has_errors(diagnostics)) throw ValidationError(std::move(diagnostics));
  return model;
}

std::string serialize_model(const DeploymentModel& model) {
  ordered_json root;
  root["name"] = model.name;
  root["nodes"] = ordered_json::array();
  for (const Node& n : model.nodes) {
    ordered_json j;
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    if (n.placement) j["placement"] = {{"provider", n.placement->provider}, {"region", n.placement->region}};
    if (n.vm) {
      ordered_json v;
      v["operating_system"] = n.vm->operating_system;
      if (n.vm->sku) v["sku"] = *n.vm->sku;
      if (n.vm->raw) {
        v["cpu_ghz"] = n.vm->raw->cpu_ghz;
        v["ram_gb"] = n.vm->raw->ram_gb;
      }
      j["vm"] = v;
    }
    if (n.storage) {
      ordered_json s = ordered_json::object();
      if (n.storage->storage_type) s["storage_type"] = *n.storage->storage_type;
      j["storage"] = s;
    }
    if (n.database) {
      ordered_json d;
      d["engine"] = n.database->engine;
      if (n.database->sku) d["sku"] = *n.database->sku;
      if (n.database->storage_type) d["storage_type"] = *n.database->storage_type;
      j["database"] = d;
    }
    j["requirements"] = ordered_json::array();
    for (const ResourceRequirement& req : n.requirements) j["requirements"].push_back(write_requirement(req));
    root["nodes"].push_back(j);
  }
  root["artifacts"] = ordered_json::array();
  for (const ArtifactItem& a : model.artifacts) {
    root["artifacts"].push_back({{"id", a.id}, {"kind", to_string(a.kind)}, {"label", a.label}});
  }
  root["bindings"] = ordered_json::array();
  for (const DeploymentBinding& b : model.bindings) {
    root["bindings"].push_back({{"artifact_id", b.artifact_id}, {"node_id", b.node_id}});
  }
  root["paths"] = ordered_json::array();
  for (const CommunicationPath& p : model.paths) {
    root["paths"].push_back(
        {{"id", p.id}, {"from", p.from_node}, {"to", p.to_node}, {"volume", write_requirement(p.volume)}});
  }
  root["groups"] = ordered_json::array();
  for (const Group& g : model.groups) {
    root["groups"].push_back({{"id", g.id}, {"label", g.label}, {"node_ids", g.node_ids}});
  }
  return root.dump(2) + "\n";
}

std::vector<Diagnostic> validate(const DeploymentModel& model) { return Validator(model).run(); }

UsageSchedule to_schedule(const ResourceRequirement& requirement) {
  UsageSchedule schedule;
  schedule.kind_class = quantity_class(requirement.kind);
  schedule.baseline = requirement.baseline;
  for (const std::string& p : requirement.patterns) {
    const auto parsed = parse_pattern_block(p);
    schedule.patterns.insert(schedule.patterns.end(), parsed.begin(), parsed.end());
  }
  return schedule;
}

ModelGraph::ModelGraph(const DeploymentModel& model) : model_(&model) {
  vertex_ids_.reserve(model.nodes.size());
  for (const Node& n : model.nodes) vertex_ids_.push_back(n.id);
  out_.resize(vertex_ids_.size());
  in_.resize(vertex_ids_.size());
  for (std::size_t i = 0; i < model.paths.size(); ++i) {
    const auto from = vertex_of(model.paths[i].from_node);
    const auto to = vertex_of(model.paths[i].to_node);
    if (!from || !to) throw ReferenceError(from ? model.paths[i].to_node : model.paths[i].from_node,
                                           "path '" + model.paths[i].id + "' references an unknown node");
    edges_.push_back({*from, *to, i});
    out_[*from].push_back(i);
    in_[*to].push_back(i);
  }
}

std::optional<std::size_t> ModelGraph::vertex_of(std::string_view node_id) const {
  for (std::size_t i = 0; i < vertex_ids_.size(); ++i) {
    if (vertex_ids_[i] == node_id) return i;
  }
  return std::nullopt;
}

const std::vector<ResourceRequirement>& ModelGraph::requirements(std::size_t vertex) const {
  return model_->nodes.at(vertex).requirements;
}

const ResourceRequirement& ModelGraph::volume(std::size_t edge) const {
  return model_->paths.at(edges_.at(edge).path).volume;
}

bool ModelGraph::has_cycle() const {
  // Kahn's algorithm: a cycle remains iff some vertex never reaches in-degree 0.
  std::vector<std::size_t> indegree(vertex_count(), 0);
  for (const Edge& e : edges_) ++indegree[e.to];
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < indegree.size(); ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    ++visited;
    for (std::size_t e : out_[v]) {
      if (--indegree[edges_[e].to] == 0) ready.push_back(edges_[e].to);
    }
  }
  return visited != vertex_count();
}

ModelGraph build_graph(const DeploymentModel& model) { return ModelGraph(model); }

}  // namespace cloudcost
