#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <set>

#include "cloudcost/error.hpp"
#include "cloudcost/model.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cloudcost;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kMinimal = R"({
  "name": "one",
  "nodes": [
    {"id": "web1", "kind": "virtual_machine", "placement": {"provider": "aws", "region": "us-east"},
     "vm": {"operating_system": "linux", "sku": "standard.small"},
     "requirements": [{"kind": "vm_hours", "baseline": 720, "patterns": []}]}
  ]
})";

Node vm(const std::string& id) {
  Node n;
  n.id = id;
  n.kind = NodeKind::virtual_machine;
  n.placement = Placement{"aws", "us-east"};
  n.vm = VmSpec{"linux", "standard.small", std::nullopt};
  return n;
}

bool has_code(const std::vector<Diagnostic>& ds, DiagnosticCode code) {
  for (const auto& d : ds) {
    if (d.code == code && d.severity == Severity::error) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("minimal model") {
  const DeploymentModel m = parse_model(kMinimal);
  CHECK(m.name == "one");
  REQUIRE(m.nodes.size() == 1);
  CHECK(m.nodes[0].requirements.at(0).baseline == 720);
  const ModelGraph g = build_graph(m);
  CHECK(g.vertex_count() == 1);
  CHECK(g.edge_count() == 0);
  CHECK(validate(m).empty());
}

TEST_CASE("syntax errors carry an offset") {
  try {
    parse_model("{\"name\": \"x\",, }");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.position() == 13);
  }
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(parse_model(R"({"name": "x", "nodes": [], "colour": 1})"), SchemaError);
  CHECK_THROWS_AS(parse_model(R"({"name": "x", "nodes": [{"id": "a", "kind": "mainframe"}]})"), SchemaError);
  CHECK_THROWS_AS(parse_model(R"({"name": "x", "nodes": [{"id": "a", "kind": "remote_node", "extra": 1}]})"),
                  SchemaError);
  CHECK_THROWS_AS(parse_model(R"({"name": "x", "nodes": [{"id": "a", "kind": "remote_node",
      "requirements": [{"kind": "cpu_cycles", "baseline": 1, "patterns": []}]}]})"),
                  SchemaError);
  CHECK_THROWS_AS(parse_model(R"({"name": 5, "nodes": []})"), SchemaError);
}

TEST_CASE("dangling binding names the missing node") {
  const std::string doc = R"({"name": "x",
    "nodes": [{"id": "web1", "kind": "remote_node"}],
    "artifacts": [{"id": "app", "kind": "application", "label": "App"}],
    "bindings": [{"artifact_id": "app", "node_id": "web9"}]})";
  try {
    parse_model(doc);
    FAIL("accepted");
  } catch (const ReferenceError& e) {
    CHECK(e.id() == "web9");
    CHECK(std::string(e.what()).find("web9") != std::string::npos);
  }
}

TEST_CASE("invariant violations become diagnostics") {
  DeploymentModel m;
  m.name = "x";
  m.nodes = {vm("a"), vm("b")};

  SUBCASE("node in two groups") {
    m.groups = {{"g1", "", {"a"}}, {"g2", "", {"a", "b"}}};
    const auto ds = validate(m);
    CHECK(std::count_if(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.severity == Severity::error; }) == 1);
    CHECK(has_code(ds, DiagnosticCode::group_overlap));
  }
  SUBCASE("duplicate node ids") {
    m.nodes.push_back(vm("a"));
    CHECK(has_code(validate(m), DiagnosticCode::duplicate_id));
  }
  SUBCASE("duplicate group ids") {
    m.groups = {{"g", "", {"a"}}, {"g", "", {"b"}}};
    CHECK(has_code(validate(m), DiagnosticCode::duplicate_id));
  }
  SUBCASE("vm with both sku and raw spec") {
    m.nodes[0].vm->raw = RawSpec{2, 4};
    CHECK(has_code(validate(m), DiagnosticCode::bad_node_spec));
  }
  SUBCASE("vm with neither sku nor raw spec") {
    m.nodes[0].vm->sku.reset();
    CHECK(has_code(validate(m), DiagnosticCode::bad_node_spec));
  }
  SUBCASE("remote node with placement") {
    m.nodes[1].kind = NodeKind::remote_node;
    m.nodes[1].vm.reset();
    CHECK(has_code(validate(m), DiagnosticCode::bad_placement));
  }
  SUBCASE("cloud node without placement") {
    m.nodes[1].placement.reset();
    CHECK(has_code(validate(m), DiagnosticCode::bad_placement));
  }
  SUBCASE("negative baseline") {
    m.nodes[0].requirements.push_back({ResourceKind::vm_hours, -1, {}});
    CHECK(has_code(validate(m), DiagnosticCode::bad_value));
  }
  SUBCASE("unparseable pattern") {
    m.nodes[0].requirements.push_back({ResourceKind::vm_hours, 1, {"perm: every month %5"}});
    CHECK(has_code(validate(m), DiagnosticCode::bad_pattern));
  }
  SUBCASE("path to unknown node") {
    m.paths.push_back({"p", "a", "zz", {ResourceKind::data_link_gb, 1, {}}});
    CHECK(has_code(validate(m), DiagnosticCode::dangling_reference));
  }
  SUBCASE("application bound to storage") {
    Node s;
    s.id = "disk";
    s.kind = NodeKind::virtual_storage;
    s.placement = Placement{"aws", "us-east"};
    s.storage = StorageSpec{"ebs"};
    m.nodes.push_back(s);
    m.artifacts.push_back({"app", ArtifactKind::application, ""});
    m.bindings.push_back({"app", "disk"});
    CHECK(has_code(validate(m), DiagnosticCode::illegal_binding));
  }
  SUBCASE("artifact bound to several nodes is allowed") {
    m.artifacts.push_back({"app", ArtifactKind::application, ""});
    m.bindings = {{"app", "a"}, {"app", "b"}};
    CHECK(validate(m).empty());
  }
}

TEST_CASE("requirement legality table") {
  const std::map<NodeKind, std::set<ResourceKind>> legal = {
      {NodeKind::virtual_machine, {ResourceKind::vm_hours, ResourceKind::data_in_gb, ResourceKind::data_out_gb}},
      {NodeKind::virtual_storage,
       {ResourceKind::storage_gb, ResourceKind::io_in_requests, ResourceKind::io_out_requests, ResourceKind::io_gb,
        ResourceKind::data_in_gb, ResourceKind::data_out_gb}},
      {NodeKind::hosted_database,
       {ResourceKind::vm_hours, ResourceKind::storage_gb, ResourceKind::io_in_requests, ResourceKind::io_out_requests,
        ResourceKind::io_gb, ResourceKind::data_in_gb, ResourceKind::data_out_gb}},
      {NodeKind::remote_node, {ResourceKind::data_in_gb, ResourceKind::data_out_gb}},
  };
  const ResourceKind all[] = {ResourceKind::vm_hours,        ResourceKind::storage_gb, ResourceKind::io_in_requests,
                              ResourceKind::io_out_requests, ResourceKind::io_gb,      ResourceKind::data_in_gb,
                              ResourceKind::data_out_gb,     ResourceKind::data_link_gb};
  for (const auto& [node_kind, allowed] : legal) {
    for (ResourceKind rk : all) {
      CAPTURE(to_string(node_kind));
      CAPTURE(to_string(rk));
      const bool expect = allowed.count(rk) > 0;
      CHECK(requirement_allowed(node_kind, rk) == expect);

      DeploymentModel m;
      m.name = "x";
      Node n;
      n.id = "n";
      n.kind = node_kind;
      if (node_kind != NodeKind::remote_node) n.placement = Placement{"aws", "us-east"};
      if (node_kind == NodeKind::virtual_machine) n.vm = VmSpec{"linux", "s", std::nullopt};
      if (node_kind == NodeKind::virtual_storage) n.storage = StorageSpec{"ebs"};
      if (node_kind == NodeKind::hosted_database) n.database = DatabaseSpec{"sql", "s", "ebs"};
      n.requirements.push_back({rk, 1, {}});
      m.nodes.push_back(n);
      CHECK(has_code(validate(m), DiagnosticCode::illegal_requirement) == !expect);
    }
  }
  CHECK(quantity_class(ResourceKind::storage_gb) == QuantityClass::stock);
  CHECK(quantity_class(ResourceKind::vm_hours) == QuantityClass::flow);
}

TEST_CASE("duplicate requirement kinds on one node") {
  DeploymentModel m;
  m.name = "x";
  m.nodes = {vm("a")};
  m.nodes[0].requirements = {{ResourceKind::vm_hours, 1, {}}, {ResourceKind::vm_hours, 2, {}}};
  CHECK(has_errors(validate(m)));
}

TEST_CASE("cycles and self-loops are kept") {
  DeploymentModel m;
  m.name = "x";
  m.nodes = {vm("a"), vm("b")};
  m.paths = {{"ab", "a", "b", {ResourceKind::data_link_gb, 1, {}}}, {"ba", "b", "a", {ResourceKind::data_link_gb, 1, {}}}};
  const ModelGraph g = build_graph(m);
  CHECK(g.edge_count() == 2);
  CHECK(g.has_cycle());
  CHECK(g.out_edges(0).size() == 1);
  CHECK(g.in_edges(0).size() == 1);
  m.paths.pop_back();
  CHECK_FALSE(build_graph(m).has_cycle());
  m.paths.push_back({"aa", "a", "a", {ResourceKind::data_link_gb, 1, {}}});
  CHECK(build_graph(m).has_cycle());
}

TEST_CASE("validation is deterministic and sorted by path") {
  DeploymentModel m;
  m.name = "x";
  m.nodes = {vm("a"), vm("a"), vm("b")};
  m.nodes[2].requirements.push_back({ResourceKind::storage_gb, -1, {"bad"}});
  m.groups = {{"g", "", {"zz", "a"}}, {"h", "", {"a"}}};
  const auto first = validate(m);
  const auto second = validate(m);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].path == second[i].path);
    CHECK(first[i].message == second[i].message);
    if (i > 0) CHECK_FALSE(first[i] < first[i - 1]);
  }
  CHECK(first.size() >= 5);
}

TEST_CASE("digital library demo model") {
  const DeploymentModel m = parse_model(slurp(std::string(CLOUDCOST_DATA_DIR) + "/digital_library.json"));
  int servers = 0;
  double storage = 0;
  for (const Node& n : m.nodes) {
    if (n.kind == NodeKind::virtual_machine) ++servers;
    for (const auto& r : n.requirements) {
      if (r.kind == ResourceKind::storage_gb) storage += r.baseline;
    }
  }
  CHECK(servers == 15);
  CHECK(storage == doctest::Approx(2000));

  const ModelGraph g = build_graph(m);
  CHECK(g.vertex_count() == m.nodes.size());
  CHECK(g.edge_count() == m.paths.size());
  std::map<std::pair<std::string, std::string>, std::multiset<std::string>> built;
  for (const auto& e : g.edges()) built[{g.vertex_id(e.from), g.vertex_id(e.to)}].insert(m.paths[e.path].id);
  CHECK(built == oracle::adjacency(m));
  for (std::size_t e = 0; e < g.edge_count(); ++e) CHECK(g.volume(e) == m.paths[e].volume);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) CHECK(g.requirements(v) == m.nodes[v].requirements);
}

TEST_CASE("canonical serialization round-trips") {
  for (const char* file : {"digital_library.json", "rnd_elastic.json", "rnd_small_instances.json"}) {
    CAPTURE(file);
    const DeploymentModel m = parse_model(slurp(std::string(CLOUDCOST_DATA_DIR) + "/" + file));
    const std::string text = serialize_model(m);
    const DeploymentModel again = parse_model(text);
    CHECK(again == m);
    CHECK(serialize_model(again) == text);
  }
  gen::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const DeploymentModel m = gen::model(rng);
    if (has_errors(validate(m))) continue;
    CHECK(parse_model(serialize_model(m)) == m);
  }
}

TEST_CASE("graph matches naive adjacency on random models") {
  gen::Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    const DeploymentModel m = gen::model(rng);
    if (has_errors(validate(m))) continue;
    const ModelGraph g = build_graph(m);
    CHECK(g.vertex_count() == m.nodes.size());
    CHECK(g.edge_count() == m.paths.size());
    std::map<std::pair<std::string, std::string>, std::multiset<std::string>> built;
    for (const auto& e : g.edges()) built[{g.vertex_id(e.from), g.vertex_id(e.to)}].insert(m.paths[e.path].id);
    CHECK(built == oracle::adjacency(m));
  }
}
