#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using cloudcost::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(CLOUDCOST_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cloudcost_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("validate a good model prints nothing") {
  const Result r = call({"validate", data("digital_library.json")});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.empty());
}

TEST_CASE("validate reports every problem") {
  const fs::path dir = scratch("validate");
  write(dir / "bad.json", R"({"name": "bad", "nodes": [
      {"id": "a", "kind": "remote_node", "requirements": [{"kind": "vm_hours", "baseline": 1, "patterns": []}]},
      {"id": "a", "kind": "remote_node"}],
      "paths": [{"id": "p", "from": "a", "to": "ghost", "volume": {"kind": "data_link_gb", "baseline": 1}}]})");
  const Result r = call({"validate", (dir / "bad.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("ghost") != std::string::npos);
  CHECK(r.err.find("duplicate") != std::string::npos);

  write(dir / "syntax.json", "{\"name\": ");
  CHECK(call({"validate", (dir / "syntax.json").string()}).code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"validate"}).code == 2);
  CHECK(call({"validate", "/nonexistent/model.json"}).code == 2);
  const fs::path out = scratch("usage");
  CHECK(call({"simulate", "--model", data("digital_library.json"), "--catalog", data("demo_catalog.json"), "--start",
              "2011-13", "--end", "2012-01", "--out", out.string()})
            .code == 2);
  CHECK(call({"simulate", "--model", data("digital_library.json"), "--catalog", data("demo_catalog.json"), "--start",
              "2012-01", "--end", "2011-01", "--out", out.string()})
            .code == 2);
  CHECK(call({"assess", "--items", data("assessment_items.json"), "--ratings", data("example_ratings.csv"),
              "--threshold", "9", "--out", out.string()})
            .code == 2);
}

TEST_CASE("missing rate exits 3 and names the key") {
  const fs::path dir = scratch("missing");
  write(dir / "catalog.json", R"({"currency": "USD", "entries": [], "skus": []})");
  const Result r = call({"simulate", "--model", data("digital_library.json"), "--catalog",
                         (dir / "catalog.json").string(), "--start", "2011-01", "--end", "2011-02", "--out",
                         (dir / "out").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("aws/us-east") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "report.csv"));
}

TEST_CASE("simulate writes reproducible reports") {
  const fs::path a = scratch("sim_a");
  const fs::path b = scratch("sim_b");
  for (const fs::path& dir : {a, b}) {
    const Result r = call({"simulate", "--model", data("digital_library.json"), "--catalog", data("demo_catalog.json"),
                           "--plan", data("digital_library_plan.json"), "--start", "2011-01", "--end", "2013-12",
                           "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK_FALSE(r.out.empty());
  }
  for (const char* name : {"report.csv", "report.html", "summary.json"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(a / name));
    CHECK(fixture::read_file((a / name).string()) == fixture::read_file((b / name).string()));
    CHECK_FALSE(fs::exists(a / (std::string(name) + ".tmp")));
  }
}

TEST_CASE("catalog from the environment") {
  const fs::path out = scratch("env");
  ::setenv("CLOUDCOST_CATALOG", data("demo_catalog.json").c_str(), 1);
  const Result r = call({"export-csv", "--model", data("digital_library.json"), "--start", "2011-01", "--end",
                         "2011-03", "--out", out.string()});
  ::unsetenv("CLOUDCOST_CATALOG");
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "report.csv"));
  CHECK_FALSE(fs::exists(out / "report.html"));
  CHECK(call({"export-csv", "--model", data("digital_library.json"), "--start", "2011-01", "--end", "2011-03",
              "--out", out.string()})
            .code == 2);
}

TEST_CASE("compare-providers prints the comparison grid") {
  const fs::path out = scratch("providers");
  const Result r = call({"compare-providers", "--model", data("digital_library.json"), "--catalog",
                         data("demo_catalog.json"), "--map", data("provider_map.json"), "--start", "2011-01", "--end",
                         "2013-12", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Difference with AWS") != std::string::npos);
  CHECK(r.out.find("+2x") != std::string::npos);
  CHECK(r.out.find("+3x") != std::string::npos);
  CHECK(fs::exists(out / "comparison.json"));
}

TEST_CASE("compare scenarios") {
  const Result r = call({"compare", "--models",
                         data("rnd_non_elastic.json") + "," + data("rnd_elastic.json") + "," +
                             data("rnd_small_instances.json"),
                         "--labels", "Non-elastic,Elastic,Small instances", "--plans",
                         data("rnd_plan.json") + "," + data("rnd_plan.json") + "," + data("rnd_small_instances_plan.json"),
                         "--catalog", data("demo_catalog.json"), "--start", "2011-01", "--end", "2013-12"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Difference with Elastic") != std::string::npos);
  CHECK(call({"compare", "--models", data("rnd_elastic.json") + "," + data("rnd_elastic.json"), "--labels", "only-one",
              "--catalog", data("demo_catalog.json"), "--start", "2011-01", "--end", "2011-12"})
            .code == 2);
}

TEST_CASE("assess writes radar and important items") {
  const fs::path out = scratch("assess");
  const Result r = call({"assess", "--items", data("assessment_items.json"), "--ratings", data("example_ratings.csv"),
                         "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out / "radar.json"));
  CHECK(fs::exists(out / "important.json"));
}
