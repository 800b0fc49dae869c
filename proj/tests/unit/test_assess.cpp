#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "cloudcost/assess.hpp"
#include "cloudcost/error.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cloudcost;

namespace {

const std::vector<AssessmentItem>& seed() {
  static const std::vector<AssessmentItem> kItems = load_items(fixture::data("assessment_items.json"));
  return kItems;
}

const AssessmentItem& item(const std::string& id) {
  for (const AssessmentItem& i : seed()) {
    if (i.id == id) return i;
  }
  throw std::runtime_error("no item " + id);
}

std::vector<AssessmentItem> three_technical_benefits() {
  return {{"B1", ItemKind::benefit, Category::technical, "one", {}, {}, {}, false},
          {"B2", ItemKind::benefit, Category::technical, "two", {}, {}, {}, false},
          {"B3", ItemKind::benefit, Category::technical, "three", {}, {}, {}, false}};
}

RatingSheet random_sheet(gen::Rng& rng, const std::vector<AssessmentItem>& items) {
  RatingSheet s;
  for (const AssessmentItem& i : items) {
    if (gen::uniform(rng, 0, 4) != 0) s.ratings[i.id] = gen::uniform(rng, 1, 5);
  }
  return s;
}

}  // namespace

TEST_CASE("seed file holds the printed benefits and risks") {
  const auto& items = seed();
  REQUIRE(items.size() == 30);
  std::vector<std::string> benefits;
  std::vector<std::string> risks;
  for (const AssessmentItem& i : items) (i.kind == ItemKind::benefit ? benefits : risks).push_back(i.id);
  CHECK(benefits == std::vector<std::string>{"B1", "B2", "B3", "B4", "B7", "B9", "B11", "B14", "B16", "B18"});
  CHECK(risks == std::vector<std::string>{"R1",  "R3",  "R5",  "R7",  "R11", "R39", "R12", "R13", "R15", "R16",
                                          "R18", "R21", "R23", "R25", "R26", "R27", "R28", "R31", "R34", "R36"});
  for (const AssessmentItem& i : items) {
    CAPTURE(i.id);
    CHECK_FALSE(i.statement.empty());
    if (i.kind == ItemKind::benefit) {
      CHECK_FALSE(i.mitigation);
      CHECK_FALSE(i.indicators);
    }
  }
}

TEST_CASE("seed item categories and star flags") {
  CHECK(item("R3").kind == ItemKind::risk);
  CHECK(item("R3").category == Category::organizational);
  CHECK(item("R3").applies_to_private_cloud);
  CHECK(item("B1").category == Category::technical);
  CHECK_FALSE(item("B1").applies_to_private_cloud);
  CHECK(item("B2").applies_to_private_cloud);
  CHECK(item("R3").mitigation.has_value());
  std::map<Category, int> risk_categories;
  for (const AssessmentItem& i : seed()) {
    if (i.kind == ItemKind::risk) ++risk_categories[i.category];
  }
  CHECK(risk_categories.size() == 5);
}

TEST_CASE("item file errors") {
  const std::string benefit_with_mitigation = R"({"items": [{"id": "B1", "kind": "benefit", "category": "technical",
      "statement": "s", "mitigation": "m"}]})";
  CHECK_THROWS_AS(load_items(benefit_with_mitigation), ValidationError);
  const std::string dup = R"({"items": [{"id": "B1", "kind": "benefit", "category": "technical", "statement": "a"},
      {"id": "B1", "kind": "benefit", "category": "legal", "statement": "b"}]})";
  try {
    load_items(dup);
    FAIL("accepted");
  } catch (const ValidationError& e) {
    REQUIRE(e.diagnostics().size() == 1);
    CHECK(e.diagnostics()[0].code == DiagnosticCode::duplicate_id);
  }
  CHECK_THROWS_AS(load_items(R"({"items": [{"id": "B1", "kind": "bonus", "category": "technical", "statement": "a"}]})"),
                  SchemaError);
  CHECK_THROWS_AS(load_items(R"({"items": [{"id": "B1", "kind": "benefit", "category": "moral", "statement": "a"}]})"),
                  SchemaError);
  CHECK_THROWS_AS(load_items("{\"items\": ["), ParseError);
}

TEST_CASE("ratings csv") {
  const RatingSheet s = parse_ratings_csv("# respondent: Ann\n# view: corporate\nitem_id,rating\nB1,5\r\nR3, 2\n\n");
  CHECK(s.respondent == "Ann");
  CHECK(s.role_view == "corporate");
  CHECK(s.ratings == std::map<std::string, int>{{"B1", 5}, {"R3", 2}});
  CHECK_THROWS_AS(parse_ratings_csv("B1,5\n"), ParseError);
  CHECK_THROWS_AS(parse_ratings_csv("item_id,rating\nB1,high\n"), ParseError);
  CHECK_THROWS_AS(parse_ratings_csv("item_id,rating\nB1,4\nB1,5\n"), ParseError);
  CHECK_THROWS_AS(parse_ratings_csv(""), ParseError);
  const RatingSheet example = parse_ratings_csv(fixture::data("example_ratings.csv"));
  CHECK(example.ratings.size() == 30);
}

TEST_CASE("sheet validation") {
  RatingSheet s;
  for (const AssessmentItem& i : seed()) s.ratings[i.id] = 3;
  CHECK(validate_sheet(s, seed()).empty());

  RatingSheet six = s;
  six.ratings["B1"] = 6;
  auto d = validate_sheet(six, seed());
  REQUIRE(d.size() == 1);
  CHECK(d[0].code == DiagnosticCode::rating_out_of_range);
  CHECK(d[0].severity == Severity::error);

  RatingSheet unknown = s;
  unknown.ratings["R99"] = 3;
  d = validate_sheet(unknown, seed());
  REQUIRE(d.size() == 1);
  CHECK(d[0].code == DiagnosticCode::unknown_item);

  RatingSheet partial = s;
  partial.ratings.erase("R27");
  d = validate_sheet(partial, seed());
  REQUIRE(d.size() == 1);
  CHECK(d[0].code == DiagnosticCode::unrated_item);
  CHECK(d[0].severity == Severity::warning);
  CHECK(d[0].path == "ratings[R27]");
}

TEST_CASE("category averages") {
  const auto items = three_technical_benefits();
  RatingSheet s{"", "", {{"B1", 3}, {"B2", 3}, {"B3", 3}}};
  CHECK(category_average(s, items, ItemKind::benefit, Category::technical).average == 3.0);
  s.ratings = {{"B1", 5}, {"B2", 4}, {"B3", 2}};
  const CategoryAverage a = category_average(s, items, ItemKind::benefit, Category::technical);
  CHECK(a.average == doctest::Approx(11.0 / 3).epsilon(1e-12));
  CHECK(std::abs(a.average - 3.6667) <= 1e-4);
  CHECK(a.item_count == 3);
  s.ratings.erase("B3");
  CHECK(category_average(s, items, ItemKind::benefit, Category::technical).average == 4.5);
  CHECK_THROWS_AS(category_average(s, items, ItemKind::benefit, Category::legal), EmptyCategoryError);
  CHECK_THROWS_AS(category_average(s, items, ItemKind::risk, Category::technical), EmptyCategoryError);
}

TEST_CASE("averages against the mean oracle on random sheets") {
  gen::Rng rng(401);
  for (int trial = 0; trial < 300; ++trial) {
    const RatingSheet s = random_sheet(rng, seed());
    const RadarData r = radar(s, seed());
    for (ItemKind kind : {ItemKind::benefit, ItemKind::risk}) {
      const auto& axis = kind == ItemKind::benefit ? r.benefits : r.risks;
      std::size_t at = 0;
      for (Category c : kCategories) {
        std::vector<int> values;
        for (const AssessmentItem& i : seed()) {
          if (i.kind == kind && i.category == c && s.ratings.count(i.id)) values.push_back(s.ratings.at(i.id));
        }
        if (values.empty()) continue;
        REQUIRE(at < axis.size());
        CHECK(axis[at].category == c);
        CHECK(axis[at].average == oracle::mean(values));
        CHECK(axis[at].average >= 1);
        CHECK(axis[at].average <= 5);
        CHECK(axis[at].item_count == static_cast<int>(values.size()));
        CHECK(axis[at].average == category_average(s, seed(), kind, c).average);
        ++at;
      }
      CHECK(at == axis.size());
    }
  }
}

TEST_CASE("raising one rating never lowers its average") {
  gen::Rng rng(409);
  for (int trial = 0; trial < 300; ++trial) {
    RatingSheet s = random_sheet(rng, seed());
    if (s.ratings.empty()) continue;
    auto it = s.ratings.begin();
    std::advance(it, gen::uniform(rng, 0, static_cast<int>(s.ratings.size()) - 1));
    if (it->second == 5) continue;
    const AssessmentItem& i = item(it->first);
    const double before = category_average(s, seed(), i.kind, i.category).average;
    ++it->second;
    CHECK(category_average(s, seed(), i.kind, i.category).average >= before);
  }
}

TEST_CASE("item order does not matter") {
  gen::Rng rng(419);
  for (int trial = 0; trial < 100; ++trial) {
    const RatingSheet s = random_sheet(rng, seed());
    std::vector<AssessmentItem> shuffled = seed();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(radar_to_json(radar(s, shuffled)) == radar_to_json(radar(s, seed())));
  }
}

TEST_CASE("radar") {
  RatingSheet all5;
  for (const AssessmentItem& i : seed()) all5.ratings[i.id] = 5;
  const RadarData r = radar(all5, seed());
  CHECK_FALSE(r.benefits.empty());
  CHECK(r.risks.size() == 5);
  for (const auto* axis : {&r.benefits, &r.risks}) {
    for (const CategoryAverage& a : *axis) CHECK(a.average == 5.0);
  }

  const RatingSheet tech{"", "", {{"B1", 4}, {"B2", 2}}};
  const RadarData t = radar(tech, seed());
  REQUIRE(t.benefits.size() == 1);
  CHECK(t.benefits[0].category == Category::technical);
  CHECK(t.risks.empty());
  CHECK(radar_to_json(t) ==
        "[\n  {\n    \"kind\": \"benefit\",\n    \"category\": \"technical\",\n    \"average\": 3.0,\n"
        "    \"item_count\": 2\n  }\n]\n");
}

TEST_CASE("important items") {
  RatingSheet threes;
  for (const AssessmentItem& i : seed()) threes.ratings[i.id] = 3;
  const ImportantItems none = important_items(threes, seed());
  CHECK(none.benefits.empty());
  CHECK(none.risks.empty());

  const RatingSheet s{"", "", {{"B1", 5}, {"B2", 4}, {"R1", 3}}};
  const ImportantItems i = important_items(s, seed(), 4);
  CHECK(i.benefits == std::vector<std::string>{"B1", "B2"});
  CHECK(i.risks.empty());

  const ImportantItems every = important_items(threes, seed(), 1);
  CHECK(every.benefits.size() + every.risks.size() == 30);
  CHECK(every.benefits[1] == "B2");
  CHECK(every.benefits.back() == "B18");  // numeric-aware order
  CHECK(every.risks.back() == "R39");
}
