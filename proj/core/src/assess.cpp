#include "cloudcost/assess.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include <json.hpp>

#include "cloudcost/error.hpp"

namespace cloudcost {

using nlohmann::ordered_json;

namespace {

constexpr std::string_view kCategoryNames[] = {"organizational", "legal", "security", "technical", "financial"};

const AssessmentItem* find_item(std::span<const AssessmentItem> items, std::string_view id) {
  for (const AssessmentItem& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

// "R12" -> ("R", 12) so ids sort in table order.
std::pair<std::string, long> id_sort_key(const std::string& id) {
  std::size_t i = 0;
  while (i < id.size() && !(id[i] >= '0' && id[i] <= '9')) ++i;
  long number = -1;
  std::from_chars(id.data() + i, id.data() + id.size(), number);
  return {id.substr(0, i), number};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string get_string(const ordered_json& j, const std::string& path, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) throw SchemaError(path, std::string("expected string '") + key + "'");
  return j.at(key).get<std::string>();
}

}  // namespace

std::string_view to_string(ItemKind kind) { return kind == ItemKind::benefit ? "benefit" : "risk"; }

std::string_view to_string(Category category) { return kCategoryNames[static_cast<int>(category)]; }

std::optional<ItemKind> item_kind_from_string(std::string_view text) {
  if (text == "benefit") return ItemKind::benefit;
  if (text == "risk") return ItemKind::risk;
  return std::nullopt;
}

std::optional<Category> category_from_string(std::string_view text) {
  for (Category c : kCategories) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::vector<AssessmentItem> load_items(std::string_view document) {
  ordered_json root;
  try {
    root = ordered_json::parse(document.begin(), document.end());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!root.is_object() || !root.contains("items") || !root.at("items").is_array()) {
    throw SchemaError("$", "expected {\"items\": [...]}");
  }
  for (const auto& [key, _] : root.items()) {
    if (key != "items" && key != "description") throw SchemaError("$", "unknown field '" + key + "'");
  }
  std::vector<AssessmentItem> items;
  std::vector<Diagnostic> problems;
  std::set<std::string> ids;
  const auto& array = root.at("items");
  for (std::size_t i = 0; i < array.size(); ++i) {
    const auto& j = array[i];
    const std::string path = "$.items[" + std::to_string(i) + "]";
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    AssessmentItem item;
    for (const auto& [key, v] : j.items()) {
      if (key == "id" || key == "statement") {
        (key == "id" ? item.id : item.statement) = get_string(j, path, key.c_str());
      } else if (key == "kind") {
        const auto k = item_kind_from_string(get_string(j, path, "kind"));
        if (!k) throw SchemaError(path + ".kind", "unknown item kind '" + v.dump() + "'");
        item.kind = *k;
      } else if (key == "category") {
        const auto c = category_from_string(get_string(j, path, "category"));
        if (!c) throw SchemaError(path + ".category", "unknown category " + v.dump());
        item.category = *c;
      } else if (key == "mitigation" || key == "indicators") {
        if (v.is_null()) continue;
        (key == "mitigation" ? item.mitigation : item.indicators) = get_string(j, path, key.c_str());
      } else if (key == "references") {
        if (!v.is_array()) throw SchemaError(path + ".references", "expected an array");
        for (const auto& r : v) {
          if (!r.is_string()) throw SchemaError(path + ".references", "expected strings");
          item.references.push_back(r.get<std::string>());
        }
      } else if (key == "applies_to_private_cloud") {
        if (!v.is_boolean()) throw SchemaError(path + "." + key, "expected a boolean");
        item.applies_to_private_cloud = v.get<bool>();
      } else {
        throw SchemaError(path, "unknown field '" + key + "'");
      }
    }
    for (const char* required : {"id", "kind", "category", "statement"}) {
      if (!j.contains(required)) throw SchemaError(path, std::string("missing field '") + required + "'");
    }
    const std::string ipath = "items[" + item.id + "]";
    if (!ids.insert(item.id).second) {
      problems.push_back({Severity::error, DiagnosticCode::duplicate_id, ipath, "duplicate item id '" + item.id + "'"});
    }
    if (item.kind == ItemKind::benefit && (item.mitigation || item.indicators)) {
      problems.push_back({Severity::error, DiagnosticCode::bad_value, ipath,
                          "benefits carry no mitigation or indicators"});
    }
    items.push_back(std::move(item));
  }
  if (!problems.empty()) {
    std::stable_sort(problems.begin(), problems.end());
    throw ValidationError(std::move(problems));
  }
  return items;
}

RatingSheet parse_ratings_csv(std::string_view text) {
  RatingSheet sheet;
  bool header_seen = false;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    const std::string_view raw = text.substr(line_start, line_end - line_start);
    const std::string_view line = trim(raw);
    const std::size_t at = line_start;
    line_start = line_end + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;  // plain comment
      const std::string_view key = trim(body.substr(0, colon));
      const std::string value(trim(body.substr(colon + 1)));
      if (key == "respondent") sheet.respondent = value;
      if (key == "view") sheet.role_view = value;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw ParseError("expected 'item_id,rating'", at);
    const std::string_view id = trim(line.substr(0, comma));
    const std::string_view value = trim(line.substr(comma + 1));
    if (!header_seen) {
      if (id != "item_id" || value != "rating") throw ParseError("expected header 'item_id,rating'", at);
      header_seen = true;
      continue;
    }
    if (id.empty()) throw ParseError("empty item id", at);
    int rating = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), rating);
    if (ec != std::errc() || end != value.data() + value.size()) {
      throw ParseError("rating for '" + std::string(id) + "' is not an integer", at + comma + 1);
    }
    if (!sheet.ratings.emplace(std::string(id), rating).second) {
      throw ParseError("item '" + std::string(id) + "' rated twice", at);
    }
  }
  if (!header_seen) throw ParseError("missing header 'item_id,rating'", 0);
  return sheet;
}

std::vector<Diagnostic> validate_sheet(const RatingSheet& sheet, std::span<const AssessmentItem> items) {
  std::vector<Diagnostic> out;
  for (const auto& [id, rating] : sheet.ratings) {
    const std::string path = "ratings[" + id + "]";
    if (!find_item(items, id)) {
      out.push_back({Severity::error, DiagnosticCode::unknown_item, path, "unknown item id '" + id + "'"});
    }
    if (rating < 1 || rating > 5) {
      out.push_back({Severity::error, DiagnosticCode::rating_out_of_range, path,
                     "rating " + std::to_string(rating) + " is outside 1..5"});
    }
  }
  for (const AssessmentItem& item : items) {
    if (!sheet.ratings.contains(item.id)) {
      out.push_back({Severity::warning, DiagnosticCode::unrated_item, "ratings[" + item.id + "]",
                     "item '" + item.id + "' is unrated and excluded from averages"});
    }
  }
  std::stable_sort(out.begin(), out.end());
  return out;
}

CategoryAverage category_average(const RatingSheet& sheet, std::span<const AssessmentItem> items, ItemKind kind,
                                 Category category) {
  long sum = 0;
  int count = 0;
  for (const AssessmentItem& item : items) {
    if (item.kind != kind || item.category != category) continue;
    const auto it = sheet.ratings.find(item.id);
    if (it == sheet.ratings.end()) continue;
    if (it->second < 1 || it->second > 5) {
      throw Error("rating of '" + item.id + "' is outside 1..5; validate the sheet first");
    }
    sum += it->second;
    ++count;
  }
  if (count == 0) {
    throw EmptyCategoryError("no rated " + std::string(to_string(kind)) + " items in category " +
                             std::string(to_string(category)));
  }
  return {kind, category, static_cast<double>(sum) / count, count};
}

RadarData radar(const RatingSheet& sheet, std::span<const AssessmentItem> items) {
  RadarData data;
  for (ItemKind kind : {ItemKind::benefit, ItemKind::risk}) {
    auto& axis = kind == ItemKind::benefit ? data.benefits : data.risks;
    for (Category c : kCategories) {
      try {
        axis.push_back(category_average(sheet, items, kind, c));
      } catch (const EmptyCategoryError&) {
        // category not populated on this sheet
      }
    }
  }
  return data;
}

std::string radar_to_json(const RadarData& data) {
  ordered_json out = ordered_json::array();
  for (const auto* axis : {&data.benefits, &data.risks}) {
    for (const CategoryAverage& a : *axis) {
      out.push_back({{"kind", to_string(a.kind)},
                     {"category", to_string(a.category)},
                     {"average", a.average},
                     {"item_count", a.item_count}});
    }
  }
  return out.dump(2) + "\n";
}

ImportantItems important_items(const RatingSheet& sheet, std::span<const AssessmentItem> items, int threshold) {
  ImportantItems out;
  for (const AssessmentItem& item : items) {
    const auto it = sheet.ratings.find(item.id);
    if (it == sheet.ratings.end() || it->second < threshold) continue;
    (item.kind == ItemKind::benefit ? out.benefits : out.risks).push_back(item.id);
  }
  auto by_id = [](const std::string& a, const std::string& b) { return id_sort_key(a) < id_sort_key(b); };
  std::sort(out.benefits.begin(), out.benefits.end(), by_id);
  std::sort(out.risks.begin(), out.risks.end(), by_id);
  return out;
}

std::string important_items_to_json(const ImportantItems& important, int threshold) {
  ordered_json out;
  out["threshold"] = threshold;
  out["benefits"] = important.benefits;
  out["risks"] = important.risks;
  return out.dump(2) + "\n";
}

}  // namespace cloudcost
