#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cloudcost/diagnostic.hpp"

namespace cloudcost {

enum class ItemKind { benefit, risk };

// Radar axis order.
enum class Category { organizational, legal, security, technical, financial };

inline constexpr Category kCategories[] = {Category::organizational, Category::legal, Category::security,
                                           Category::technical, Category::financial};

std::string_view to_string(ItemKind kind);
std::string_view to_string(Category category);
std::optional<ItemKind> item_kind_from_string(std::string_view text);
std::optional<Category> category_from_string(std::string_view text);

struct AssessmentItem {
  std::string id;  // "B2", "R27"
  ItemKind kind = ItemKind::benefit;
  Category category = Category::technical;
  std::string statement;
  std::optional<std::string> mitigation;  // risks only
  std::optional<std::string> indicators;  // risks only
  std::vector<std::string> references;
  bool applies_to_private_cloud = false;
};

// {"items": [...]}. Throws ParseError, SchemaError, or ValidationError
// (duplicate ids, mitigation text on a benefit).
std::vector<AssessmentItem> load_items(std::string_view document);

// Likert importance: 1 = unimportant ... 5 = very important.
struct RatingSheet {
  std::string respondent;
  std::string role_view;
  std::map<std::string, int> ratings;
};

// CSV with header "item_id,rating", optionally preceded by "# respondent: ..."
// and "# view: ..." lines. Throws ParseError on malformed rows.
RatingSheet parse_ratings_csv(std::string_view text);

// Errors for out-of-range ratings and unknown ids; one warning per unrated item.
std::vector<Diagnostic> validate_sheet(const RatingSheet& sheet, std::span<const AssessmentItem> items);

struct CategoryAverage {
  ItemKind kind = ItemKind::benefit;
  Category category = Category::technical;
  double average = 0.0;
  int item_count = 0;
};

// Mean rating of the rated items of one kind and category. Unrated items are
// left out. Throws EmptyCategoryError when nothing in the category is rated.
CategoryAverage category_average(const RatingSheet& sheet, std::span<const AssessmentItem> items, ItemKind kind,
                                 Category category);

struct RadarData {
  std::vector<CategoryAverage> benefits;
  std::vector<CategoryAverage> risks;
};

// Averages for every populated (kind, category), in axis order.
RadarData radar(const RatingSheet& sheet, std::span<const AssessmentItem> items);

// JSON array of {kind, category, average, item_count}.
std::string radar_to_json(const RadarData& data);

struct ImportantItems {
  std::vector<std::string> benefits;
  std::vector<std::string> risks;
};

// Rated items at or above `threshold`, sorted by id (numeric-aware: B2 < B10).
ImportantItems important_items(const RatingSheet& sheet, std::span<const AssessmentItem> items, int threshold = 4);

std::string important_items_to_json(const ImportantItems& important, int threshold);

}  // namespace cloudcost
