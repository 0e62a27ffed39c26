#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "helpdesk/corpus.hpp"
#include "helpdesk/error.hpp"
#include "helpdesk/text.hpp"

namespace helpdesk {

/// A user-defined category. Lower rank wins when several categories match.
struct CategorySpec {
  std::string name;
  std::vector<std::string> keywords;
  int rank = 0;
  std::string template_id;

  bool operator==(const CategorySpec&) const = default;
};

/// Index into the rank-ordered category list.
using CategoryIndex = std::size_t;

struct LabeledEmail {
  CleanEmail email;
  CategoryIndex category = 0;

  bool operator==(const LabeledEmail&) const = default;
};

/// Form used for substring matching: punctuation deleted, lowercased.
inline std::string match_form(std::string_view s) {
  return text::to_lower(text::normalize(s));
}

/// Returns `specs` sorted by rank after checking the config invariants.
inline std::vector<CategorySpec> validate_categories(std::vector<CategorySpec> specs) {
  if (specs.empty()) throw InvalidArgument("category config is empty");
  std::sort(specs.begin(), specs.end(),
            [](const auto& a, const auto& b) { return a.rank < b.rank; });
  std::set<std::string> names;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (s.name.empty()) throw InvalidArgument("category with empty name");
    if (!names.insert(s.name).second) {
      throw InvalidArgument("duplicate category name '" + s.name + "'");
    }
    if (s.rank != static_cast<int>(i)) {
      throw InvalidArgument("category ranks must be unique and contiguous from 0 (category '" +
                            s.name + "' has rank " + std::to_string(s.rank) + ")");
    }
    if (s.keywords.empty()) {
      throw InvalidArgument("category '" + s.name + "' has no keywords");
    }
    for (const auto& k : s.keywords) {
      if (match_form(k).empty()) {
        throw InvalidArgument("category '" + s.name + "' has a keyword that is empty after cleaning");
      }
    }
  }
  return specs;
}

/// The five shipped helpdesk categories, in precedence order.
inline std::vector<CategorySpec> default_categories() {
  return {
      {"adobe", {"Adobe", "Creative Cloud"}, 0, "adobe"},
      {"appsanywhere", {"AppsAnywhere", "license", "cloudpaging"}, 1, "appsanywhere"},
      {"blackboard", {"blackboard"}, 2, "blackboard"},
      {"password", {"password", "mfa", "multifactor", "multi-factor", "multi factor"}, 3,
       "password"},
      {"wifi",
       {"wifi", "wi-fi", "network", "eduroam", "connection", "internet", "remote access"},
       4,
       "wifi"},
  };
}

inline std::vector<std::string> category_names(std::span<const CategorySpec> categories) {
  std::vector<std::string> names;
  names.reserve(categories.size());
  for (const auto& c : categories) names.push_back(c.name);
  return names;
}

inline std::optional<CategoryIndex> find_category(std::span<const CategorySpec> categories,
                                                  std::string_view name) {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i].name == name) return i;
  }
  return std::nullopt;
}

inline nlohmann::json categories_to_json(std::span<const CategorySpec> categories) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : categories) {
    arr.push_back({{"name", c.name},
                   {"rank", c.rank},
                   {"keywords", c.keywords},
                   {"template_id", c.template_id}});
  }
  return arr;
}

inline std::vector<CategorySpec> categories_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw FormatError("categories: expected an array");
  std::vector<CategorySpec> specs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& j = arr[i];
    const std::string where = "categories[" + std::to_string(i) + "]";
    try {
      CategorySpec s;
      s.name = j.at("name").get<std::string>();
      s.rank = j.at("rank").get<int>();
      s.keywords = j.at("keywords").get<std::vector<std::string>>();
      s.template_id = j.value("template_id", s.name);
      specs.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return validate_categories(std::move(specs));
}

/// Reads {"categories": [{name, rank, keywords, template_id}, ...]}.
inline std::vector<CategorySpec> load_categories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open category config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("category config '" + path + "': " + e.what());
  }
  if (!j.contains("categories")) {
    throw FormatError("category config '" + path + "': missing field 'categories'");
  }
  return categories_from_json(j["categories"]);
}

inline void save_categories(const std::string& path, std::span<const CategorySpec> categories) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write category config '" + path + "'");
  out << nlohmann::json{{"categories", categories_to_json(categories)}}.dump(2) << '\n';
}

/// Lowest-rank category with a keyword occurring (case-insensitively, after
/// cleaning both sides) anywhere in the email text. Plain substring match.
inline std::optional<CategoryIndex> match_category(const CleanEmail& email,
                                                   std::span<const CategorySpec> categories) {
  const std::string haystack = match_form(email.text);
  for (std::size_t i = 0; i < categories.size(); ++i) {
    for (const auto& k : categories[i].keywords) {
      if (haystack.find(match_form(k)) != std::string::npos) return i;
    }
  }
  return std::nullopt;
}

struct LabeledCorpus {
  std::vector<LabeledEmail> emails;
  std::vector<std::size_t> counts;  // per category index
};

inline LabeledCorpus build_labeled_corpus(std::span<const CleanEmail> emails,
                                          std::span<const CategorySpec> categories) {
  LabeledCorpus out;
  out.counts.assign(categories.size(), 0);
  for (const auto& e : emails) {
    if (auto c = match_category(e, categories)) {
      out.emails.push_back({e, *c});
      ++out.counts[*c];
    }
  }
  if (out.emails.empty()) {
    throw InvalidArgument("no email matched any category keyword; nothing to train on");
  }
  return out;
}

}  // namespace helpdesk
