#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpdesk/error.hpp"
#include "helpdesk/labeling.hpp"

namespace helpdesk {

/// One line of a labeled dataset file. Augmented records carry tokenized
/// text and the id of the original they were derived from.
struct DatasetRecord {
  std::string id;
  std::string text;
  CategoryIndex category = 0;
  bool augmented = false;
  std::string source_id;

  bool operator==(const DatasetRecord&) const = default;
};

inline std::vector<DatasetRecord> to_records(std::span<const LabeledEmail> emails) {
  std::vector<DatasetRecord> out;
  out.reserve(emails.size());
  for (const auto& e : emails) out.push_back({e.email.id, e.email.text, e.category, false, {}});
  return out;
}

inline std::vector<LabeledEmail> originals_of(std::span<const DatasetRecord> records) {
  std::vector<LabeledEmail> out;
  for (const auto& r : records) {
    if (!r.augmented) out.push_back({{r.id, r.text}, r.category});
  }
  return out;
}

/// {"id", "text", "category"} per line, plus "augmented"/"source_id" for
/// generated samples. Categories are written by name.
inline void write_dataset(std::ostream& out, std::span<const DatasetRecord> records,
                          std::span<const CategorySpec> categories) {
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["text"] = r.text;
    j["category"] = categories[r.category].name;
    if (r.augmented) {
      j["augmented"] = true;
      j["source_id"] = r.source_id;
    }
    out << j.dump() << '\n';
  }
}

inline std::vector<DatasetRecord> read_dataset(std::istream& in,
                                               std::span<const CategorySpec> categories) {
  std::vector<DatasetRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "dataset line " + std::to_string(lineno);
    try {
      const auto j = nlohmann::json::parse(line);
      DatasetRecord r;
      r.id = j.at("id").get<std::string>();
      r.text = j.at("text").get<std::string>();
      const auto name = j.at("category").get<std::string>();
      const auto idx = find_category(categories, name);
      if (!idx) throw FormatError(where + ": unknown category '" + name + "'");
      r.category = *idx;
      r.augmented = j.value("augmented", false);
      r.source_id = j.value("source_id", std::string{});
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<DatasetRecord> load_dataset(const std::string& path,
                                               std::span<const CategorySpec> categories) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset '" + path + "'");
  return read_dataset(in, categories);
}

}  // namespace helpdesk
