#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "helpdesk/error.hpp"
#include "helpdesk/text.hpp"

namespace helpdesk {

enum class Direction { incoming, outgoing };

inline std::string_view to_string(Direction d) {
  return d == Direction::incoming ? "incoming" : "outgoing";
}

inline std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "incoming") return Direction::incoming;
  if (s == "outgoing") return Direction::outgoing;
  return std::nullopt;
}

struct RawEmail {
  std::string id;
  std::string thread_id;
  Direction direction = Direction::incoming;
  std::string subject;
  std::string body;
  std::optional<std::string> timestamp;

  bool operator==(const RawEmail&) const = default;
};

/// Subject and body joined, punctuation deleted, whitespace collapsed.
struct CleanEmail {
  std::string id;
  std::string text;

  bool operator==(const CleanEmail&) const = default;
};

enum class CorpusFormat { jsonl, csv };

namespace detail {

inline RawEmail make_raw_email(std::size_t record, std::string id,
                               std::string thread_id,
                               std::string_view direction, std::string subject,
                               std::string body,
                               std::optional<std::string> timestamp) {
  auto dir = parse_direction(direction);
  if (!dir) {
    throw FormatError("record " + std::to_string(record) +
                      ": unknown direction '" + std::string(direction) +
                      "' (expected incoming or outgoing)");
  }
  return RawEmail{std::move(id),      std::move(thread_id), *dir,
                  std::move(subject), std::move(body),      std::move(timestamp)};
}

inline void check_unique_ids(const std::vector<RawEmail>& emails) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < emails.size(); ++i) {
    if (!seen.insert(emails[i].id).second) {
      throw FormatError("record " + std::to_string(i + 1) + ": duplicate id '" +
                        emails[i].id + "'");
    }
  }
}

// RFC 4180 style: quoted fields may hold commas, doubled quotes and newlines.
inline std::optional<std::vector<std::string>> read_csv_row(std::istream& in,
                                                            std::size_t& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      ++line;
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      return fields;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw FormatError("line " + std::to_string(line) + ": unterminated quoted field");
  if (!any) return std::nullopt;
  if (!field.empty() && field.back() == '\r') field.pop_back();
  fields.push_back(std::move(field));
  return fields;
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

/// One JSON object per line; blank lines are skipped. Errors name the line.
inline std::vector<RawEmail> read_jsonl(std::istream& in) {
  std::vector<RawEmail> emails;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw FormatError(where + ": record is not an object");
    auto str = [&](const char* key) -> std::string {
      auto it = j.find(key);
      if (it == j.end() || !it->is_string()) {
        throw FormatError(where + ": missing or non-string field '" + key + "'");
      }
      return it->get<std::string>();
    };
    std::optional<std::string> ts;
    if (auto it = j.find("timestamp"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) throw FormatError(where + ": field 'timestamp' must be a string or null");
      ts = it->get<std::string>();
    }
    emails.push_back(detail::make_raw_email(lineno, str("id"), str("thread_id"),
                                            str("direction"), str("subject"),
                                            str("body"), std::move(ts)));
  }
  detail::check_unique_ids(emails);
  return emails;
}

/// Header row required; columns id,thread_id,direction,subject,body,timestamp.
/// An empty timestamp cell reads as absent.
inline std::vector<RawEmail> read_csv(std::istream& in) {
  static constexpr std::string_view kColumns[] = {"id",      "thread_id", "direction",
                                                  "subject", "body",      "timestamp"};
  std::vector<RawEmail> emails;
  std::size_t line = 1;
  auto header = detail::read_csv_row(in, line);
  if (!header) return emails;
  if (header->size() != 6) throw FormatError("line 1: expected 6 header columns");
  for (std::size_t i = 0; i < 6; ++i) {
    if ((*header)[i] != kColumns[i]) {
      throw FormatError("line 1: header column " + std::to_string(i + 1) +
                        " must be '" + std::string(kColumns[i]) + "'");
    }
  }
  std::size_t record = 0;
  while (true) {
    const std::size_t start = line;
    auto row = detail::read_csv_row(in, line);
    if (!row) break;
    if (row->size() == 1 && (*row)[0].empty()) continue;
    ++record;
    if (row->size() != 6) {
      throw FormatError("record " + std::to_string(record) + " (line " +
                        std::to_string(start) + "): expected 6 fields, got " +
                        std::to_string(row->size()));
    }
    auto& f = *row;
    std::optional<std::string> ts;
    if (!f[5].empty()) ts = f[5];
    emails.push_back(detail::make_raw_email(record, f[0], f[1], f[2], f[3], f[4],
                                            std::move(ts)));
  }
  detail::check_unique_ids(emails);
  return emails;
}

inline std::vector<RawEmail> ingest(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  return format == CorpusFormat::jsonl ? read_jsonl(in) : read_csv(in);
}

inline nlohmann::json to_json(const RawEmail& e) {
  nlohmann::json j;
  j["id"] = e.id;
  j["thread_id"] = e.thread_id;
  j["direction"] = to_string(e.direction);
  j["subject"] = e.subject;
  j["body"] = e.body;
  j["timestamp"] = e.timestamp ? nlohmann::json(*e.timestamp) : nlohmann::json(nullptr);
  return j;
}

inline void write_jsonl(std::ostream& out, std::span<const RawEmail> emails) {
  for (const auto& e : emails) out << to_json(e).dump() << '\n';
}

inline void write_csv(std::ostream& out, std::span<const RawEmail> emails) {
  out << "id,thread_id,direction,subject,body,timestamp\n";
  for (const auto& e : emails) {
    out << detail::csv_escape(e.id) << ',' << detail::csv_escape(e.thread_id) << ','
        << to_string(e.direction) << ',' << detail::csv_escape(e.subject) << ','
        << detail::csv_escape(e.body) << ',' << detail::csv_escape(e.timestamp.value_or(""))
        << '\n';
  }
}

inline std::vector<RawEmail> filter_incoming(std::span<const RawEmail> emails) {
  std::vector<RawEmail> out;
  for (const auto& e : emails) {
    if (e.direction == Direction::incoming) out.push_back(e);
  }
  return out;
}

/// Throws if nothing is left after cleaning; the timestamp is dropped here.
inline CleanEmail clean(const RawEmail& email) {
  std::string joined = email.subject;
  joined.push_back(' ');
  joined += email.body;
  std::string cleaned = text::normalize(joined);
  if (cleaned.empty()) {
    throw InvalidArgument("email '" + email.id + "' is empty after cleaning");
  }
  return CleanEmail{email.id, std::move(cleaned)};
}

}  // namespace helpdesk
