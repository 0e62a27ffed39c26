#pragma once

#include <string>
#include <string_view>

namespace helpdesk::text {

/// ASCII punctuation: !"#$%&'()*+,-./:;<=>?@[\]^_`{|}~
constexpr bool is_punctuation(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 0x21 && u <= 0x2f) || (u >= 0x3a && u <= 0x40) ||
         (u >= 0x5b && u <= 0x60) || (u >= 0x7b && u <= 0x7e);
}

constexpr bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

constexpr char to_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

/// Deletes punctuation (no space inserted), collapses whitespace runs to a
/// single space and trims both ends. Casing is untouched.
inline std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_punctuation(c)) continue;
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

inline bool contains_punctuation(std::string_view s) {
  for (char c : s) {
    if (is_punctuation(c)) return true;
  }
  return false;
}

}  // namespace helpdesk::text
