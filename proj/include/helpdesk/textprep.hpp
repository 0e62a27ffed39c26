#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "helpdesk/error.hpp"
#include "helpdesk/text.hpp"

namespace helpdesk {

/// Ordered lowercase tokens; never empty strings, never punctuation.
using TokenSeq = std::vector<std::string>;
using Stoplist = std::set<std::string, std::less<>>;

struct SuffixRule {
  std::string suffix;
  std::string replacement;
  std::size_t min_stem = 1;
  /// Inflectional verb ending ("ing", "ed"): the stem must contain a vowel,
  /// a doubled final consonant is undoubled, otherwise a trailing "e" is
  /// restored when the stem ends with one of LemmaRules::restore_e.
  bool verb_ending = false;
  /// Rule is skipped when the stem ends with any of these.
  std::vector<std::string> blocked_after;

  bool operator==(const SuffixRule&) const = default;
};

struct LemmaRules {
  std::vector<SuffixRule> suffix_rules;
  std::map<std::string, std::string, std::less<>> exceptions;
  std::vector<std::string> restore_e;

  bool operator==(const LemmaRules&) const = default;
};

inline LemmaRules default_lemma_rules() {
  LemmaRules r;
  r.suffix_rules = {
      {"ies", "y", 2, false, {}},
      {"sses", "ss", 1, false, {}},
      {"ches", "ch", 1, false, {}},
      {"shes", "sh", 1, false, {}},
      {"xes", "x", 1, false, {}},
      {"ing", "", 3, true, {}},
      {"ied", "y", 2, false, {}},
      {"ed", "", 3, true, {"e"}},
      {"s", "", 3, false, {"s", "u", "i"}},
  };
  r.restore_e = {"at", "bl", "iz", "ang", "ov", "iv", "ur", "ag", "us", "uir", "pir", "lv", "uc"};
  r.exceptions = {
      {"is", "be"},           {"are", "be"},          {"was", "be"},
      {"were", "be"},         {"been", "be"},         {"being", "be"},
      {"am", "be"},           {"has", "have"},        {"had", "have"},
      {"having", "have"},     {"does", "do"},         {"did", "do"},
      {"doing", "do"},        {"done", "do"},         {"went", "go"},
      {"gone", "go"},         {"goes", "go"},         {"going", "go"},
      {"used", "use"},        {"using", "use"},       {"uses", "use"},
      {"added", "add"},       {"adding", "add"},      {"logged", "log"},
      {"logging", "log"},     {"forgot", "forget"},   {"forgotten", "forget"},
      {"broken", "break"},    {"broke", "break"},     {"said", "say"},
      {"says", "say"},        {"made", "make"},       {"gave", "give"},
      {"given", "give"},      {"got", "get"},         {"gotten", "get"},
      {"kept", "keep"},       {"sent", "send"},       {"taken", "take"},
      {"took", "take"},       {"tried", "try"},       {"trying", "try"},
      {"seems", "seem"},      {"children", "child"},  {"people", "people"},
      {"during", "during"},   {"morning", "morning"}, {"evening", "evening"},
      {"nothing", "nothing"}, {"something", "something"},
      {"anything", "anything"}, {"everything", "everything"},
      {"thing", "thing"},     {"things", "thing"},    {"string", "string"},
      {"bring", "bring"},     {"spring", "spring"},   {"cloudpaging", "cloudpaging"},
      {"ourselves", "ourselves"}, {"yourselves", "yourselves"},
      {"themselves", "themselves"}, {"always", "always"}, {"news", "news"},
      {"series", "series"},   {"access", "access"},   {"windows", "windows"},
      {"teams", "teams"},     {"its", "its"},         {"this", "this"},
  };
  return r;
}

namespace detail {

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline bool has_vowel(std::string_view s) {
  return s.find_first_of("aeiouy") != std::string_view::npos;
}

inline bool is_consonant(char c) {
  return c >= 'a' && c <= 'z' && std::string_view("aeiou").find(c) == std::string_view::npos;
}

// One rewrite step; returns false when no rule applies.
inline bool lemma_step(std::string& word, const LemmaRules& rules) {
  for (const auto& rule : rules.suffix_rules) {
    if (!ends_with(word, rule.suffix)) continue;
    std::string stem = word.substr(0, word.size() - rule.suffix.size());
    if (stem.size() < rule.min_stem || stem.empty()) continue;
    bool blocked = false;
    for (const auto& b : rule.blocked_after) blocked = blocked || ends_with(stem, b);
    if (blocked) continue;
    if (rule.verb_ending) {
      if (!has_vowel(stem)) continue;
      const std::size_t n = stem.size();
      if (n >= 2 && stem[n - 1] == stem[n - 2] && is_consonant(stem[n - 1]) &&
          std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
        stem.pop_back();
      } else {
        for (const auto& e : rules.restore_e) {
          if (ends_with(stem, e)) {
            stem.push_back('e');
            break;
          }
        }
      }
    }
    stem += rule.replacement;
    if (stem.empty() || stem == word) continue;
    word = std::move(stem);
    return true;
  }
  return false;
}

}  // namespace detail

/// Exception table first (terminal), then suffix rules repeatedly until none
/// applies. Every rewrite shortens the word, so this terminates, and the
/// result is a fixpoint: lemmatize(lemmatize(w)) == lemmatize(w).
inline std::string lemmatize(std::string_view token, const LemmaRules& rules) {
  std::string word(token);
  for (;;) {
    if (auto it = rules.exceptions.find(word); it != rules.exceptions.end()) {
      return it->second;
    }
    if (!detail::lemma_step(word, rules)) return word;
  }
}

/// Lowercases, drops punctuation, splits on whitespace.
inline TokenSeq tokenize(std::string_view s) {
  TokenSeq tokens;
  std::string current;
  for (char c : s) {
    if (text::is_space(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (!text::is_punctuation(c)) {
      current.push_back(text::to_lower(c));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

inline TokenSeq remove_stopwords(const TokenSeq& tokens, const Stoplist& stoplist) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.contains(t)) out.push_back(t);
  }
  return out;
}

/// English function words in lemma form. Negations are deliberately absent.
inline Stoplist default_stoplist() {
  return {
      "a",       "about",  "above",   "after",   "again",      "against", "all",
      "also",    "an",     "and",     "any",     "as",         "at",      "be",
      "because", "before", "below",   "between", "both",       "but",     "by",
      "can",     "could",  "do",      "down",    "during",     "each",    "few",
      "for",     "from",   "further", "have",    "he",         "her",     "here",
      "herself", "him",    "himself", "his",     "how",        "i",
      "if",      "im",     "in",      "into",    "it",         "its",     "itself",
      "ive",     "just",   "me",      "may",     "might",      "more",    "most",
      "must",    "my",     "myself",  "of",      "off",        "on",      "once",
      "only",    "or",     "other",   "our",     "ourselves",  "out",     "over",
      "own",     "same",   "shall",   "she",     "should",     "so",      "some",
      "such",    "than",   "that",    "the",     "their",      "them",    "themselves",
      "then",    "there",  "these",   "they",    "this",       "those",   "through",
      "to",      "too",    "under",   "until",   "up",         "very",    "we",
      "what",    "when",   "where",   "which",   "while",      "who",     "whom",
      "why",     "will",   "with",    "would",   "you",        "youre",   "your",
      "yourself", "yourselves", "theyre",
      "hes",     "weve",    "youve",   "youd",
  };
}

/// A text-preparation setup: lemma rules plus stop-word list.
struct TextPrep {
  LemmaRules rules = default_lemma_rules();
  Stoplist stoplist = default_stoplist();

  bool operator==(const TextPrep&) const = default;
};

/// tokenize -> lemmatize each token -> remove stop-words.
inline TokenSeq preprocess(std::string_view s, const LemmaRules& rules, const Stoplist& stoplist) {
  TokenSeq tokens = tokenize(s);
  for (auto& t : tokens) t = lemmatize(t, rules);
  return remove_stopwords(tokens, stoplist);
}

inline TokenSeq preprocess(std::string_view s, const TextPrep& prep) {
  return preprocess(s, prep.rules, prep.stoplist);
}

inline std::string join_tokens(const TokenSeq& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

/// One entry per line; blank lines and lines starting with '#' are ignored.
inline Stoplist read_stoplist(std::istream& in) {
  Stoplist out;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = text::to_lower(text::normalize(line));
    if (w.empty() || line.starts_with('#')) continue;
    out.insert(std::move(w));
  }
  return out;
}

/// "word<TAB>lemma" per line.
inline std::map<std::string, std::string, std::less<>> read_lemma_exceptions(std::istream& in) {
  std::map<std::string, std::string, std::less<>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with('#')) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("lemma exceptions line " + std::to_string(lineno) +
                        ": expected word<TAB>lemma");
    }
    std::string word = text::to_lower(line.substr(0, tab));
    std::string lemma = text::to_lower(line.substr(tab + 1));
    if (word.empty() || lemma.empty()) {
      throw FormatError("lemma exceptions line " + std::to_string(lineno) + ": empty entry");
    }
    out[word] = lemma;
  }
  return out;
}

inline Stoplist load_stoplist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stop-word list '" + path + "'");
  return read_stoplist(in);
}

inline std::map<std::string, std::string, std::less<>> load_lemma_exceptions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lemma exception table '" + path + "'");
  return read_lemma_exceptions(in);
}

}  // namespace helpdesk
