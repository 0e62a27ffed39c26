#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "helpdesk/error.hpp"
#include "helpdesk/labeling.hpp"
#include "helpdesk/random.hpp"
#include "helpdesk/text.hpp"
#include "helpdesk/textprep.hpp"

namespace helpdesk {

/// word -> synonyms, all lowercase. Synonym lists are kept sorted and never
/// contain the headword itself.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;

  void add(std::string_view word, std::vector<std::string> synonyms) {
    std::string key = text::to_lower(word);
    if (key.empty()) throw InvalidArgument("thesaurus entry with empty headword");
    auto& slot = entries_[key];
    for (auto& s : synonyms) {
      std::string syn = text::to_lower(s);
      if (syn.empty() || syn == key) continue;
      slot.push_back(std::move(syn));
    }
    std::sort(slot.begin(), slot.end());
    slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
    if (slot.empty()) {
      entries_.erase(key);
      throw InvalidArgument("thesaurus entry '" + key + "' has no synonyms other than itself");
    }
  }

  const std::vector<std::string>* find(std::string_view word) const {
    auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const auto& entries() const { return entries_; }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

/// Parses "word: synonym1, synonym2" lines. '#' starts a comment line.
inline SynonymLexicon read_thesaurus(std::istream& in) {
  SynonymLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.starts_with('#')) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw FormatError("thesaurus line " + std::to_string(lineno) + ": expected 'word: synonyms'");
    }
    std::string head = text::normalize(line.substr(0, colon));
    std::vector<std::string> syns;
    std::stringstream rest(line.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      std::string s = text::normalize(item);
      if (!s.empty()) syns.push_back(std::move(s));
    }
    try {
      lex.add(head, std::move(syns));
    } catch (const InvalidArgument& e) {
      throw FormatError("thesaurus line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return lex;
}

inline SynonymLexicon load_thesaurus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open thesaurus '" + path + "'");
  return read_thesaurus(in);
}

inline void write_thesaurus(std::ostream& out, const SynonymLexicon& lex) {
  for (const auto& [word, syns] : lex.entries()) {
    out << word << ':';
    for (std::size_t i = 0; i < syns.size(); ++i) out << (i ? ", " : " ") << syns[i];
    out << '\n';
  }
}

/// Small helpdesk thesaurus in lemma form.
inline SynonymLexicon default_lexicon() {
  static constexpr std::string_view kEntries =
      "work: function, operate, run\n"
      "problem: issue, fault, trouble\n"
      "issue: problem, fault\n"
      "error: fault, failure, glitch\n"
      "help: assist, support\n"
      "urgent: critical, immediate\n"
      "need: require, want\n"
      "unable: cannot\n"
      "install: setup, deploy\n"
      "launch: open, start\n"
      "remove: delete, uninstall\n"
      "software: program, application\n"
      "app: application, program\n"
      "laptop: notebook, computer\n"
      "computer: pc, machine\n"
      "pc: computer, machine\n"
      "slow: sluggish, laggy\n"
      "connect: link, join\n"
      "signal: reception\n"
      "reset: change, renew\n"
      "login: signin, logon\n"
      "account: profile\n"
      "lock: block, freeze\n"
      "code: pin, token\n"
      "forget: lose, misplace\n"
      "module: unit, course\n"
      "course: programme, module\n"
      "assignment: coursework, task\n"
      "upload: submit, send\n"
      "submission: entry, upload\n"
      "lecture: class, session\n"
      "grade: mark, score\n"
      "expire: lapse, end\n"
      "subscription: plan, membership\n"
      "licence: permit, entitlement\n"
      "product: application, tool\n"
      "message: notice, alert\n"
      "today: now\n"
      "question: query, enquiry\n"
      "email: mail, message\n"
      "advise: suggest, recommend\n"
      "hi: hello, hey\n"
      "hello: hi, hey\n";
  std::istringstream in{std::string(kEntries)};
  return read_thesaurus(in);
}

struct AugmentConfig {
  std::size_t target_per_class = 200;
  double replace_fraction = 0.3;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(replace_fraction > 0.0 && replace_fraction <= 1.0)) {
      throw InvalidArgument("replace_fraction must be in (0, 1]");
    }
    if (target_per_class < 1) throw InvalidArgument("target_per_class must be at least 1");
  }
};

/// Swaps ceil(fraction * |eligible|) tokens that have lexicon entries for a
/// uniformly chosen synonym. Positions are drawn without replacement.
inline TokenSeq synonym_replace(const TokenSeq& tokens, const SynonymLexicon& lexicon,
                                double replace_fraction, Rng& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (lexicon.find(tokens[i])) eligible.push_back(i);
  }
  TokenSeq out = tokens;
  if (eligible.empty()) return out;
  // Slack keeps products like 0.3 * 10 from rounding up past the exact value.
  auto count = static_cast<std::size_t>(
      std::ceil(replace_fraction * static_cast<double>(eligible.size()) - 1e-9));
  count = std::min(count, eligible.size());
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t j = k + rng.uniform_index(eligible.size() - k);
    std::swap(eligible[k], eligible[j]);
    const std::size_t pos = eligible[k];
    const auto& syns = *lexicon.find(tokens[pos]);
    out[pos] = syns[rng.uniform_index(syns.size())];
  }
  return out;
}

/// One preprocessed training example. Augmented samples point back at the
/// original they were generated from.
struct TrainingSample {
  std::string id;
  CategoryIndex category = 0;
  TokenSeq tokens;
  bool augmented = false;
  std::string source_id;

  bool operator==(const TrainingSample&) const = default;
};

/// Tops every category up to `target_per_class` with synonym-replaced copies
/// of its originals, taken round-robin in input order. Originals are kept
/// untouched (also when a category already exceeds the target). Output is
/// grouped by category rank; each category draws from its own sub-seed.
inline std::vector<TrainingSample> rebalance(std::span<const TrainingSample> train,
                                             std::span<const CategorySpec> categories,
                                             const AugmentConfig& config,
                                             const SynonymLexicon& lexicon) {
  config.validate();
  std::vector<std::vector<const TrainingSample*>> groups(categories.size());
  for (const auto& s : train) {
    if (s.category >= categories.size()) {
      throw InvalidArgument("training sample '" + s.id + "' has category index " +
                            std::to_string(s.category) + " outside the category list");
    }
    groups[s.category].push_back(&s);
  }
  std::vector<TrainingSample> out;
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const auto& originals = groups[c];
    if (originals.empty()) {
      throw InvalidArgument("category '" + categories[c].name +
                            "' has no training samples to augment from");
    }
    for (const auto* s : originals) out.push_back(*s);
    Rng rng(derive_seed(config.seed, c));
    for (std::size_t k = originals.size(), n = 0; k < config.target_per_class; ++k, ++n) {
      const auto& src = *originals[n % originals.size()];
      TrainingSample variant;
      variant.id = src.id + "#aug" + std::to_string(n / originals.size() + 1);
      variant.category = c;
      variant.tokens = synonym_replace(src.tokens, lexicon, config.replace_fraction, rng);
      variant.augmented = true;
      variant.source_id = src.id;
      out.push_back(std::move(variant));
    }
  }
  return out;
}

}  // namespace helpdesk
