#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "helpdesk/corpus.hpp"
#include "helpdesk/error.hpp"
#include "helpdesk/labeling.hpp"
#include "helpdesk/random.hpp"
#include "helpdesk/text.hpp"

namespace helpdesk {

/// Parameters of the synthetic helpdesk corpus. Index c of `counts` and
/// `signal_words` refers to category rank c.
struct SynthSpec {
  std::vector<std::size_t> counts;
  std::vector<std::vector<std::string>> signal_words;
  std::vector<std::string> filler_words;
  /// Chance that an email carries one of its own category's keywords.
  double keyword_probability = 0.95;
  /// Chance that an email also mentions a keyword of another category.
  double noise_probability = 0.4;
  /// Share of non-keyword tokens drawn from the category's signal words.
  double signal_rate = 0.3;
  /// Zipf exponent over each category's keyword list (keyword k is drawn
  /// with weight 1/(k+1)^skew); 0 means uniform.
  double keyword_skew = 2.0;
  /// Cross-talk only mentions categories ranked after the email's own, so
  /// it never changes the first-match label.
  bool lower_rank_crosstalk = true;
  std::size_t min_tokens = 5;
  std::size_t max_tokens = 40;
  std::uint64_t seed = 0;

  void validate(std::size_t num_categories) const {
    if (counts.size() != num_categories || signal_words.size() != num_categories) {
      throw InvalidArgument("synth spec needs one count and one signal list per category");
    }
    for (auto c : counts) {
      if (c < 1) throw InvalidArgument("synth spec counts must be at least 1");
    }
    for (double p : {keyword_probability, noise_probability, signal_rate}) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("synth spec probabilities must be in [0, 1]");
    }
    if (!(keyword_skew >= 0.0)) throw InvalidArgument("synth spec keyword_skew must be non-negative");
    if (filler_words.empty()) throw InvalidArgument("synth spec needs filler words");
    if (min_tokens < 1 || min_tokens > max_tokens) throw InvalidArgument("synth spec token range is invalid");
  }
};

struct SynthEmail {
  RawEmail email;
  CategoryIndex label = 0;
};

/// Imbalanced five-category default matching default_categories().
inline SynthSpec default_synth_spec(std::uint64_t seed = 0) {
  SynthSpec s;
  s.counts = {20, 12, 90, 48, 45};
  s.signal_words = {
      {"photoshop", "illustrator", "acrobat", "premiere", "indesign", "licence", "subscription",
       "expired", "products", "pdf", "editing", "design"},
      {"install", "launch", "player", "software", "solidworks", "removed", "matlab", "spss",
       "package", "launcher", "catalogue", "virtual"},
      {"module", "course", "assignment", "submission", "lecture", "grade", "upload", "lecturer",
       "deadline", "portal", "quiz", "unit"},
      {"forgotten", "reset", "login", "account", "locked", "authenticator", "code", "verify",
       "username", "sign", "credentials", "security"},
      {"connect", "router", "signal", "laptop", "slow", "dropping", "halls", "accommodation",
       "cable", "vpn", "disconnect", "speed"},
  };
  s.filler_words = {"hi",       "hello",  "please",   "help",    "thanks",    "regards",
                    "cheers",   "issue",  "problem",  "today",   "trying",    "working",
                    "cant",     "unable", "error",    "message", "since",     "yesterday",
                    "student",  "staff",  "university", "need",  "know",      "still",
                    "again",    "urgent", "advise",   "kind",    "get",       "use",
                    "computer", "pc",     "email",    "week",    "time",      "sorry",
                    "question", "tried",  "ideas",    "morning", "afternoon", "the",
                    "is",       "my",     "a",        "to",      "and",       "it",
                    "not",      "on",     "i",        "for",     "this",      "with"};
  s.seed = seed;
  return s;
}

namespace detail {

// Drops words that would create keyword matches the generator did not intend:
// words containing any keyword, and words ending in the first word of a
// multi-word keyword.
inline std::vector<std::string> without_keyword_collisions(const std::vector<std::string>& words,
                                                           std::span<const CategorySpec> categories) {
  std::vector<std::string> keys, lead_words;
  for (const auto& c : categories) {
    for (const auto& k : c.keywords) {
      auto form = match_form(k);
      if (auto sp = form.find(' '); sp != std::string::npos) lead_words.push_back(form.substr(0, sp));
      keys.push_back(std::move(form));
    }
  }
  std::vector<std::string> out;
  for (const auto& w : words) {
    const auto form = match_form(w);
    bool clash = form.empty();
    for (const auto& k : keys) clash = clash || form.find(k) != std::string::npos;
    for (const auto& l : lead_words) {
      clash = clash || (form.size() >= l.size() && form.compare(form.size() - l.size(), l.size(), l) == 0);
    }
    if (!clash) out.push_back(w);
  }
  return out;
}

// Zipf choice: the first keyword of each category dominates, the last ones
// are rare.
inline const std::string& pick_keyword(const CategorySpec& c, double skew, Rng& rng) {
  std::vector<double> w(c.keywords.size());
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) total += w[k] = std::pow(static_cast<double>(k + 1), -skew);
  double u = rng.uniform01() * total;
  for (std::size_t k = 0; k < w.size(); ++k) {
    u -= w[k];
    if (u < 0.0) return c.keywords[k];
  }
  return c.keywords.back();
}

// Another category, weighted by its count: busy topics get mentioned in
// passing more often.
inline std::optional<std::size_t> pick_crosstalk(const SynthSpec& spec, std::size_t c, Rng& rng) {
  const std::size_t first = spec.lower_rank_crosstalk ? c + 1 : 0;
  std::size_t total = 0;
  for (std::size_t o = first; o < spec.counts.size(); ++o) total += o == c ? 0 : spec.counts[o];
  if (total == 0) return std::nullopt;
  std::size_t pick = rng.uniform_index(total);
  for (std::size_t o = first; o < spec.counts.size(); ++o) {
    if (o == c) continue;
    if (pick < spec.counts[o]) return o;
    pick -= spec.counts[o];
  }
  return std::nullopt;
}

}  // namespace detail

/// Emits counts[c] incoming emails per category, grouped by category. Each
/// is 5-40 tokens of filler and category signal words, with the category's
/// own keyword injected with keyword_probability and a keyword from another
/// category with noise_probability. Punctuation and capitalisation are
/// sprinkled in so the cleaning stage has work to do.
inline std::vector<SynthEmail> generate_corpus(const SynthSpec& spec,
                                               std::span<const CategorySpec> categories) {
  spec.validate(categories.size());
  const auto filler = detail::without_keyword_collisions(spec.filler_words, categories);
  if (filler.empty()) throw InvalidArgument("every filler word collides with a keyword");
  std::vector<std::vector<std::string>> signal;
  for (const auto& words : spec.signal_words) {
    signal.push_back(detail::without_keyword_collisions(words, categories));
  }

  Rng rng(spec.seed);
  std::vector<SynthEmail> out;
  std::size_t serial = 0;
  for (std::size_t c = 0; c < categories.size(); ++c) {
    for (std::size_t i = 0; i < spec.counts[c]; ++i) {
      const std::size_t len = spec.min_tokens + rng.uniform_index(spec.max_tokens - spec.min_tokens + 1);
      std::vector<std::string> tokens;
      tokens.reserve(len + 2);
      for (std::size_t t = 0; t < len; ++t) {
        const bool use_signal = !signal[c].empty() && rng.bernoulli(spec.signal_rate);
        const auto& pool = use_signal ? signal[c] : filler;
        tokens.push_back(pool[rng.uniform_index(pool.size())]);
      }
      if (rng.bernoulli(spec.keyword_probability)) {
        const auto& kw = detail::pick_keyword(categories[c], spec.keyword_skew, rng);
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(tokens.size() + 1)), kw);
      }
      if (rng.bernoulli(spec.noise_probability)) {
        if (const auto other = detail::pick_crosstalk(spec, c, rng)) {
          const auto& kw = detail::pick_keyword(categories[*other], spec.keyword_skew, rng);
          tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(tokens.size() + 1)), kw);
        }
      }

      const std::size_t subject_len = std::min<std::size_t>(tokens.size() - 1, 2 + rng.uniform_index(3));
      std::string subject, body;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        std::string& dst = t < subject_len ? subject : body;
        if (!dst.empty()) dst.push_back(' ');
        dst += tokens[t];
      }
      if (!subject.empty()) subject[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(subject[0])));
      static constexpr std::string_view kEndings[] = {"", ".", "?", "!!", " - thanks."};
      body += kEndings[rng.uniform_index(std::size(kEndings))];

      ++serial;
      RawEmail e;
      e.id = "synth-" + std::to_string(serial);
      e.thread_id = "thread-" + std::to_string(serial);
      e.direction = Direction::incoming;
      e.subject = std::move(subject);
      e.body = std::move(body);
      out.push_back({std::move(e), c});
    }
  }
  return out;
}

}  // namespace helpdesk
