#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "helpdesk/corpus.hpp"
#include "helpdesk/error.hpp"
#include "helpdesk/labeling.hpp"
#include "helpdesk/textprep.hpp"

namespace helpdesk {

/// Dense model input: token counts over a vocabulary, or 0/1 keyword flags.
using FeatureVector = std::vector<double>;

/// Sorted, duplicate-free term list with a term -> position index.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Throws unless `terms` is strictly increasing.
  static Vocabulary from_terms(std::vector<std::string> terms) {
    for (std::size_t i = 1; i < terms.size(); ++i) {
      if (!(terms[i - 1] < terms[i])) {
        throw InvalidArgument("vocabulary terms must be sorted and unique (at '" + terms[i] + "')");
      }
    }
    Vocabulary v;
    v.terms_ = std::move(terms);
    v.index_.reserve(v.terms_.size());
    for (std::size_t i = 0; i < v.terms_.size(); ++i) v.index_.emplace(v.terms_[i], i);
    return v;
  }

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }

  std::optional<std::size_t> index_of(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const Vocabulary& other) const { return terms_ == other.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline Vocabulary build_vocabulary(std::span<const TokenSeq> docs) {
  std::vector<std::string> terms;
  for (const auto& d : docs) terms.insert(terms.end(), d.begin(), d.end());
  if (terms.empty()) throw InvalidArgument("cannot build a vocabulary from an empty corpus");
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return Vocabulary::from_terms(std::move(terms));
}

/// Occurrence counts per vocabulary term; unknown tokens are ignored.
inline FeatureVector bow_vector(const TokenSeq& tokens, const Vocabulary& vocab) {
  FeatureVector v(vocab.size(), 0.0);
  for (const auto& t : tokens) {
    if (auto i = vocab.index_of(t)) v[*i] += 1.0;
  }
  return v;
}

/// Per-feature min-max scaling fitted on training vectors. Features that are
/// constant in training map to 0.
struct MinMaxScaler {
  std::vector<double> min;
  std::vector<double> max;

  static MinMaxScaler fit(std::span<const FeatureVector> X) {
    if (X.empty()) throw InvalidArgument("cannot fit a scaler on no samples");
    MinMaxScaler s{X[0], X[0]};
    for (const auto& x : X) {
      if (x.size() != s.min.size()) throw InvalidArgument("scaler input vectors differ in dimension");
      for (std::size_t k = 0; k < x.size(); ++k) {
        s.min[k] = std::min(s.min[k], x[k]);
        s.max[k] = std::max(s.max[k], x[k]);
      }
    }
    return s;
  }

  void apply(FeatureVector& x) const {
    if (x.size() != min.size()) throw InvalidArgument("scaler dimension mismatch");
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double range = max[k] - min[k];
      x[k] = range > 0.0 ? (x[k] - min[k]) / range : 0.0;
    }
  }

  bool operator==(const MinMaxScaler&) const = default;
};

/// Keywords of all categories in (rank, list position) order.
inline std::vector<std::string> flatten_keywords(std::span<const CategorySpec> categories) {
  std::vector<std::string> out;
  for (const auto& c : categories) out.insert(out.end(), c.keywords.begin(), c.keywords.end());
  return out;
}

/// One 0/1 flag per flattened keyword, using the labeling substring rule.
inline FeatureVector keyword_vector(const CleanEmail& email,
                                    std::span<const CategorySpec> categories) {
  const std::string haystack = match_form(email.text);
  FeatureVector v;
  for (const auto& c : categories) {
    for (const auto& k : c.keywords) {
      v.push_back(haystack.find(match_form(k)) != std::string::npos ? 1.0 : 0.0);
    }
  }
  return v;
}

inline void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (const auto& t : vocab.terms()) out << t << '\n';
}

inline Vocabulary read_vocabulary(std::istream& in) {
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) terms.push_back(line);
  }
  return Vocabulary::from_terms(std::move(terms));
}

}  // namespace helpdesk
