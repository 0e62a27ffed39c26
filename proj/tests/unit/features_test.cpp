#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "helpdesk/features.hpp"
#include "helpdesk/random.hpp"
#include "helpdesk/synth.hpp"

using namespace helpdesk;

namespace {

std::size_t keyword_pos(std::string_view kw) {
  const auto all = flatten_keywords(default_categories());
  return static_cast<std::size_t>(std::find(all.begin(), all.end(), kw) - all.begin());
}

}  // namespace

TEST(Vocabulary, SortedUnion) {
  const std::vector<TokenSeq> docs = {{"internet", "not", "work"}, {"work", "password"}};
  const auto v = build_vocabulary(docs);
  EXPECT_EQ(v.terms(), (std::vector<std::string>{"internet", "not", "password", "work"}));
  EXPECT_EQ(build_vocabulary(docs), v);
  EXPECT_EQ(build_vocabulary(std::vector<TokenSeq>{{"a", "a", "a"}}).terms(), std::vector<std::string>{"a"});
  EXPECT_THROW(build_vocabulary(std::vector<TokenSeq>{}), InvalidArgument);
  EXPECT_THROW(build_vocabulary(std::vector<TokenSeq>{{}}), InvalidArgument);
}

TEST(Vocabulary, FromTermsRequiresSortedUnique) {
  EXPECT_THROW(Vocabulary::from_terms({"b", "a"}), InvalidArgument);
  EXPECT_THROW(Vocabulary::from_terms({"a", "a"}), InvalidArgument);
  const auto v = Vocabulary::from_terms({"a", "b"});
  EXPECT_EQ(v.index_of("b"), 1u);
  EXPECT_FALSE(v.index_of("c"));
}

TEST(Vocabulary, FileRoundTrip) {
  const auto v = Vocabulary::from_terms({"internet", "not", "work"});
  std::stringstream s;
  write_vocabulary(s, v);
  EXPECT_EQ(read_vocabulary(s), v);
}

TEST(BagOfWords, CountsOccurrences) {
  const auto v = Vocabulary::from_terms({"internet", "not", "password", "work"});
  EXPECT_EQ(bow_vector({"work", "work", "internet"}, v), (FeatureVector{1, 0, 0, 2}));
  EXPECT_EQ(bow_vector({"zzz", "qqq"}, v), (FeatureVector{0, 0, 0, 0}));
  EXPECT_EQ(bow_vector({"internet", "work", "work"}, v), bow_vector({"work", "internet", "work"}, v));
}

TEST(BagOfWords, SumEqualsInVocabularyTokens) {
  const auto synth = generate_corpus(default_synth_spec(2), default_categories());
  const TextPrep prep;
  std::vector<TokenSeq> docs;
  for (std::size_t i = 0; i < synth.size(); i += 2) docs.push_back(preprocess(synth[i].email.body, prep));
  const auto v = build_vocabulary(docs);
  for (std::size_t i = 1; i < synth.size(); i += 2) {
    const auto tokens = preprocess(synth[i].email.body, prep);
    const auto x = bow_vector(tokens, v);
    ASSERT_EQ(x.size(), v.size());
    std::size_t known = 0;
    for (const auto& t : tokens) known += v.index_of(t).has_value();
    EXPECT_EQ(std::accumulate(x.begin(), x.end(), 0.0), static_cast<double>(known));
  }
}

TEST(KeywordVector, Dimension18AndSingleHit) {
  const auto cats = default_categories();
  const auto x = keyword_vector({"1", "adobe licence expired"}, cats);
  ASSERT_EQ(x.size(), 18u);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i], i == keyword_pos("Adobe") ? 1.0 : 0.0) << i;
}

TEST(KeywordVector, NoKeywordIsZero) {
  const auto x = keyword_vector({"1", "my screen is cracked"}, default_categories());
  EXPECT_EQ(std::accumulate(x.begin(), x.end(), 0.0), 0.0);
}

TEST(KeywordVector, IndependentIndicators) {
  const auto x = keyword_vector({"1", "password and wifi down"}, default_categories());
  EXPECT_EQ(x[keyword_pos("password")], 1.0);
  EXPECT_EQ(x[keyword_pos("wifi")], 1.0);
  // "wi-fi" matches the same cleaned text.
  EXPECT_EQ(x[keyword_pos("wi-fi")], 1.0);
  EXPECT_EQ(std::accumulate(x.begin(), x.end(), 0.0), 3.0);
}

TEST(KeywordVector, ConcatenationIsMonotone) {
  // Substring presence is monotone: splitting the text at word boundaries
  // never finds a keyword the whole text lacks, and when no keyword spans a
  // cut the parts' OR equals the whole.
  const auto cats = default_categories();
  const auto synth = generate_corpus(default_synth_spec(9), cats);
  Rng rng(4);
  for (const auto& s : synth) {
    const auto whole_text = clean(s.email).text;
    const auto whole = keyword_vector({"w", whole_text}, cats);
    std::vector<std::string> words;
    std::istringstream in(whole_text);
    for (std::string w; in >> w;) words.push_back(w);
    const auto cut = rng.uniform_index(words.size() + 1);
    std::string a, b;
    for (std::size_t i = 0; i < words.size(); ++i) (i < cut ? a : b) += words[i] + " ";
    const auto xa = keyword_vector({"a", a}, cats);
    const auto xb = keyword_vector({"b", b}, cats);
    bool spans = false;
    if (cut > 0 && cut < words.size()) {
      const auto boundary = match_form(words[cut - 1] + " " + words[cut]);
      for (const auto& k : flatten_keywords(cats)) {
        const auto f = match_form(k);
        spans = spans || (f.find(' ') != std::string::npos && boundary.find(f) != std::string::npos);
      }
    }
    for (std::size_t k = 0; k < whole.size(); ++k) {
      const double either = std::max(xa[k], xb[k]);
      ASSERT_LE(either, whole[k]);
      if (!spans) {
        ASSERT_EQ(either, whole[k]) << whole_text;
      }
    }
  }
}

TEST(MinMaxScaler, MapsTrainingRangeToUnitInterval) {
  const std::vector<FeatureVector> X = {{0, 2, 5}, {4, 2, 1}, {2, 2, 3}};
  const auto s = MinMaxScaler::fit(X);
  auto a = X[0], b = X[1], c = X[2];
  s.apply(a);
  s.apply(b);
  s.apply(c);
  EXPECT_EQ(a, (FeatureVector{0.0, 0.0, 1.0}));
  EXPECT_EQ(b, (FeatureVector{1.0, 0.0, 0.0}));
  EXPECT_EQ(c, (FeatureVector{0.5, 0.0, 0.5}));
  FeatureVector outside{8, 7, 5};
  s.apply(outside);
  EXPECT_EQ(outside, (FeatureVector{2.0, 0.0, 1.0}));
  FeatureVector wrong{1, 2};
  EXPECT_THROW(s.apply(wrong), InvalidArgument);
  EXPECT_THROW(MinMaxScaler::fit(std::vector<FeatureVector>{}), InvalidArgument);
}
