#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "helpdesk/random.hpp"
#include "helpdesk/synth.hpp"
#include "helpdesk/textprep.hpp"

using namespace helpdesk;

namespace {

const TextPrep& prep() {
  static const TextPrep p;
  return p;
}

std::string lemma(std::string_view w) { return lemmatize(w, prep().rules); }

// Word-like strings: a random stem plus one of the suffixes the rules react to.
std::vector<std::string> random_words(std::size_t n, std::uint64_t seed) {
  static const char* const kSuffixes[] = {"", "s", "es", "ies", "ed", "ied", "ing", "sses", "ches", "ings",
                                          "ated", "ating", "ss", "us", "is", "ying", "eed", "led", "ling"};
  Rng rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string w;
    const auto len = 1 + rng.uniform_index(7);
    for (std::size_t k = 0; k < len; ++k) w.push_back(static_cast<char>('a' + rng.uniform_index(26)));
    w += kSuffixes[rng.uniform_index(std::size(kSuffixes))];
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

TEST(Tokenize, LowercasesAndSplits) {
  EXPECT_EQ(tokenize("The Internet is NOT working"), (TokenSeq{"the", "internet", "is", "not", "working"}));
  EXPECT_EQ(tokenize("wifi  down"), (TokenSeq{"wifi", "down"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("can't log-in!"), (TokenSeq{"cant", "login"}));
}

TEST(Lemmatize, ChangeFamily) {
  EXPECT_EQ(lemma("changed"), "change");
  EXPECT_EQ(lemma("changes"), "change");
  EXPECT_EQ(lemma("changing"), "change");
  EXPECT_EQ(lemma("change"), "change");
}

TEST(Lemmatize, CommonHelpdeskWords) {
  EXPECT_EQ(lemma("working"), "work");
  EXPECT_EQ(lemma("wifi"), "wifi");
  EXPECT_EQ(lemma("passwords"), "password");
  EXPECT_EQ(lemma("issues"), "issue");
  EXPECT_EQ(lemma("queries"), "query");
  EXPECT_EQ(lemma("copied"), "copy");
  EXPECT_EQ(lemma("stopped"), "stop");
  EXPECT_EQ(lemma("installed"), "install");
  EXPECT_EQ(lemma("patches"), "patch");
  EXPECT_EQ(lemma("classes"), "class");
  EXPECT_EQ(lemma("access"), "access");
  EXPECT_EQ(lemma("status"), "status");
  EXPECT_EQ(lemma("analysis"), "analysis");
  EXPECT_EQ(lemma("needed"), "need");
  EXPECT_EQ(lemma("using"), "use");
  EXPECT_EQ(lemma("is"), "be");
}

TEST(Lemmatize, ShortWordsAreLeftAlone) {
  EXPECT_EQ(lemma("bus"), "bus");
  EXPECT_EQ(lemma("red"), "red");
  EXPECT_EQ(lemma("sing"), "sing");
  EXPECT_EQ(lemma("as"), "as");
}

TEST(Lemmatize, IdempotentOnRandomWords) {
  for (const auto& w : random_words(5000, 17)) {
    const auto once = lemma(w);
    ASSERT_FALSE(once.empty()) << w;
    ASSERT_EQ(lemma(once), once) << w;
  }
}

TEST(Lemmatize, SuffixRulesNeverLengthen) {
  LemmaRules rules = default_lemma_rules();
  rules.exceptions.clear();
  for (const auto& w : random_words(5000, 23)) {
    const auto l = lemmatize(w, rules);
    ASSERT_FALSE(l.empty()) << w;
    ASSERT_LE(l.size(), w.size()) << w;
  }
}

TEST(Lemmatize, ExceptionTargetsAreFixpoints) {
  for (const auto& [word, target] : prep().rules.exceptions) EXPECT_EQ(lemma(target), target) << word;
}

TEST(Stoplist, EntriesAreLemmaFixpointsWithoutNegations) {
  const auto& stop = prep().stoplist;
  EXPECT_GE(stop.size(), 100u);
  for (const auto& w : stop) EXPECT_EQ(lemma(w), w) << w;
  for (const char* neg : {"not", "no", "never", "nor", "cant", "dont", "wont"}) EXPECT_FALSE(stop.contains(neg)) << neg;
}

TEST(Stoplist, RemovalKeepsOrder) {
  const TokenSeq in{"the", "internet", "be", "not", "working"};
  EXPECT_EQ(remove_stopwords(in, prep().stoplist), (TokenSeq{"internet", "not", "working"}));
  EXPECT_TRUE(remove_stopwords(TokenSeq{"the", "a", "to"}, prep().stoplist).empty());
  EXPECT_TRUE(remove_stopwords(TokenSeq{}, prep().stoplist).empty());
}

TEST(Preprocess, WorkedExamples) {
  EXPECT_EQ(preprocess("the internet is not working", prep()), (TokenSeq{"internet", "not", "work"}));
  EXPECT_EQ(preprocess("changed changes changing", prep()), (TokenSeq{"change", "change", "change"}));
  EXPECT_TRUE(preprocess("is the to", prep()).empty());
}

TEST(Preprocess, IdempotentOnSyntheticCorpus) {
  const auto synth = generate_corpus(default_synth_spec(5), default_categories());
  for (const auto& s : synth) {
    const auto once = preprocess(s.email.subject + " " + s.email.body, prep());
    ASSERT_EQ(preprocess(join_tokens(once), prep()), once) << s.email.id;
  }
  const auto words = random_words(2000, 31);
  std::string text;
  for (const auto& w : words) text += w + " ";
  const auto once = preprocess(text, prep());
  EXPECT_EQ(preprocess(join_tokens(once), prep()), once);
}

TEST(TextPrepFiles, StoplistAndExceptionsParse) {
  std::istringstream stop("# comment\nThe\n\nnot\n");
  EXPECT_EQ(read_stoplist(stop), (Stoplist{"the", "not"}));
  std::istringstream exc("# word<TAB>lemma\nMice\tmouse\n");
  const auto m = read_lemma_exceptions(exc);
  EXPECT_EQ(m.at("mice"), "mouse");
  std::istringstream bad("mice mouse\n");
  EXPECT_THROW(read_lemma_exceptions(bad), FormatError);
}

TEST(TextPrepFiles, ShippedFilesMatchDefaults) {
  EXPECT_EQ(load_stoplist(HELPDESK_DATA_DIR "/stoplist.txt"), default_stoplist());
  EXPECT_EQ(load_lemma_exceptions(HELPDESK_DATA_DIR "/lemma_exceptions.txt"), default_lemma_rules().exceptions);
}
