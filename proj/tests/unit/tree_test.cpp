#include <gtest/gtest.h>

#include <cstdint>
#include <map>
#include <optional>

#include "helpdesk/random.hpp"
#include "helpdesk/tree.hpp"

using namespace helpdesk;

namespace {

// Root split by exhaustive search with exact integer arithmetic. Maximizing
// the Gini decrease is maximizing sum(p_c^2)/n_p + sum(a_c^2)/n_a, compared
// here by cross-multiplication.
std::optional<std::size_t> brute_force_root(const std::vector<FeatureVector>& X, const std::vector<std::size_t>& y,
                                            std::size_t classes) {
  std::map<std::size_t, std::size_t> labels;
  for (auto c : y) ++labels[c];
  if (labels.size() <= 1) return std::nullopt;
  std::optional<std::size_t> best;
  std::int64_t best_num = 0, best_den = 1;
  for (std::size_t f = 0; f < X[0].size(); ++f) {
    std::vector<std::int64_t> p(classes, 0), a(classes, 0);
    std::int64_t np = 0, na = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
      if (X[i][f] == 1.0) {
        ++p[y[i]];
        ++np;
      } else {
        ++a[y[i]];
        ++na;
      }
    }
    if (np == 0 || na == 0) continue;
    std::int64_t sp = 0, sa = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      sp += p[c] * p[c];
      sa += a[c] * a[c];
    }
    const std::int64_t num = sp * na + sa * np, den = np * na;
    if (!best || num * best_den > best_num * den) {
      best = f;
      best_num = num;
      best_den = den;
    }
  }
  return best;
}

std::optional<std::size_t> root_feature(const TreeModel& t) {
  if (const auto* s = std::get_if<TreeSplit>(&t.nodes[0])) return s->feature;
  return std::nullopt;
}

}  // namespace

TEST(Gini, KnownValues) {
  EXPECT_DOUBLE_EQ(gini(std::vector<std::size_t>{2, 2}), 0.5);
  EXPECT_DOUBLE_EQ(gini(std::vector<std::size_t>{4, 0}), 0.0);
  EXPECT_DOUBLE_EQ(gini(std::vector<std::size_t>{1, 1, 1}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(gini(std::vector<std::size_t>{0, 0}), 0.0);
}

TEST(Tree, SingleClassIsOneLeaf) {
  const std::vector<FeatureVector> X = {{0, 1}, {1, 0}, {1, 1}};
  const std::vector<std::size_t> y = {2, 2, 2};
  const auto t = train_tree(X, y, 3);
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_EQ(tree_predict(t, FeatureVector{0, 0}).category, 2u);
}

TEST(Tree, PerfectFeatureAtRoot) {
  const std::vector<FeatureVector> X = {{1, 0}, {1, 1}, {0, 1}, {0, 0}};
  const std::vector<std::size_t> y = {1, 1, 0, 0};
  const auto t = train_tree(X, y, 2);
  EXPECT_EQ(root_feature(t), 0u);
  EXPECT_EQ(t.leaf_count(), 2u);
  EXPECT_EQ(t.depth(), 1u);
  for (std::size_t i = 0; i < X.size(); ++i) EXPECT_EQ(tree_predict(t, X[i]).category, y[i]);
}

TEST(Tree, LeafPredictionTieBreaksToLowestRank) {
  TreeModel t;
  t.num_features = 1;
  t.num_classes = 5;
  t.nodes = {TreeLeaf{{0, 3, 0, 0, 0}}};
  auto p = tree_predict(t, FeatureVector{0});
  EXPECT_EQ(p.category, 1u);
  EXPECT_DOUBLE_EQ(p.confidence, 1.0);
  t.nodes = {TreeLeaf{{1, 1, 0, 0, 0}}};
  p = tree_predict(t, FeatureVector{1});
  EXPECT_EQ(p.category, 0u);
  EXPECT_DOUBLE_EQ(p.confidence, 0.5);
}

TEST(Tree, XorNeedsAZeroGainSplit) {
  // Every single split of XOR has zero Gini gain; the tree still separates it.
  const std::vector<FeatureVector> X = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const std::vector<std::size_t> y = {0, 1, 1, 0};
  const auto t = train_tree(X, y, 2);
  for (std::size_t i = 0; i < X.size(); ++i) EXPECT_EQ(tree_predict(t, X[i]).category, y[i]);
  EXPECT_EQ(root_feature(t), 0u);
}

TEST(Tree, RootMatchesBruteForceOnRandomData) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t f = 2 + rng.uniform_index(5), n = 2 + rng.uniform_index(30), c = 2 + rng.uniform_index(3);
    std::vector<FeatureVector> X(n, FeatureVector(f));
    std::vector<std::size_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : X[i]) v = static_cast<double>(rng.uniform_index(2));
      y[i] = rng.uniform_index(c);
    }
    ASSERT_EQ(root_feature(train_tree(X, y, c)), brute_force_root(X, y, c)) << "trial " << trial;
  }
}

TEST(Tree, InjectiveDataIsFitExactly) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t f = 3 + rng.uniform_index(4);
    std::map<std::vector<double>, std::size_t> label_of;
    std::vector<FeatureVector> X;
    std::vector<std::size_t> y;
    for (std::size_t i = 0; i < 25; ++i) {
      FeatureVector x(f);
      for (double& v : x) v = static_cast<double>(rng.uniform_index(2));
      const auto [it, inserted] = label_of.emplace(x, rng.uniform_index(4));
      X.push_back(x);
      y.push_back(it->second);
    }
    const auto t = train_tree(X, y, 4);
    for (std::size_t i = 0; i < X.size(); ++i) ASSERT_EQ(tree_predict(t, X[i]).category, y[i]);
    validate_tree(t);
  }
}

TEST(Tree, MaxDepthIsRespected) {
  Rng rng(2);
  std::vector<FeatureVector> X(40, FeatureVector(6));
  std::vector<std::size_t> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    for (double& v : X[i]) v = static_cast<double>(rng.uniform_index(2));
    y[i] = rng.uniform_index(3);
  }
  EXPECT_LE(train_tree(X, y, 3, 2).depth(), 2u);
  EXPECT_EQ(train_tree(X, y, 3, 0).nodes.size(), 1u);
}

TEST(Tree, RejectsNonBinaryAndMismatchedInput) {
  const std::vector<std::size_t> y = {0, 1};
  EXPECT_THROW(train_tree(std::vector<FeatureVector>{{0, 2}, {1, 0}}, y, 2), InvalidArgument);
  EXPECT_THROW(train_tree(std::vector<FeatureVector>{{0, 1}, {1}}, y, 2), InvalidArgument);
  const auto t = train_tree(std::vector<FeatureVector>{{0, 1}, {1, 0}}, y, 2);
  EXPECT_THROW(tree_predict(t, FeatureVector{1}), InvalidArgument);
}

TEST(Tree, ValidateCatchesBrokenStructure) {
  TreeModel t;
  t.num_features = 2;
  t.num_classes = 2;
  t.nodes = {TreeSplit{0, 1, 1}, TreeLeaf{{1, 0}}};
  EXPECT_THROW(validate_tree(t), FormatError);
  t.nodes = {TreeSplit{0, 1, 2}, TreeLeaf{{1, 0}}, TreeSplit{0, 3, 4}, TreeLeaf{{1, 0}}, TreeLeaf{{0, 1}}};
  EXPECT_THROW(validate_tree(t), FormatError);
}
