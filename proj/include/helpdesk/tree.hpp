#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "helpdesk/error.hpp"
#include "helpdesk/features.hpp"
#include "helpdesk/prediction.hpp"

namespace helpdesk {

struct TreeLeaf {
  std::vector<std::size_t> counts;  // training samples per class

  bool operator==(const TreeLeaf&) const = default;
};

/// Children are indices into TreeModel::nodes.
struct TreeSplit {
  std::size_t feature = 0;
  std::size_t absent = 0;   // feature == 0
  std::size_t present = 0;  // feature == 1

  bool operator==(const TreeSplit&) const = default;
};

using TreeNode = std::variant<TreeLeaf, TreeSplit>;

/// CART tree over binary features; nodes[0] is the root.
struct TreeModel {
  std::vector<TreeNode> nodes;
  std::size_t num_features = 0;
  std::size_t num_classes = 0;

  bool operator==(const TreeModel&) const = default;

  std::size_t depth() const { return depth_from(0); }
  std::size_t leaf_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += std::holds_alternative<TreeLeaf>(node);
    return n;
  }

 private:
  std::size_t depth_from(std::size_t i) const {
    if (const auto* s = std::get_if<TreeSplit>(&nodes[i])) {
      return 1 + std::max(depth_from(s->absent), depth_from(s->present));
    }
    return 0;
  }
};

/// 1 - sum of squared class proportions; 0 for an empty node.
inline double gini(std::span<const std::size_t> counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  if (total == 0.0) return 0.0;
  double sq = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / total;
    sq += p * p;
  }
  return 1.0 - sq;
}

struct SplitChoice {
  std::size_t feature = 0;
  double gain = 0.0;
};

namespace detail {

inline void check_binary_dataset(std::span<const FeatureVector> X, std::span<const std::size_t> y,
                                 std::size_t num_classes) {
  if (X.empty()) throw InvalidArgument("training set is empty");
  if (X.size() != y.size()) throw InvalidArgument("feature and label counts differ");
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].size() != X[0].size()) {
      throw InvalidArgument("feature vector " + std::to_string(i) + " has a different dimension");
    }
    for (std::size_t f = 0; f < X[i].size(); ++f) {
      if (X[i][f] != 0.0 && X[i][f] != 1.0) {
        throw InvalidArgument("feature " + std::to_string(f) + " of sample " + std::to_string(i) +
                              " is not binary");
      }
    }
    if (y[i] >= num_classes) throw InvalidArgument("label out of range at sample " + std::to_string(i));
  }
}

inline std::vector<std::size_t> class_counts(std::span<const std::size_t> y,
                                             std::span<const std::size_t> rows,
                                             std::size_t num_classes) {
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t r : rows) ++counts[y[r]];
  return counts;
}

}  // namespace detail

/// Largest Gini decrease among features not yet tested on the path whose
/// split leaves both branches non-empty; ties go to the lowest feature index.
/// nullopt when no such feature exists.
inline std::optional<SplitChoice> best_split(std::span<const FeatureVector> X,
                                             std::span<const std::size_t> y,
                                             std::span<const std::size_t> rows,
                                             const std::vector<bool>& used,
                                             std::size_t num_classes) {
  const auto parent = detail::class_counts(y, rows, num_classes);
  const double parent_gini = gini(parent);
  const double n = static_cast<double>(rows.size());
  std::optional<SplitChoice> best;
  std::vector<std::size_t> present(num_classes);
  std::vector<std::size_t> absent(num_classes);
  const std::size_t dim = X.empty() ? 0 : X[0].size();
  for (std::size_t f = 0; f < dim; ++f) {
    if (used[f]) continue;
    std::fill(present.begin(), present.end(), 0);
    std::size_t n_present = 0;
    for (std::size_t r : rows) {
      if (X[r][f] != 0.0) {
        ++present[y[r]];
        ++n_present;
      }
    }
    if (n_present == 0 || n_present == rows.size()) continue;
    for (std::size_t c = 0; c < num_classes; ++c) absent[c] = parent[c] - present[c];
    const double np = static_cast<double>(n_present);
    const double gain =
        parent_gini - (np / n) * gini(present) - ((n - np) / n) * gini(absent);
    // Equal gains computed through different rounding paths still count as ties.
    if (!best || gain > best->gain + 1e-12) best = SplitChoice{f, gain};
  }
  return best;
}

namespace detail {

inline std::size_t grow(TreeModel& tree, std::span<const FeatureVector> X,
                        std::span<const std::size_t> y, std::vector<std::size_t> rows,
                        std::vector<bool>& used, std::size_t depth,
                        std::optional<std::size_t> max_depth) {
  auto counts = class_counts(y, rows, tree.num_classes);
  const bool pure = gini(counts) == 0.0;
  std::optional<SplitChoice> choice;
  if (!pure && (!max_depth || depth < *max_depth)) {
    choice = best_split(X, y, rows, used, tree.num_classes);
  }
  const std::size_t self = tree.nodes.size();
  if (!choice) {
    tree.nodes.emplace_back(TreeLeaf{std::move(counts)});
    return self;
  }
  tree.nodes.emplace_back(TreeSplit{choice->feature, 0, 0});
  std::vector<std::size_t> absent_rows, present_rows;
  for (std::size_t r : rows) (X[r][choice->feature] != 0.0 ? present_rows : absent_rows).push_back(r);
  used[choice->feature] = true;
  const std::size_t a = grow(tree, X, y, std::move(absent_rows), used, depth + 1, max_depth);
  const std::size_t p = grow(tree, X, y, std::move(present_rows), used, depth + 1, max_depth);
  used[choice->feature] = false;
  auto& split = std::get<TreeSplit>(tree.nodes[self]);
  split.absent = a;
  split.present = p;
  return self;
}

}  // namespace detail

/// Greedy CART with Gini impurity, no pruning. A node becomes a leaf when it
/// is pure, has no splittable untested feature, or sits at max_depth.
inline TreeModel train_tree(std::span<const FeatureVector> X, std::span<const std::size_t> y,
                            std::size_t num_classes,
                            std::optional<std::size_t> max_depth = std::nullopt) {
  if (num_classes == 0) throw InvalidArgument("tree needs at least one class");
  detail::check_binary_dataset(X, y, num_classes);
  TreeModel tree;
  tree.num_features = X[0].size();
  tree.num_classes = num_classes;
  std::vector<std::size_t> rows(X.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::vector<bool> used(tree.num_features, false);
  detail::grow(tree, X, y, std::move(rows), used, 0, max_depth);
  return tree;
}

/// Leaf majority class (lowest index on ties) and its share of the leaf.
inline Prediction tree_predict(const TreeModel& tree, std::span<const double> x) {
  if (x.size() != tree.num_features) {
    throw InvalidArgument("feature vector has dimension " + std::to_string(x.size()) +
                          ", tree expects " + std::to_string(tree.num_features));
  }
  std::size_t i = 0;
  while (const auto* s = std::get_if<TreeSplit>(&tree.nodes.at(i))) {
    i = x[s->feature] != 0.0 ? s->present : s->absent;
  }
  const auto& counts = std::get<TreeLeaf>(tree.nodes[i]).counts;
  std::vector<double> scores(counts.begin(), counts.end());
  auto p = argmax_prediction(scores);
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  p.confidence = total > 0.0 ? p.confidence / total : 0.0;
  return p;
}

/// Structural checks used when loading a serialized tree.
inline void validate_tree(const TreeModel& tree) {
  if (tree.nodes.empty()) throw FormatError("tree has no nodes");
  std::vector<bool> seen(tree.nodes.size(), false);
  std::vector<bool> used(tree.num_features, false);
  auto visit = [&](auto&& self, std::size_t i) -> void {
    if (i >= tree.nodes.size() || seen[i]) throw FormatError("tree node " + std::to_string(i) + " is not a valid child");
    seen[i] = true;
    if (const auto* s = std::get_if<TreeSplit>(&tree.nodes[i])) {
      if (s->feature >= tree.num_features) throw FormatError("tree split feature out of range");
      if (used[s->feature]) throw FormatError("tree path tests feature " + std::to_string(s->feature) + " twice");
      used[s->feature] = true;
      self(self, s->absent);
      self(self, s->present);
      used[s->feature] = false;
    } else {
      const auto& counts = std::get<TreeLeaf>(tree.nodes[i]).counts;
      if (counts.size() != tree.num_classes) throw FormatError("tree leaf has wrong class count");
      if (std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == 0) {
        throw FormatError("tree leaf has no samples");
      }
    }
  };
  visit(visit, 0);
}

}  // namespace helpdesk
