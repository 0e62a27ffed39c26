#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "helpdesk/error.hpp"
#include "helpdesk/labeling.hpp"
#include "helpdesk/random.hpp"

namespace helpdesk {

struct SplitResult {
  std::vector<LabeledEmail> train;
  std::vector<LabeledEmail> test;
};

/// Per-category train quotas: floor(ratio * n_c), then one extra for the
/// categories with the largest fractional remainders (lower index first on
/// ties) until the total reaches round(ratio * N).
inline std::vector<std::size_t> stratified_quotas(std::span<const std::size_t> class_sizes,
                                                  double ratio) {
  std::size_t total = 0;
  for (auto n : class_sizes) total += n;
  std::vector<std::size_t> quota(class_sizes.size());
  std::vector<double> remainder(class_sizes.size());
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < class_sizes.size(); ++c) {
    const double exact = ratio * static_cast<double>(class_sizes[c]);
    quota[c] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[c] = exact - static_cast<double>(quota[c]);
    assigned += quota[c];
  }
  const auto target = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(total)));
  std::vector<std::size_t> order(class_sizes.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b] + 1e-12; });
  for (std::size_t k = 0; assigned < target && k < order.size(); ++k) {
    if (quota[order[k]] < class_sizes[order[k]]) {
      ++quota[order[k]];
      ++assigned;
    }
  }
  return quota;
}

/// Category-proportional split. Each category is shuffled with a generator
/// seeded from (seed, category) before its quota is taken for training.
inline SplitResult stratified_split(std::span<const LabeledEmail> data,
                                    std::span<const CategorySpec> categories, double train_ratio,
                                    std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw InvalidArgument("train ratio must be strictly between 0 and 1");
  }
  std::vector<std::vector<LabeledEmail>> groups(categories.size());
  for (const auto& e : data) {
    if (e.category >= categories.size()) {
      throw InvalidArgument("email '" + e.email.id + "' has an unknown category");
    }
    groups[e.category].push_back(e);
  }
  std::vector<std::size_t> sizes;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (groups[c].size() < 2) {
      throw InvalidArgument("category '" + categories[c].name + "' has " +
                            std::to_string(groups[c].size()) +
                            " sample(s); stratified splitting needs at least 2");
    }
    sizes.push_back(groups[c].size());
  }
  const auto quota = stratified_quotas(sizes, train_ratio);
  SplitResult out;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    Rng rng(derive_seed(seed, c));
    rng.shuffle(groups[c]);
    for (std::size_t i = 0; i < groups[c].size(); ++i) {
      (i < quota[c] ? out.train : out.test).push_back(std::move(groups[c][i]));
    }
  }
  return out;
}

}  // namespace helpdesk
