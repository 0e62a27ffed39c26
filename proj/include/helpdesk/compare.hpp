#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "helpdesk/augment.hpp"
#include "helpdesk/labeling.hpp"
#include "helpdesk/metrics.hpp"
#include "helpdesk/model.hpp"
#include "helpdesk/random.hpp"
#include "helpdesk/split.hpp"
#include "helpdesk/textprep.hpp"

namespace helpdesk {

enum class CompareModel { nn, nn_augmented, tree };

inline constexpr CompareModel kCompareModels[] = {CompareModel::nn, CompareModel::nn_augmented,
                                                  CompareModel::tree};

inline std::string_view to_string(CompareModel m) {
  switch (m) {
    case CompareModel::nn: return "nn";
    case CompareModel::nn_augmented: return "nn+augmentation";
    case CompareModel::tree: return "decision-tree";
  }
  return "?";
}

struct CompareConfig {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  double train_ratio = 0.8;
  MlpConfig shape;
  TrainConfig train;
  bool minmax_scale = false;
  AugmentConfig augment;
  std::optional<std::size_t> tree_max_depth;
};

struct ModelRun {
  CompareModel model = CompareModel::nn;
  ConfusionMatrix confusion;
  EvalReport report;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<ModelRun> runs;  // in kCompareModels order
};

struct ModelSummary {
  CompareModel model = CompareModel::nn;
  double median_accuracy = 0.0;
  double median_macro_precision = 0.0;
  double median_macro_recall = 0.0;
  double median_macro_f1 = 0.0;
};

struct CompareResult {
  std::vector<SeedRun> seeds;
  std::vector<ModelSummary> summary;  // in kCompareModels order
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Evaluates a classifier on labeled test emails.
inline ConfusionMatrix evaluate(const Classifier& model, std::span<const LabeledEmail> test) {
  std::vector<std::size_t> truth, pred;
  for (const auto& e : test) {
    truth.push_back(e.category);
    pred.push_back(model.classify(e.email).category);
  }
  const auto names = category_names(model.categories());
  return confusion(truth, pred, names);
}

/// One seed of the comparison: a shared split, then the three models.
/// Augmentation only feeds the nn_augmented network; the tree trains on the
/// original training emails.
inline SeedRun compare_seed(std::span<const LabeledEmail> corpus, std::span<const CategorySpec> categories,
                            const TextPrep& prep, const SynonymLexicon& lexicon,
                            const CompareConfig& config, std::uint64_t seed) {
  const auto split = stratified_split(corpus, categories, config.train_ratio, derive_seed(seed, streams::split));
  SeedRun run;
  run.seed = seed;
  run.train_size = split.train.size();
  run.test_size = split.test.size();

  TrainConfig train = config.train;
  train.seed = derive_seed(seed, streams::train);
  AugmentConfig augment = config.augment;
  augment.seed = derive_seed(seed, streams::augment);

  const auto samples = to_training_samples(split.train, prep);
  for (auto which : kCompareModels) {
    std::optional<Classifier> model;
    if (which == CompareModel::tree) {
      model.emplace(train_keyword_tree(split.train, categories, config.tree_max_depth));
    } else if (which == CompareModel::nn) {
      model.emplace(train_neural(samples, categories, prep, config.shape, train, config.minmax_scale));
    } else {
      const auto augmented = rebalance(samples, categories, augment, lexicon);
      model.emplace(train_neural(augmented, categories, prep, config.shape, train, config.minmax_scale));
    }
    auto cm = evaluate(*model, split.test);
    auto rep = report(cm);
    run.runs.push_back({which, std::move(cm), std::move(rep)});
  }
  return run;
}

inline CompareResult compare_runs(std::span<const LabeledEmail> corpus, std::span<const CategorySpec> categories,
                                  const TextPrep& prep, const SynonymLexicon& lexicon,
                                  const CompareConfig& config) {
  if (config.seeds.empty()) throw InvalidArgument("compare needs at least one seed");
  CompareResult result;
  for (auto seed : config.seeds) {
    result.seeds.push_back(compare_seed(corpus, categories, prep, lexicon, config, seed));
  }
  for (std::size_t m = 0; m < std::size(kCompareModels); ++m) {
    std::vector<double> acc, p, r, f;
    for (const auto& s : result.seeds) {
      const auto& rep = s.runs[m].report;
      acc.push_back(rep.accuracy);
      p.push_back(rep.macro_precision);
      r.push_back(rep.macro_recall);
      f.push_back(rep.macro_f1);
    }
    result.summary.push_back({kCompareModels[m], median(acc), median(p), median(r), median(f)});
  }
  return result;
}

inline std::string format_comparison(const CompareResult& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-18s %10s %10s %10s %10s\n", "model", "accuracy", "macro-P",
                "macro-R", "macro-F1");
  out << "median over " << r.seeds.size() << " seed(s)\n" << line;
  for (const auto& s : r.summary) {
    std::snprintf(line, sizeof line, "%-18s %10.4f %10.4f %10.4f %10.4f\n",
                  std::string(to_string(s.model)).c_str(), s.median_accuracy, s.median_macro_precision,
                  s.median_macro_recall, s.median_macro_f1);
    out << line;
  }
  out << "\nper seed (macro-F1 / accuracy)\n";
  for (const auto& s : r.seeds) {
    out << "seed " << s.seed << " (train " << s.train_size << ", test " << s.test_size << "):";
    for (const auto& run : s.runs) {
      std::snprintf(line, sizeof line, "  %s %.4f/%.4f", std::string(to_string(run.model)).c_str(),
                    run.report.macro_f1, run.report.accuracy);
      out << line;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace helpdesk
