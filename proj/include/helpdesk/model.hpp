#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "helpdesk/augment.hpp"
#include "helpdesk/corpus.hpp"
#include "helpdesk/error.hpp"
#include "helpdesk/features.hpp"
#include "helpdesk/labeling.hpp"
#include "helpdesk/mlp.hpp"
#include "helpdesk/prediction.hpp"
#include "helpdesk/textprep.hpp"
#include "helpdesk/tree.hpp"

namespace helpdesk {

inline constexpr int kModelFormatVersion = 1;

/// Bag-of-words network plus everything needed to featurize raw text.
struct NeuralClassifier {
  std::vector<CategorySpec> categories;
  TextPrep prep;
  Vocabulary vocab;
  MlpModel net;
  TrainConfig train_config;
  std::optional<MinMaxScaler> scaler;  // off unless requested at training
};

/// Keyword-presence decision tree.
struct TreeClassifier {
  std::vector<CategorySpec> categories;
  TreeModel tree;
  std::optional<std::size_t> max_depth;
  double training_accuracy = 0.0;
};

/// A trained, immutable model of either kind.
class Classifier {
 public:
  Classifier(NeuralClassifier m) : model_(std::move(m)) {}
  Classifier(TreeClassifier m) : model_(std::move(m)) {}

  std::string_view kind() const { return is_neural() ? "mlp" : "tree"; }
  bool is_neural() const { return std::holds_alternative<NeuralClassifier>(model_); }

  const std::vector<CategorySpec>& categories() const {
    return std::visit([](const auto& m) -> const std::vector<CategorySpec>& { return m.categories; },
                      model_);
  }

  const NeuralClassifier* neural() const { return std::get_if<NeuralClassifier>(&model_); }
  const TreeClassifier* tree() const { return std::get_if<TreeClassifier>(&model_); }

  FeatureVector features(const CleanEmail& email) const {
    if (const auto* n = neural()) {
      auto x = bow_vector(preprocess(email.text, n->prep), n->vocab);
      if (n->scaler) n->scaler->apply(x);
      return x;
    }
    return keyword_vector(email, tree()->categories);
  }

  Prediction classify(const CleanEmail& email) const {
    const auto x = features(email);
    if (const auto* n = neural()) return predict(n->net, x);
    return tree_predict(tree()->tree, x);
  }

  /// Cleans subject + body with the corpus rules, then classifies.
  Prediction classify_raw(std::string_view subject, std::string_view body) const {
    RawEmail raw;
    raw.id = "request";
    raw.subject = subject;
    raw.body = body;
    return classify(clean(raw));
  }

 private:
  std::variant<NeuralClassifier, TreeClassifier> model_;
};

inline std::vector<TrainingSample> to_training_samples(std::span<const LabeledEmail> emails,
                                                       const TextPrep& prep) {
  std::vector<TrainingSample> out;
  out.reserve(emails.size());
  for (const auto& e : emails) out.push_back({e.email.id, e.category, preprocess(e.email.text, prep), false, {}});
  return out;
}

/// Vocabulary from the (possibly augmented) training tokens, then the network.
inline NeuralClassifier train_neural(std::span<const TrainingSample> train,
                                     std::span<const CategorySpec> categories, const TextPrep& prep,
                                     const MlpConfig& shape, const TrainConfig& cfg,
                                     bool minmax_scale = false) {
  if (train.empty()) throw InvalidArgument("training set is empty");
  std::vector<TokenSeq> docs;
  std::vector<std::size_t> y;
  for (const auto& s : train) {
    docs.push_back(s.tokens);
    y.push_back(s.category);
  }
  NeuralClassifier out;
  out.categories.assign(categories.begin(), categories.end());
  out.prep = prep;
  out.vocab = build_vocabulary(docs);
  out.train_config = cfg;
  std::vector<FeatureVector> X;
  X.reserve(docs.size());
  for (const auto& d : docs) X.push_back(bow_vector(d, out.vocab));
  if (minmax_scale) {
    out.scaler = MinMaxScaler::fit(X);
    for (auto& x : X) out.scaler->apply(x);
  }
  out.net = train_mlp(X, y, categories.size(), shape, cfg);
  return out;
}

inline TreeClassifier train_keyword_tree(std::span<const LabeledEmail> train,
                                         std::span<const CategorySpec> categories,
                                         std::optional<std::size_t> max_depth = std::nullopt) {
  std::vector<FeatureVector> X;
  std::vector<std::size_t> y;
  for (const auto& e : train) {
    X.push_back(keyword_vector(e.email, categories));
    y.push_back(e.category);
  }
  TreeClassifier out;
  out.categories.assign(categories.begin(), categories.end());
  out.tree = train_tree(X, y, categories.size(), max_depth);
  out.max_depth = max_depth;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < X.size(); ++i) correct += tree_predict(out.tree, X[i]).category == y[i];
  out.training_accuracy = static_cast<double>(correct) / static_cast<double>(X.size());
  return out;
}

// ---------------------------------------------------------------------------
// Serialization: one JSON document per model.

namespace detail {

using nlohmann::json;

inline const json& field(const json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) throw FormatError("model artifact: '" + path + "' is not an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError("model artifact: missing field '" + path + (path.empty() ? "" : ".") +
                      std::string(key) + "'");
  }
  return *it;
}

template <typename T>
T field_as(const json& j, std::string_view key, const std::string& path) {
  const auto& v = field(j, key, path);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw FormatError("model artifact: field '" + path + (path.empty() ? "" : ".") +
                      std::string(key) + "' has the wrong type");
  }
}

inline json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"values", m.values()}};
}

inline Matrix matrix_from_json(const json& j, const std::string& path) {
  const auto rows = field_as<std::size_t>(j, "rows", path);
  const auto cols = field_as<std::size_t>(j, "cols", path);
  auto values = field_as<std::vector<double>>(j, "values", path);
  if (values.size() != rows * cols) {
    throw FormatError("model artifact: field '" + path + ".values' has " +
                      std::to_string(values.size()) + " entries, expected " +
                      std::to_string(rows * cols));
  }
  Matrix m(rows, cols);
  m.values() = std::move(values);
  return m;
}

inline json textprep_to_json(const TextPrep& p) {
  json rules = json::array();
  for (const auto& r : p.rules.suffix_rules) {
    rules.push_back({{"suffix", r.suffix},
                     {"replacement", r.replacement},
                     {"min_stem", r.min_stem},
                     {"verb_ending", r.verb_ending},
                     {"blocked_after", r.blocked_after}});
  }
  json exceptions = json::object();
  for (const auto& [w, l] : p.rules.exceptions) exceptions[w] = l;
  return {{"suffix_rules", rules},
          {"restore_e", p.rules.restore_e},
          {"exceptions", exceptions},
          {"stoplist", std::vector<std::string>(p.stoplist.begin(), p.stoplist.end())}};
}

inline TextPrep textprep_from_json(const json& j) {
  TextPrep p;
  p.rules.suffix_rules.clear();
  const auto& rules = field(j, "suffix_rules", "textprep");
  if (!rules.is_array()) throw FormatError("model artifact: field 'textprep.suffix_rules' is not an array");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const std::string path = "textprep.suffix_rules[" + std::to_string(i) + "]";
    SuffixRule r;
    r.suffix = field_as<std::string>(rules[i], "suffix", path);
    r.replacement = field_as<std::string>(rules[i], "replacement", path);
    r.min_stem = field_as<std::size_t>(rules[i], "min_stem", path);
    r.verb_ending = field_as<bool>(rules[i], "verb_ending", path);
    r.blocked_after = field_as<std::vector<std::string>>(rules[i], "blocked_after", path);
    p.rules.suffix_rules.push_back(std::move(r));
  }
  p.rules.restore_e = field_as<std::vector<std::string>>(j, "restore_e", "textprep");
  p.rules.exceptions.clear();
  for (const auto& [w, l] : field_as<std::map<std::string, std::string>>(j, "exceptions", "textprep")) {
    p.rules.exceptions.emplace(w, l);
  }
  p.stoplist.clear();
  for (auto& w : field_as<std::vector<std::string>>(j, "stoplist", "textprep")) p.stoplist.insert(std::move(w));
  return p;
}

inline json train_config_to_json(const TrainConfig& c, const MlpModel& net) {
  return {{"epochs", c.epochs},         {"learning_rate", c.learning_rate},
          {"momentum", c.momentum},     {"batch_size", c.batch_size},
          {"seed", c.seed},             {"hidden_units", net.hidden_units()},
          {"dropout_rate", net.dropout_rate}};
}

}  // namespace detail

inline nlohmann::json model_to_json(const Classifier& model) {
  using nlohmann::json;
  json j;
  j["format_version"] = kModelFormatVersion;
  j["model_kind"] = model.kind();
  j["categories"] = categories_to_json(model.categories());
  if (const auto* n = model.neural()) {
    j["vocab"] = n->vocab.terms();
    j["textprep"] = detail::textprep_to_json(n->prep);
    j["parameters"] = {{"w1", detail::matrix_to_json(n->net.w1)},
                       {"b1", n->net.b1},
                       {"w2", detail::matrix_to_json(n->net.w2)},
                       {"b2", n->net.b2}};
    if (n->scaler) j["scaler"] = {{"min", n->scaler->min}, {"max", n->scaler->max}};
    j["train_config"] = detail::train_config_to_json(n->train_config, n->net);
    json loss = json::array(), acc = json::array();
    for (const auto& e : n->net.history) {
      loss.push_back(e.loss);
      acc.push_back(e.accuracy);
    }
    j["metrics"] = {{"epoch_loss", loss}, {"epoch_accuracy", acc}};
  } else {
    const auto* t = model.tree();
    j["feature_names"] = flatten_keywords(t->categories);
    json nodes = json::array();
    for (const auto& node : t->tree.nodes) {
      if (const auto* s = std::get_if<TreeSplit>(&node)) {
        nodes.push_back({{"feature", s->feature}, {"absent", s->absent}, {"present", s->present}});
      } else {
        nodes.push_back({{"counts", std::get<TreeLeaf>(node).counts}});
      }
    }
    j["parameters"] = {{"num_features", t->tree.num_features},
                       {"num_classes", t->tree.num_classes},
                       {"nodes", nodes}};
    j["train_config"] = {{"max_depth", t->max_depth ? json(*t->max_depth) : json(nullptr)},
                         {"criterion", "gini"}};
    j["metrics"] = {{"training_accuracy", t->training_accuracy},
                    {"depth", t->tree.depth()},
                    {"leaves", t->tree.leaf_count()}};
  }
  return j;
}

inline Classifier model_from_json(const nlohmann::json& j) {
  using detail::field;
  using detail::field_as;
  const int version = field_as<int>(j, "format_version", "");
  if (version != kModelFormatVersion) {
    throw FormatError("model artifact: field 'format_version' is " + std::to_string(version) +
                      ", this build reads version " + std::to_string(kModelFormatVersion));
  }
  const auto kind = field_as<std::string>(j, "model_kind", "");
  std::vector<CategorySpec> categories;
  try {
    categories = categories_from_json(field(j, "categories", ""));
  } catch (const Error& e) {
    throw FormatError(std::string("model artifact: field 'categories' is invalid: ") + e.what());
  }
  const auto& params = field(j, "parameters", "");
  if (kind == "mlp") {
    NeuralClassifier n;
    n.categories = std::move(categories);
    try {
      n.vocab = Vocabulary::from_terms(field_as<std::vector<std::string>>(j, "vocab", ""));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("model artifact: field 'vocab' is invalid: ") + e.what());
    }
    n.prep = detail::textprep_from_json(field(j, "textprep", ""));
    n.net.w1 = detail::matrix_from_json(field(params, "w1", "parameters"), "parameters.w1");
    n.net.b1 = field_as<std::vector<double>>(params, "b1", "parameters");
    n.net.w2 = detail::matrix_from_json(field(params, "w2", "parameters"), "parameters.w2");
    n.net.b2 = field_as<std::vector<double>>(params, "b2", "parameters");
    const auto& tc = field(j, "train_config", "");
    n.train_config.epochs = field_as<std::size_t>(tc, "epochs", "train_config");
    n.train_config.learning_rate = field_as<double>(tc, "learning_rate", "train_config");
    n.train_config.momentum = field_as<double>(tc, "momentum", "train_config");
    n.train_config.batch_size = field_as<std::size_t>(tc, "batch_size", "train_config");
    n.train_config.seed = field_as<std::uint64_t>(tc, "seed", "train_config");
    n.net.dropout_rate = field_as<double>(tc, "dropout_rate", "train_config");
    if (const auto it = j.find("metrics"); it != j.end() && it->contains("epoch_loss")) {
      const auto loss = field_as<std::vector<double>>(*it, "epoch_loss", "metrics");
      const auto acc = field_as<std::vector<double>>(*it, "epoch_accuracy", "metrics");
      for (std::size_t i = 0; i < loss.size() && i < acc.size(); ++i) n.net.history.push_back({loss[i], acc[i]});
    }
    try {
      n.net.validate();
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("model artifact: field 'parameters' is invalid: ") + e.what());
    }
    if (const auto it = j.find("scaler"); it != j.end()) {
      MinMaxScaler sc{field_as<std::vector<double>>(*it, "min", "scaler"),
                      field_as<std::vector<double>>(*it, "max", "scaler")};
      if (sc.min.size() != n.vocab.size() || sc.max.size() != n.vocab.size()) {
        throw FormatError("model artifact: field 'scaler' does not match 'vocab'");
      }
      n.scaler = std::move(sc);
    }
    if (n.net.input_dim() != n.vocab.size()) {
      throw FormatError("model artifact: field 'parameters.w1' width does not match 'vocab'");
    }
    if (n.net.num_classes() != n.categories.size()) {
      throw FormatError("model artifact: field 'parameters.w2' height does not match 'categories'");
    }
    return Classifier(std::move(n));
  }
  if (kind == "tree") {
    TreeClassifier t;
    t.categories = std::move(categories);
    t.tree.num_features = field_as<std::size_t>(params, "num_features", "parameters");
    t.tree.num_classes = field_as<std::size_t>(params, "num_classes", "parameters");
    const auto& nodes = field(params, "nodes", "parameters");
    if (!nodes.is_array()) throw FormatError("model artifact: field 'parameters.nodes' is not an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string path = "parameters.nodes[" + std::to_string(i) + "]";
      if (nodes[i].contains("counts")) {
        t.tree.nodes.emplace_back(TreeLeaf{field_as<std::vector<std::size_t>>(nodes[i], "counts", path)});
      } else {
        t.tree.nodes.emplace_back(TreeSplit{field_as<std::size_t>(nodes[i], "feature", path),
                                            field_as<std::size_t>(nodes[i], "absent", path),
                                            field_as<std::size_t>(nodes[i], "present", path)});
      }
    }
    try {
      validate_tree(t.tree);
    } catch (const FormatError& e) {
      throw FormatError(std::string("model artifact: field 'parameters.nodes' is invalid: ") + e.what());
    }
    if (t.tree.num_features != flatten_keywords(t.categories).size() ||
        t.tree.num_classes != t.categories.size()) {
      throw FormatError("model artifact: field 'parameters' does not match 'categories'");
    }
    const auto& tc = field(j, "train_config", "");
    if (auto it = tc.find("max_depth"); it != tc.end() && !it->is_null()) {
      t.max_depth = field_as<std::size_t>(tc, "max_depth", "train_config");
    }
    if (const auto it = j.find("metrics"); it != j.end()) t.training_accuracy = it->value("training_accuracy", 0.0);
    return Classifier(std::move(t));
  }
  throw FormatError("model artifact: field 'model_kind' is '" + kind + "', expected mlp or tree");
}

inline void save_model(const std::string& path, const Classifier& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model artifact '" + path + "'");
  out << model_to_json(model).dump(1) << '\n';
  if (!out) throw Error("failed writing model artifact '" + path + "'");
}

inline Classifier load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model artifact '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("model artifact '" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace helpdesk
