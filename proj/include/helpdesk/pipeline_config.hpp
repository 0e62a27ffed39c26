#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpdesk/augment.hpp"
#include "helpdesk/autoreply.hpp"
#include "helpdesk/error.hpp"
#include "helpdesk/labeling.hpp"
#include "helpdesk/mlp.hpp"
#include "helpdesk/textprep.hpp"

namespace helpdesk {

/// Environment variable naming the default pipeline config file.
inline constexpr const char* kConfigEnvVar = "HELPDESK_CONFIG";

/// Top-level settings shared by every CLI stage. Unset paths fall back to the
/// built-in defaults.
struct PipelineConfig {
  std::optional<std::string> corpus;
  std::optional<std::string> categories;
  std::optional<std::string> thesaurus;
  std::optional<std::string> stoplist;
  std::optional<std::string> lemma_exceptions;
  std::optional<std::string> templates;
  MlpConfig shape;
  TrainConfig train;
  /// Min-max scale the network's count vectors.
  bool minmax_scale = false;
  AugmentConfig augment;
  double train_ratio = 0.8;
  GatePolicy gate;
  std::uint64_t seed = 0;

  void validate() const {
    train.validate();
    augment.validate();
    if (shape.hidden_units < 1) throw InvalidArgument("hidden_units must be at least 1");
    if (!(shape.dropout_rate >= 0.0 && shape.dropout_rate < 1.0)) {
      throw InvalidArgument("dropout_rate must be in [0, 1)");
    }
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw InvalidArgument("train_ratio must be in (0, 1)");
    if (!(gate.threshold >= 0.0 && gate.threshold <= 1.0)) throw InvalidArgument("threshold must be in [0, 1]");
    for (const auto* p : {&corpus, &categories, &thesaurus, &stoplist, &lemma_exceptions, &templates}) {
      if (*p && !std::filesystem::is_regular_file(**p)) {
        throw InvalidArgument("config references missing file '" + **p + "'");
      }
    }
  }

  std::vector<CategorySpec> load_category_specs() const {
    return categories ? load_categories(*categories) : default_categories();
  }

  SynonymLexicon load_lexicon() const { return thesaurus ? load_thesaurus(*thesaurus) : default_lexicon(); }

  TextPrep load_textprep() const {
    TextPrep prep;
    if (stoplist) prep.stoplist = load_stoplist(*stoplist);
    if (lemma_exceptions) {
      for (auto& [word, lemma] : load_lemma_exceptions(*lemma_exceptions)) prep.rules.exceptions[word] = lemma;
    }
    return prep;
  }

  TemplateSet load_template_set() const { return templates ? load_templates(*templates) : default_templates(); }
};

inline std::string_view to_string(GateDirection d) {
  return d == GateDirection::confidence_at_least ? "confidence_at_least" : "error_at_least";
}

inline GateDirection parse_gate_direction(std::string_view s) {
  if (s == "confidence_at_least") return GateDirection::confidence_at_least;
  if (s == "error_at_least") return GateDirection::error_at_least;
  throw InvalidArgument("unknown gate direction '" + std::string(s) + "'");
}

namespace detail {

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& dst, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace detail

/// Relative paths are resolved against `base_dir`.
inline PipelineConfig pipeline_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {},
                                                const std::string& where = "config") {
  if (!j.is_object()) throw FormatError(where + ": expected a JSON object");
  static const char* const kKnown[] = {"corpus", "categories", "thesaurus", "stoplist", "lemma_exceptions",
                                       "templates", "train", "augment", "train_ratio", "threshold",
                                       "gate_direction", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw FormatError(where + ": unknown field '" + key + "'");
    }
  }
  PipelineConfig c;
  auto path_field = [&](const char* key, std::optional<std::string>& dst) {
    std::string p;
    detail::read_opt(j, key, p, where);
    if (p.empty()) return;
    std::filesystem::path fp(p);
    if (fp.is_relative() && !base_dir.empty()) fp = base_dir / fp;
    dst = fp.lexically_normal().string();
  };
  path_field("corpus", c.corpus);
  path_field("categories", c.categories);
  path_field("thesaurus", c.thesaurus);
  path_field("stoplist", c.stoplist);
  path_field("lemma_exceptions", c.lemma_exceptions);
  path_field("templates", c.templates);
  if (j.contains("train")) {
    const auto& t = j.at("train");
    const std::string tw = where + ".train";
    detail::read_opt(t, "epochs", c.train.epochs, tw);
    detail::read_opt(t, "learning_rate", c.train.learning_rate, tw);
    detail::read_opt(t, "momentum", c.train.momentum, tw);
    detail::read_opt(t, "batch_size", c.train.batch_size, tw);
    detail::read_opt(t, "hidden_units", c.shape.hidden_units, tw);
    detail::read_opt(t, "dropout_rate", c.shape.dropout_rate, tw);
    detail::read_opt(t, "minmax_scale", c.minmax_scale, tw);
  }
  if (j.contains("augment")) {
    const auto& a = j.at("augment");
    detail::read_opt(a, "target_per_class", c.augment.target_per_class, where + ".augment");
    detail::read_opt(a, "replace_fraction", c.augment.replace_fraction, where + ".augment");
  }
  detail::read_opt(j, "train_ratio", c.train_ratio, where);
  detail::read_opt(j, "threshold", c.gate.threshold, where);
  std::string direction;
  detail::read_opt(j, "gate_direction", direction, where);
  if (!direction.empty()) c.gate.direction = parse_gate_direction(direction);
  detail::read_opt(j, "seed", c.seed, where);
  c.validate();
  return c;
}

inline PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("config file '" + path + "': " + e.what());
  }
  return pipeline_config_from_json(j, std::filesystem::path(path).parent_path(), "config file '" + path + "'");
}

/// An explicit path wins, then $HELPDESK_CONFIG, then built-in defaults.
inline PipelineConfig resolve_pipeline_config(const std::optional<std::string>& explicit_path) {
  if (explicit_path) return load_pipeline_config(*explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return load_pipeline_config(env);
  PipelineConfig c;
  c.validate();
  return c;
}

}  // namespace helpdesk
