#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "helpdesk/pipeline_config.hpp"

using namespace helpdesk;
namespace fs = std::filesystem;

namespace {

std::string data_file(const char* name) { return std::string(HELPDESK_DATA_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string format_error_of(const std::string& text) {
  try {
    pipeline_config_from_json(nlohmann::json::parse(text));
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ShippedPipelineFileLoads) {
  const auto c = load_pipeline_config(data_file("pipeline.json"));
  ASSERT_TRUE(c.categories);
  EXPECT_TRUE(fs::equivalent(*c.categories, data_file("categories.json")));
  EXPECT_EQ(c.load_category_specs(), default_categories());
  EXPECT_EQ(c.train.epochs, 50u);
  EXPECT_EQ(c.shape.hidden_units, 40u);
  EXPECT_FALSE(c.minmax_scale);
  EXPECT_DOUBLE_EQ(c.gate.threshold, 0.75);
  EXPECT_EQ(c.augment.target_per_class, 200u);
  EXPECT_EQ(c.load_textprep().stoplist, TextPrep{}.stoplist);
  EXPECT_EQ(c.load_template_set().snippets, default_templates().snippets);
}

TEST(Config, FieldsOverrideDefaults) {
  const auto c = pipeline_config_from_json(nlohmann::json::parse(
      R"({"train": {"epochs": 7, "hidden_units": 12, "minmax_scale": true}, "augment": {"target_per_class": 50},
          "threshold": 0.6, "gate_direction": "error_at_least", "seed": 42, "train_ratio": 0.7})"));
  EXPECT_EQ(c.train.epochs, 7u);
  EXPECT_EQ(c.shape.hidden_units, 12u);
  EXPECT_TRUE(c.minmax_scale);
  EXPECT_DOUBLE_EQ(c.shape.dropout_rate, 0.5);
  EXPECT_EQ(c.augment.target_per_class, 50u);
  EXPECT_DOUBLE_EQ(c.gate.threshold, 0.6);
  EXPECT_EQ(c.gate.direction, GateDirection::error_at_least);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_DOUBLE_EQ(c.train_ratio, 0.7);
}

TEST(Config, UnknownFieldAndBadTypesAreRejected) {
  EXPECT_NE(format_error_of(R"({"epochs": 5})").find("'epochs'"), std::string::npos);
  EXPECT_NE(format_error_of(R"({"threshold": "high"})").find("'threshold'"), std::string::npos);
  EXPECT_NE(format_error_of("[1, 2]").find("object"), std::string::npos);
  EXPECT_THROW(pipeline_config_from_json(nlohmann::json::parse(R"({"threshold": 1.5})")), InvalidArgument);
  EXPECT_THROW(pipeline_config_from_json(nlohmann::json::parse(R"({"gate_direction": "sideways"})")),
               InvalidArgument);
  EXPECT_THROW(pipeline_config_from_json(nlohmann::json::parse(R"({"train": {"batch_size": 0}})")),
               InvalidArgument);
}

TEST(Config, MissingReferencedFileIsAnError) {
  const auto path = write_temp("helpdesk_config_missing.json", R"({"thesaurus": "no-such-file.txt"})");
  try {
    load_pipeline_config(path);
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("no-such-file.txt"), std::string::npos);
  }
  EXPECT_THROW(load_pipeline_config("/nonexistent/pipeline.json"), Error);
  EXPECT_THROW(load_pipeline_config(write_temp("helpdesk_config_bad.json", "{not json")), FormatError);
}

TEST(Config, ResolutionOrder) {
  const auto env_file = write_temp("helpdesk_config_env.json", R"({"seed": 5})");
  const auto explicit_file = write_temp("helpdesk_config_explicit.json", R"({"seed": 9})");
  ::unsetenv(kConfigEnvVar);
  EXPECT_EQ(resolve_pipeline_config(std::nullopt).seed, 0u);
  ::setenv(kConfigEnvVar, env_file.c_str(), 1);
  EXPECT_EQ(resolve_pipeline_config(std::nullopt).seed, 5u);
  EXPECT_EQ(resolve_pipeline_config(explicit_file).seed, 9u);
  ::unsetenv(kConfigEnvVar);
}

TEST(Config, GateDirectionNamesRoundTrip) {
  for (auto d : {GateDirection::confidence_at_least, GateDirection::error_at_least}) {
    EXPECT_EQ(parse_gate_direction(to_string(d)), d);
  }
}
