#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "helpdesk/model.hpp"
#include "test_support.hpp"

using namespace helpdesk;

namespace {

Classifier small_network() {
  const auto data = support::synthetic_labeled(1, {8, 8, 8, 8, 8});
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 3;
  return Classifier(train_neural(to_training_samples(data, TextPrep{}), default_categories(), TextPrep{},
                                 MlpConfig{}, cfg));
}

Classifier small_tree() {
  return Classifier(train_keyword_tree(support::synthetic_labeled(2, {8, 8, 8, 8, 8}), default_categories()));
}

std::string error_of(const nlohmann::json& j) {
  try {
    model_from_json(j);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Model, NetworkRoundTripKeepsProbabilities) {
  const auto model = small_network();
  const auto back = model_from_json(nlohmann::json::parse(model_to_json(model).dump()));
  ASSERT_TRUE(back.is_neural());
  const auto* a = model.neural();
  const auto* b = back.neural();
  EXPECT_EQ(a->vocab.terms(), b->vocab.terms());
  EXPECT_EQ(a->categories, b->categories);
  for (const auto& e : support::synthetic_labeled(9, {4, 4, 4, 4, 4})) {
    const auto x = model.features(e.email);
    EXPECT_EQ(back.features(e.email), x);
    EXPECT_EQ(predict_proba(a->net, x), predict_proba(b->net, x));
  }
  EXPECT_EQ(model_to_json(back), model_to_json(model));
}

TEST(Model, ScaledNetworkRoundTrip) {
  const auto data = support::synthetic_labeled(1, {8, 8, 8, 8, 8});
  TrainConfig cfg;
  cfg.epochs = 3;
  const Classifier model(train_neural(to_training_samples(data, TextPrep{}), default_categories(), TextPrep{},
                                      MlpConfig{}, cfg, true));
  ASSERT_TRUE(model.neural()->scaler);
  for (const auto& e : data) {
    for (double v : model.features(e.email)) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
  const auto j = model_to_json(model);
  ASSERT_TRUE(j.contains("scaler"));
  const auto back = model_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.neural()->scaler, model.neural()->scaler);
  EXPECT_EQ(back.features(data[0].email), model.features(data[0].email));
  EXPECT_FALSE(model_to_json(small_network()).contains("scaler"));
}

TEST(Model, TreeRoundTripKeepsPredictions) {
  const auto model = small_tree();
  const auto back = model_from_json(nlohmann::json::parse(model_to_json(model).dump()));
  ASSERT_FALSE(back.is_neural());
  EXPECT_EQ(back.tree()->tree.nodes.size(), model.tree()->tree.nodes.size());
  for (const auto& e : support::synthetic_labeled(9, {4, 4, 4, 4, 4})) {
    EXPECT_EQ(back.classify(e.email), model.classify(e.email));
  }
  EXPECT_EQ(model_to_json(back), model_to_json(model));
}

TEST(Model, SaveAndLoadFile) {
  const auto path = (std::filesystem::temp_directory_path() / "helpdesk_model_test.json").string();
  const auto model = small_tree();
  save_model(path, model);
  EXPECT_EQ(model_to_json(load_model(path)), model_to_json(model));
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(path), Error);
}

TEST(Model, ArtifactCarriesKindAndVersion) {
  const auto j = model_to_json(small_network());
  EXPECT_EQ(j.at("format_version"), kModelFormatVersion);
  EXPECT_EQ(j.at("model_kind"), "mlp");
  EXPECT_EQ(model_to_json(small_tree()).at("model_kind"), "tree");
}

TEST(Model, WrongVersionIsRejected) {
  auto j = model_to_json(small_tree());
  j["format_version"] = 2;
  EXPECT_NE(error_of(j).find("format_version"), std::string::npos);
}

TEST(Model, ErrorsNameTheField) {
  auto j = model_to_json(small_network());
  j.erase("vocab");
  EXPECT_NE(error_of(j).find("'vocab'"), std::string::npos);

  j = model_to_json(small_network());
  j["parameters"].erase("b2");
  EXPECT_NE(error_of(j).find("b2"), std::string::npos);

  j = model_to_json(small_network());
  j["model_kind"] = "forest";
  EXPECT_NE(error_of(j).find("model_kind"), std::string::npos);

  j = model_to_json(small_tree());
  j["parameters"]["nodes"][0]["feature"] = 999;
  EXPECT_NE(error_of(j).find("nodes"), std::string::npos);
}

TEST(Model, TrainingAccuracyOfTreeIsRecorded) {
  const auto model = small_tree();
  EXPECT_GT(model.tree()->training_accuracy, 0.5);
  EXPECT_LE(model.tree()->training_accuracy, 1.0);
}
