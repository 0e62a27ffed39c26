#include <gtest/gtest.h>

#include <vector>

#include "helpdesk/metrics.hpp"
#include "helpdesk/random.hpp"

using namespace helpdesk;

namespace {

const std::vector<std::string> kNames = {"adobe", "appsanywhere", "blackboard", "password", "wifi"};

// Decision-tree test confusion rebuilt from its printed report: one adobe
// email and all three appsanywhere emails predicted as wifi, one wifi email
// predicted as blackboard.
ConfusionMatrix tree_matrix() {
  ConfusionMatrix cm(kNames);
  cm.at(0, 0) = 4;
  cm.at(0, 4) = 1;
  cm.at(1, 4) = 3;
  cm.at(2, 2) = 22;
  cm.at(3, 3) = 12;
  cm.at(4, 4) = 10;
  cm.at(4, 2) = 1;
  return cm;
}

}  // namespace

TEST(Metrics, TreeReportValues) {
  const auto r = report(tree_matrix());
  struct Row {
    double p, r, f;
    std::size_t support;
  };
  const Row expected[] = {{1.00, 0.80, 0.89, 5}, {0.00, 0.00, 0.00, 3}, {0.96, 1.00, 0.98, 22},
                          {1.00, 1.00, 1.00, 12}, {0.71, 0.91, 0.80, 11}};
  ASSERT_EQ(r.per_class.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(r.per_class[i].name, kNames[i]);
    EXPECT_NEAR(r.per_class[i].precision, expected[i].p, 0.005) << kNames[i];
    EXPECT_NEAR(r.per_class[i].recall, expected[i].r, 0.005) << kNames[i];
    EXPECT_NEAR(r.per_class[i].f1, expected[i].f, 0.005) << kNames[i];
    EXPECT_EQ(r.per_class[i].support, expected[i].support);
  }
  EXPECT_NEAR(r.accuracy, 0.91, 0.005);
  EXPECT_NEAR(r.macro_precision, 0.73, 0.005);
  EXPECT_NEAR(r.macro_recall, 0.74, 0.005);
  EXPECT_NEAR(r.macro_f1, 0.73, 0.005);
  EXPECT_EQ(r.total, 53u);
}

TEST(Metrics, ExactFractions) {
  const auto r = report(tree_matrix());
  EXPECT_DOUBLE_EQ(r.per_class[4].precision, 10.0 / 14.0);
  EXPECT_DOUBLE_EQ(r.per_class[2].precision, 22.0 / 23.0);
  EXPECT_DOUBLE_EQ(r.per_class[0].f1, 2 * 0.8 / 1.8);
  EXPECT_DOUBLE_EQ(r.accuracy, 48.0 / 53.0);
}

TEST(Metrics, MacroAverageOfPrintedValues) {
  EXPECT_NEAR(macro_average(std::vector<double>{0.67, 1.00, 0.91, 0.85, 0.76}), 0.84, 0.005);
  EXPECT_NEAR(macro_average(std::vector<double>{0.75, 1.00, 0.91, 0.79, 0.80}), 0.85, 0.005);
  EXPECT_NEAR(macro_average(std::vector<double>{0.60, 1.00, 0.91, 0.92, 0.73}), 0.83, 0.005);
  EXPECT_THROW(macro_average(std::vector<double>{}), InvalidArgument);
}

TEST(Metrics, DiagonalIsPerfect) {
  ConfusionMatrix cm(kNames);
  for (std::size_t i = 0; i < 5; ++i) cm.at(i, i) = i + 1;
  const auto r = report(cm);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.macro_f1, 1.0);
  EXPECT_DOUBLE_EQ(r.macro_precision, 1.0);
}

TEST(Metrics, ZeroDivisionGivesZero) {
  ConfusionMatrix cm({"a", "b"});
  cm.at(0, 0) = 3;
  const auto r = report(cm);
  EXPECT_DOUBLE_EQ(r.per_class[1].precision, 0.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].recall, 0.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].f1, 0.0);
  EXPECT_DOUBLE_EQ(r.macro_f1, 0.5);
}

TEST(Metrics, AccuracyIsSupportWeightedRecall) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> t, p;
    for (int k = 0; k < 60; ++k) {
      t.push_back(rng.uniform_index(5));
      p.push_back(rng.uniform_index(5));
    }
    const auto r = report(confusion(t, p, kNames));
    double weighted = 0.0;
    for (const auto& m : r.per_class) weighted += m.recall * static_cast<double>(m.support);
    EXPECT_NEAR(weighted / 60.0, r.accuracy, 1e-12);
  }
}

TEST(Metrics, ConfusionCountsPairs) {
  const std::vector<std::size_t> t = {0, 0, 1, 2}, p = {0, 1, 1, 0};
  const auto cm = confusion(t, p, std::vector<std::string>{"x", "y", "z"});
  EXPECT_EQ(cm.at(0, 0), 1u);
  EXPECT_EQ(cm.at(0, 1), 1u);
  EXPECT_EQ(cm.at(1, 1), 1u);
  EXPECT_EQ(cm.at(2, 0), 1u);
  EXPECT_EQ(cm.total(), 4u);
  EXPECT_THROW(confusion(t, std::vector<std::size_t>{0}, std::vector<std::string>{"x", "y", "z"}), InvalidArgument);
}

TEST(Metrics, EmptyMatrixIsAnError) {
  EXPECT_THROW(report(ConfusionMatrix(kNames)), InvalidArgument);
  EXPECT_THROW(report(ConfusionMatrix()), InvalidArgument);
}

TEST(Metrics, CsvRoundTrip) {
  const auto cm = tree_matrix();
  const auto csv = render_confusion(cm, MatrixFormat::csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "true\\predicted,adobe,appsanywhere,blackboard,password,wifi");
  const auto back = parse_confusion_csv(csv);
  ASSERT_EQ(back.categories(), cm.categories());
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(back.at(i, j), cm.at(i, j));
  }
  EXPECT_THROW(parse_confusion_csv("true\\predicted,a,b\na,1,x\nb,0,1\n"), FormatError);
  EXPECT_THROW(parse_confusion_csv("true\\predicted,a,b\na,1,0\n"), FormatError);
}

TEST(Metrics, AsciiRenderShowsEveryCell) {
  const auto text = render_confusion(tree_matrix(), MatrixFormat::ascii);
  EXPECT_NE(text.find("| appsanywhere |"), std::string::npos);
  EXPECT_NE(text.find("true \\ pred"), std::string::npos);
  EXPECT_NE(text.find("22"), std::string::npos);
  std::size_t rows = 0;
  for (char ch : text) rows += ch == '\n';
  EXPECT_EQ(rows, 5u + 4u);
}

TEST(Metrics, FormattedReportHasTwoDecimals) {
  const auto r = report(tree_matrix());
  const auto text = format_report(r);
  EXPECT_NE(text.find("0.91"), std::string::npos);
  EXPECT_NE(text.find("macro avg"), std::string::npos);
  EXPECT_NE(text.find("0.73"), std::string::npos);
  const auto csv = report_csv(r);
  EXPECT_NE(csv.find("appsanywhere"), std::string::npos);
}
