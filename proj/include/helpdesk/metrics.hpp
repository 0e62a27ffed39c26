#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "helpdesk/error.hpp"

namespace helpdesk {

/// Rows are true categories, columns are predicted categories.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> categories)
      : categories_(std::move(categories)),
        counts_(categories_.size() * categories_.size(), 0) {}

  std::size_t size() const { return categories_.size(); }
  const std::vector<std::string>& categories() const { return categories_; }

  std::size_t& at(std::size_t truth, std::size_t predicted) {
    return counts_[truth * size() + predicted];
  }
  std::size_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * size() + predicted];
  }

  std::size_t total() const { return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}); }
  std::size_t trace() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < size(); ++i) t += at(i, i);
    return t;
  }
  std::size_t row_sum(std::size_t i) const {
    std::size_t s = 0;
    for (std::size_t j = 0; j < size(); ++j) s += at(i, j);
    return s;
  }
  std::size_t col_sum(std::size_t j) const {
    std::size_t s = 0;
    for (std::size_t i = 0; i < size(); ++i) s += at(i, j);
    return s;
  }

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::string> categories_;
  std::vector<std::size_t> counts_;
};

inline ConfusionMatrix confusion(std::span<const std::size_t> y_true,
                                 std::span<const std::size_t> y_pred,
                                 std::span<const std::string> categories) {
  if (y_true.size() != y_pred.size()) {
    throw InvalidArgument("true and predicted label lists differ in length");
  }
  ConfusionMatrix cm({categories.begin(), categories.end()});
  for (std::size_t k = 0; k < y_true.size(); ++k) {
    if (y_true[k] >= cm.size() || y_pred[k] >= cm.size()) {
      throw InvalidArgument("unknown label at position " + std::to_string(k));
    }
    ++cm.at(y_true[k], y_pred[k]);
  }
  return cm;
}

struct ClassMetrics {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::size_t total = 0;
};

/// Unweighted mean of per-class values.
inline double macro_average(std::span<const double> per_class) {
  if (per_class.empty()) throw InvalidArgument("macro average of no classes");
  return std::accumulate(per_class.begin(), per_class.end(), 0.0) / static_cast<double>(per_class.size());
}

/// Per-class precision/recall/F1 (0 on a zero denominator), accuracy as
/// trace/total, and unweighted macro means of the per-class values.
inline EvalReport report(const ConfusionMatrix& cm) {
  if (cm.size() == 0 || cm.total() == 0) throw InvalidArgument("cannot report on an empty confusion matrix");
  EvalReport r;
  r.total = cm.total();
  for (std::size_t i = 0; i < cm.size(); ++i) {
    ClassMetrics m;
    m.name = cm.categories()[i];
    const double tp = static_cast<double>(cm.at(i, i));
    const double predicted = static_cast<double>(cm.col_sum(i));
    m.support = cm.row_sum(i);
    m.precision = predicted > 0 ? tp / predicted : 0.0;
    m.recall = m.support > 0 ? tp / static_cast<double>(m.support) : 0.0;
    m.f1 = (m.precision + m.recall) > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    r.per_class.push_back(std::move(m));
  }
  std::vector<double> p, rc, f;
  for (const auto& m : r.per_class) {
    p.push_back(m.precision);
    rc.push_back(m.recall);
    f.push_back(m.f1);
  }
  r.macro_precision = macro_average(p);
  r.macro_recall = macro_average(rc);
  r.macro_f1 = macro_average(f);
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(r.total);
  return r;
}

namespace detail {

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string pad_left(std::string_view s, std::size_t width) {
  std::string out;
  if (s.size() < width) out.assign(width - s.size(), ' ');
  out += s;
  return out;
}

}  // namespace detail

/// Classification-report layout: precision, recall, f1-score, support.
inline std::string format_report(const EvalReport& r) {
  std::size_t name_w = std::string_view("macro avg").size();
  for (const auto& m : r.per_class) name_w = std::max(name_w, m.name.size());
  using detail::fixed2;
  using detail::pad_left;
  std::ostringstream out;
  out << pad_left("", name_w) << pad_left("precision", 11) << pad_left("recall", 10)
      << pad_left("f1-score", 10) << pad_left("support", 10) << "\n\n";
  for (const auto& m : r.per_class) {
    out << pad_left(m.name, name_w) << pad_left(fixed2(m.precision), 11)
        << pad_left(fixed2(m.recall), 10) << pad_left(fixed2(m.f1), 10)
        << pad_left(std::to_string(m.support), 10) << '\n';
  }
  out << '\n'
      << pad_left("accuracy", name_w) << pad_left("", 21) << pad_left(fixed2(r.accuracy), 10)
      << pad_left(std::to_string(r.total), 10) << '\n'
      << pad_left("macro avg", name_w) << pad_left(fixed2(r.macro_precision), 11)
      << pad_left(fixed2(r.macro_recall), 10) << pad_left(fixed2(r.macro_f1), 10)
      << pad_left(std::to_string(r.total), 10) << '\n';
  return out.str();
}

/// Same content as format_report, full precision, one row per class plus
/// "accuracy" and "macro avg" rows.
inline std::string report_csv(const EvalReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "class,precision,recall,f1,support\n";
  for (const auto& m : r.per_class) {
    out << m.name << ',' << m.precision << ',' << m.recall << ',' << m.f1 << ',' << m.support << '\n';
  }
  out << "accuracy,,," << r.accuracy << ',' << r.total << '\n';
  out << "macro avg," << r.macro_precision << ',' << r.macro_recall << ',' << r.macro_f1 << ','
      << r.total << '\n';
  return out.str();
}

enum class MatrixFormat { csv, ascii };

inline std::string render_confusion(const ConfusionMatrix& cm, MatrixFormat format) {
  std::ostringstream out;
  const auto& names = cm.categories();
  if (format == MatrixFormat::csv) {
    out << "true\\predicted";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < cm.size(); ++i) {
      out << names[i];
      for (std::size_t j = 0; j < cm.size(); ++j) out << ',' << cm.at(i, j);
      out << '\n';
    }
    return out.str();
  }
  std::size_t label_w = std::string_view("true \\ pred").size();
  std::size_t cell_w = 1;
  for (const auto& n : names) {
    label_w = std::max(label_w, n.size());
    cell_w = std::max(cell_w, n.size());
  }
  for (std::size_t i = 0; i < cm.size(); ++i) {
    for (std::size_t j = 0; j < cm.size(); ++j) {
      cell_w = std::max(cell_w, std::to_string(cm.at(i, j)).size());
    }
  }
  auto rule = [&] {
    out << '+' << std::string(label_w + 2, '-');
    for (std::size_t j = 0; j < cm.size(); ++j) out << '+' << std::string(cell_w + 2, '-');
    out << "+\n";
  };
  using detail::pad_left;
  rule();
  out << "| " << pad_left("true \\ pred", label_w) << ' ';
  for (const auto& n : names) out << "| " << pad_left(n, cell_w) << ' ';
  out << "|\n";
  rule();
  for (std::size_t i = 0; i < cm.size(); ++i) {
    out << "| " << pad_left(names[i], label_w) << ' ';
    for (std::size_t j = 0; j < cm.size(); ++j) {
      out << "| " << pad_left(std::to_string(cm.at(i, j)), cell_w) << ' ';
    }
    out << "|\n";
  }
  rule();
  return out.str();
}

/// Inverse of render_confusion(cm, MatrixFormat::csv).
inline ConfusionMatrix parse_confusion_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line)) throw FormatError("confusion csv: missing header");
  auto header = split(line);
  if (header.size() < 2) throw FormatError("confusion csv: header has no categories");
  ConfusionMatrix cm(std::vector<std::string>(header.begin() + 1, header.end()));
  for (std::size_t i = 0; i < cm.size(); ++i) {
    if (!std::getline(in, line)) throw FormatError("confusion csv: missing row " + std::to_string(i + 1));
    auto cells = split(line);
    if (cells.size() != cm.size() + 1 || cells[0] != cm.categories()[i]) {
      throw FormatError("confusion csv: malformed row " + std::to_string(i + 1));
    }
    for (std::size_t j = 0; j < cm.size(); ++j) {
      try {
        std::size_t used = 0;
        cm.at(i, j) = std::stoull(cells[j + 1], &used);
        if (used != cells[j + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw FormatError("confusion csv: non-integer count in row " + std::to_string(i + 1));
      }
    }
  }
  return cm;
}

}  // namespace helpdesk
