#pragma once

#include <cstddef>
#include <span>

#include "helpdesk/error.hpp"

namespace helpdesk {

/// A classifier decision: category index plus the model's confidence in it.
struct Prediction {
  std::size_t category = 0;
  double confidence = 0.0;

  bool operator==(const Prediction&) const = default;
};

/// Argmax over a score vector; the lowest index wins ties.
inline Prediction argmax_prediction(std::span<const double> scores) {
  if (scores.empty()) throw InvalidArgument("cannot take argmax of an empty score vector");
  Prediction best{0, scores[0]};
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > best.confidence) best = {i, scores[i]};
  }
  return best;
}

}  // namespace helpdesk
