#include "ivteval/average_precision.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ivteval/error.hpp"

namespace ivt {

std::vector<std::size_t> rank_order(std::span<const double> scores) {
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFinite, "non-finite score in ranking");
    }
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

std::optional<double> ranked_average_precision(
    std::span<const std::uint8_t> hits, std::size_t total_positives) {
  if (total_positives == 0) return std::nullopt;
  const double n_pos = static_cast<double>(total_positives);
  double ap = 0.0;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (hits[k] == 0) continue;
    ++tp;
    // Recall rises by 1/n_pos at each hit; precision is tp / (k + 1).
    ap += static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  if (tp > total_positives) {
    throw Error(ErrorCode::kInvalidArgument,
                "more hits than positives in ranked AP");
  }
  return ap / n_pos;
}

std::vector<PrPoint> precision_recall_curve(std::span<const std::uint8_t> hits,
                                            std::size_t total_positives) {
  std::vector<PrPoint> curve;
  curve.reserve(hits.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (hits[k] != 0) ++tp;
    const double recall =
        total_positives == 0
            ? 0.0
            : static_cast<double>(tp) / static_cast<double>(total_positives);
    curve.push_back(
        {static_cast<double>(tp) / static_cast<double>(k + 1), recall});
  }
  return curve;
}

std::optional<double> average_precision(std::span<const RankedSample> samples) {
  std::vector<double> scores;
  scores.reserve(samples.size());
  std::size_t positives = 0;
  for (const RankedSample& s : samples) {
    scores.push_back(s.score);
    if (s.is_positive) ++positives;
  }
  const std::vector<std::size_t> order = rank_order(scores);
  if (positives == 0) return std::nullopt;
  std::vector<std::uint8_t> hits;
  hits.reserve(order.size());
  for (std::size_t idx : order) hits.push_back(samples[idx].is_positive ? 1 : 0);
  return ranked_average_precision(hits, positives);
}

APResult summarize_ap(std::vector<std::optional<double>> per_class,
                      const std::set<int>& mask) {
  APResult result;
  result.per_class = std::move(per_class);
  double sum = 0.0;
  for (std::size_t c = 0; c < result.per_class.size(); ++c) {
    auto& value = result.per_class[c];
    if (mask.contains(static_cast<int>(c))) value.reset();
    if (!value) continue;
    sum += *value;
    ++result.defined_count;
  }
  if (result.defined_count > 0) result.mean = sum / result.defined_count;
  return result;
}

}  // namespace ivt
