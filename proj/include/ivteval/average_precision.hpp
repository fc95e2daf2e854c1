#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace ivt {

struct RankedSample {
  double score = 0.0;
  bool is_positive = false;
};

struct PrPoint {
  double precision = 0.0;
  double recall = 0.0;
};

// Indices of `scores` ordered by descending score; equal scores keep their
// input order. Throws on a non-finite score.
std::vector<std::size_t> rank_order(std::span<const double> scores);

// Step-integrated area under the precision-recall curve:
//   AP = sum_k (r_k - r_{k-1}) * p_k   over the ranks k holding a positive.
// Undefined (nullopt) when the samples contain no positive.
std::optional<double> average_precision(std::span<const RankedSample> samples);

// Same integral for a sequence that is already ranked, where `hits[k]` says
// whether rank k is a true positive and `total_positives` counts every
// positive in the pool, including those never retrieved. Undefined when
// total_positives is 0.
std::optional<double> ranked_average_precision(
    std::span<const std::uint8_t> hits, std::size_t total_positives);

// (precision, recall) after each rank of an already-ranked hit sequence.
std::vector<PrPoint> precision_recall_curve(std::span<const std::uint8_t> hits,
                                            std::size_t total_positives);

// Per-class APs plus their mean over defined classes. Undefined classes
// (no positives, or masked) are nullopt and excluded from the mean.
struct APResult {
  std::vector<std::optional<double>> per_class;
  std::optional<double> mean;
  int defined_count = 0;
};

// Builds an APResult, dropping masked class ids before taking the mean.
APResult summarize_ap(std::vector<std::optional<double>> per_class,
                      const std::set<int>& mask = {});

}  // namespace ivt
