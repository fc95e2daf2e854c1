#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ivteval/detection.hpp"

namespace ivt {

// Triplet association categories. Pair categories (LM .. MIL) consume one
// prediction and one groundtruth item; RFP and RFN are the leftovers.
enum class TasCategory { kLM, kPLM, kIDS, kIDM, kMIL, kRFP, kRFN };

inline constexpr std::array<TasCategory, 7> kAllTasCategories = {
    TasCategory::kLM,  TasCategory::kPLM, TasCategory::kIDS,
    TasCategory::kIDM, TasCategory::kMIL, TasCategory::kRFP,
    TasCategory::kRFN};

// "LM", "pLM", "IDS", "IDM", "MIL", "RFP", "RFN".
std::string_view to_string(TasCategory category);

struct TasCounts {
  std::array<std::size_t, 7> values{};

  std::size_t& operator[](TasCategory c) {
    return values[static_cast<std::size_t>(c)];
  }
  std::size_t operator[](TasCategory c) const {
    return values[static_cast<std::size_t>(c)];
  }
  std::size_t total() const noexcept;
  TasCounts& operator+=(const TasCounts& other) noexcept;
  friend bool operator==(const TasCounts&, const TasCounts&) = default;
};

struct TasReport {
  TasCounts counts;
  // 100 * count / sum of all seven counts; all 0 for an empty pool.
  std::array<double, 7> percentages{};

  double percentage(TasCategory c) const {
    return percentages[static_cast<std::size_t>(c)];
  }
};

struct FrameAssociation {
  std::vector<TasCategory> prediction_labels;
  std::vector<TasCategory> groundtruth_labels;
  TasCounts counts;
};

// Labels every prediction and groundtruth item of a frame. Stages run in
// order, each over items left unconsumed by the earlier ones, predictions by
// descending confidence:
//   LM   same triplet, IoU >= theta
//   pLM  same triplet, 0 < IoU < theta
//   IDS  other triplet at IoU >= theta, own triplet present in the frame
//   IDM  other triplet at IoU >= theta, own triplet absent from the frame
//   MIL  box-less prediction whose triplet is still unclaimed
// then leftovers become RFP / RFN. Within a stage the highest-IoU candidate
// wins, ties to the lower index.
FrameAssociation classify_associations(
    std::span<const Detection> predictions,
    std::span<const GroundTruthBox> groundtruth, double theta = 0.5);

TasReport tas_percentages(const TasCounts& counts);

}  // namespace ivt
