#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "ivteval/average_precision.hpp"
#include "ivteval/label_space.hpp"

namespace ivt {

// Normalized box: top-left corner (x, y) and extent (w, h), all in [0, 1].
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const noexcept { return w * h; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline constexpr double kBoxTolerance = 1e-6;

// w, h >= 0, x, y >= 0, and the box stays inside the unit square up to
// kBoxTolerance.
bool is_valid(const BoundingBox& box) noexcept;

// Intersection over union; 0 when the union is empty, so zero-area boxes
// overlap nothing.
double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

struct Detection {
  int triplet = 0;
  double confidence = 0.0;
  // Recognition-only outputs carry no box.
  std::optional<BoundingBox> instrument_box;
  std::optional<BoundingBox> target_box;
};

struct GroundTruthBox {
  int triplet = 0;
  BoundingBox instrument_box;
  std::optional<BoundingBox> target_box;
};

// Which identity a prediction must share with a groundtruth box.
enum class MatchKind { kInstrument, kTriplet };

struct MatchOptions {
  MatchKind kind = MatchKind::kTriplet;
  double theta = 0.5;
  // Also require target-box IoU >= theta.
  bool require_target = false;
};

struct Match {
  std::size_t prediction = 0;
  std::size_t groundtruth = 0;
  double iou = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

// Matches sorted by prediction index; unmatched lists ascending.
struct MatchResult {
  std::vector<Match> matches;
  std::vector<std::size_t> unmatched_predictions;
  std::vector<std::size_t> unmatched_groundtruth;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

// Identity of a triplet id under the match kind (instrument id or triplet id).
int match_identity(const ComponentMap& map, int triplet, MatchKind kind);

// Greedy frame matching. Predictions are visited by descending confidence
// (ties in input order); each claims the still-unmatched groundtruth of the
// same identity with the highest instrument IoU >= theta (ties to the lower
// index). Box-less predictions never match.
MatchResult match_frame(const ComponentMap& map,
                        std::span<const Detection> predictions,
                        std::span<const GroundTruthBox> groundtruth,
                        const MatchOptions& options = {});

struct DetectionFrame {
  std::vector<Detection> predictions;
  std::vector<GroundTruthBox> groundtruth;
};
using DetectionVideo = std::vector<DetectionFrame>;

// Per-class TP/FP/FN tallies.
struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  // TP / (TP + FP), 0 when nothing was predicted.
  double precision() const noexcept;
  // TP / (TP + FN), 0 when there is no groundtruth.
  double recall() const noexcept;
};

enum class Aggregation { kPerVideo, kGlobal };

struct DetectionReport {
  APResult ap;
  // Summed over all videos, indexed by class id.
  std::vector<ClassCounts> counts;
};

// True when every groundtruth box carries a target box (and there is at
// least one box).
bool target_localization_supported(std::span<const DetectionVideo> videos);

// Detection AP. Per video, every frame is matched; matched predictions are
// TP, the rest FP, unmatched groundtruth FN. Predictions of a class are
// ranked by confidence across the video's frames and integrated as in
// average_precision, with recall normalized by the class's groundtruth
// count. kPerVideo averages each class over the videos where it is defined;
// kGlobal ranks all videos' predictions together.
//
// `mask` drops class ids from the mean (applied for MatchKind::kTriplet).
DetectionReport detection_ap(std::span<const DetectionVideo> videos,
                             const ComponentMap& map,
                             const MatchOptions& options = {},
                             Aggregation aggregation = Aggregation::kPerVideo,
                             const std::set<int>& mask = {});

}  // namespace ivt
