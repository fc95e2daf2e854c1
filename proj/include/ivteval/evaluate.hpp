#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ivteval/association.hpp"
#include "ivteval/average_precision.hpp"
#include "ivteval/detection.hpp"
#include "ivteval/io.hpp"
#include "ivteval/label_space.hpp"
#include "ivteval/splits.hpp"

namespace ivt {

inline constexpr const char* kToolName = "ivteval";
inline constexpr const char* kToolVersion = "1.0.0";

// Videos picked out of a manifest for one evaluation run.
struct Selection {
  std::string split;
  std::string partition;
  std::optional<int> fold;
  std::vector<std::string> videos;
};

// fold N selects partition "foldN" of a cross-validation manifest;
// otherwise `partition` is looked up by name. Throws kUnknownName when the
// partition does not exist and kInvalidArgument when both or neither of
// fold/partition are given.
Selection select_videos(const SplitManifest& manifest, std::optional<int> fold,
                        std::optional<std::string> partition);

struct EvaluationOptions {
  double theta = 0.5;
  std::set<int> class_mask;
  std::vector<ComponentKind> components{kAllKinds.begin(), kAllKinds.end()};
  Aggregation aggregation = Aggregation::kPerVideo;
  bool recognition = true;
  bool detection = false;
  bool tas = false;
  bool require_target = false;
};

struct EvaluationReport {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  Selection selection;
  EvaluationOptions options;
  // Keyed in kAllKinds order.
  std::map<ComponentKind, APResult> recognition;
  std::optional<DetectionReport> instrument_detection;
  std::optional<DetectionReport> triplet_detection;
  std::optional<bool> target_localization;
  std::optional<TasReport> tas;
};

using GroundTruthSet = std::map<std::string, VideoGroundTruth>;
using PredictionSet = std::map<std::string, VideoPredictions>;

// Runs the recognition accumulator over the selected videos (update per
// frame, video_end per video) and the optional detection and association
// metrics. Every selected video must be present in both sets with the same
// frame indices.
EvaluationReport evaluate(const ComponentMap& map, const GroundTruthSet& gt,
                          const PredictionSet& pred, const Selection& selection,
                          const EvaluationOptions& options);

// Report serialization. Values are rounded to four decimals; undefined
// values are null.
Json report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const Json& doc);

// Rounds to four decimals, the precision reports carry.
double round4(double value);

}  // namespace ivt
