#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ivteval/detection.hpp"
#include "ivteval/disentangle.hpp"
#include "ivteval/label_space.hpp"
#include "ivteval/splits.hpp"

namespace ivt {

using Json = nlohmann::ordered_json;

struct GroundTruthFrame {
  int index = 0;
  FrameLabels labels;
  // Absent when the frame carries no spatial annotation.
  std::optional<std::vector<GroundTruthBox>> boxes;
};

struct VideoGroundTruth {
  std::string video;
  std::vector<GroundTruthFrame> frames;  // strictly increasing index
};

struct PredictionFrame {
  int index = 0;
  // Empty when the document has no "scores" for the frame.
  FrameScores scores;
  std::optional<std::vector<Detection>> detections;
};

struct VideoPredictions {
  std::string video;
  std::vector<PredictionFrame> frames;
};

// Groundtruth document:
//   {"video": "VID01", "num_triplet_classes": 100,
//    "frames": {"<idx>": {"triplets": [ids],
//                         "boxes": [{"triplet": id,
//                                    "instrument_bbox": [x, y, w, h],
//                                    "target_bbox": [x, y, w, h] | null}]}}}
// Prediction documents share the envelope, with per-frame "scores": [floats]
// and "detections": [{"triplet", "score", "instrument_bbox", "target_bbox"}].
// Frame keys are canonical decimal integers. Throws ivt::Error(kMalformed /
// kOutOfRange / kFrameMismatch) on invalid input.
VideoGroundTruth parse_groundtruth(const Json& doc, const ComponentMap& map);
VideoPredictions parse_predictions(const Json& doc, const ComponentMap& map);
VideoGroundTruth read_groundtruth(const std::filesystem::path& path,
                                  const ComponentMap& map);
VideoPredictions read_predictions(const std::filesystem::path& path,
                                  const ComponentMap& map);

Json to_json(const VideoGroundTruth& gt, const ComponentMap& map);
Json to_json(const VideoPredictions& pred, const ComponentMap& map);

// True when every frame has boxes and every box has a target box.
bool target_localization_supported(const VideoGroundTruth& gt);

// Manifest exchange: {"name": ..., "partitions": {"<name>": [ids]}}.
Json manifest_to_json(const SplitManifest& manifest);
SplitManifest manifest_from_json(const Json& doc);
SplitManifest read_manifest(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);
// Serialized with 2-space indentation and a trailing newline.
std::string dump_json(const Json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ivt
