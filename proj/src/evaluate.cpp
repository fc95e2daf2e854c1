#include "ivteval/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "ivteval/error.hpp"
#include "ivteval/recognition.hpp"

namespace ivt {

Selection select_videos(const SplitManifest& manifest, std::optional<int> fold,
                        std::optional<std::string> partition) {
  if (fold.has_value() == partition.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "select exactly one of a fold or a partition");
  }
  Selection sel;
  sel.split = manifest.name;
  if (fold) {
    if (!manifest.is_cross_validation()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "split '" + manifest.name + "' has no folds");
    }
    sel.fold = fold;
    sel.partition = "fold" + std::to_string(*fold);
  } else {
    sel.partition = *partition;
  }
  const Partition* p = manifest.find(sel.partition);
  if (p == nullptr) {
    throw Error(ErrorCode::kUnknownName, "split '" + manifest.name +
                                             "' has no partition '" +
                                             sel.partition + "'");
  }
  sel.videos = p->videos;
  return sel;
}

double round4(double value) { return std::round(value * 1e4) / 1e4; }

namespace {

struct VideoPair {
  const VideoGroundTruth* gt;
  const VideoPredictions* pred;
};

std::vector<VideoPair> pair_videos(const GroundTruthSet& gt,
                                   const PredictionSet& pred,
                                   const Selection& selection) {
  std::vector<VideoPair> pairs;
  for (const std::string& video : selection.videos) {
    const auto g = gt.find(video);
    if (g == gt.end()) {
      throw Error(ErrorCode::kMissingVideo, "no groundtruth for " + video);
    }
    const auto p = pred.find(video);
    if (p == pred.end()) {
      throw Error(ErrorCode::kMissingVideo, "no predictions for " + video);
    }
    const auto& gf = g->second.frames;
    const auto& pf = p->second.frames;
    bool same = gf.size() == pf.size();
    for (std::size_t i = 0; same && i < gf.size(); ++i) {
      same = gf[i].index == pf[i].index;
    }
    if (!same) {
      throw Error(ErrorCode::kFrameMismatch,
                  video + ": prediction frames do not match groundtruth (" +
                      std::to_string(pf.size()) + " vs " +
                      std::to_string(gf.size()) + " frames)");
    }
    pairs.push_back({&g->second, &p->second});
  }
  return pairs;
}

std::vector<DetectionVideo> detection_videos(std::span<const VideoPair> pairs) {
  std::vector<DetectionVideo> videos;
  for (const VideoPair& pair : pairs) {
    DetectionVideo video;
    for (std::size_t i = 0; i < pair.gt->frames.size(); ++i) {
      DetectionFrame frame;
      if (pair.gt->frames[i].boxes) frame.groundtruth = *pair.gt->frames[i].boxes;
      if (pair.pred->frames[i].detections) {
        frame.predictions = *pair.pred->frames[i].detections;
      }
      video.push_back(std::move(frame));
    }
    videos.push_back(std::move(video));
  }
  return videos;
}

}  // namespace

EvaluationReport evaluate(const ComponentMap& map, const GroundTruthSet& gt,
                          const PredictionSet& pred, const Selection& selection,
                          const EvaluationOptions& options) {
  const std::vector<VideoPair> pairs = pair_videos(gt, pred, selection);
  EvaluationReport report;
  report.selection = selection;
  report.options = options;

  if (options.recognition) {
    Recognition acc(map, options.class_mask);
    for (const VideoPair& pair : pairs) {
      for (std::size_t i = 0; i < pair.gt->frames.size(); ++i) {
        const FrameScores& scores = pair.pred->frames[i].scores;
        if (scores.empty()) {
          throw Error(ErrorCode::kMalformed,
                      pair.pred->video + " frame " +
                          std::to_string(pair.pred->frames[i].index) +
                          ": no scores for recognition");
        }
        acc.update(pair.gt->frames[i].labels, scores);
      }
      acc.video_end();
    }
    for (ComponentKind kind : kAllKinds) {
      if (std::find(options.components.begin(), options.components.end(),
                    kind) == options.components.end()) {
        continue;
      }
      report.recognition[kind] = options.aggregation == Aggregation::kGlobal
                                     ? acc.compute_global_ap(kind)
                                     : (acc.finished().empty()
                                            ? acc.compute_global_ap(kind)
                                            : acc.compute_video_ap(kind));
    }
  }

  if (options.detection || options.tas) {
    const std::vector<DetectionVideo> videos = detection_videos(pairs);
    report.target_localization = target_localization_supported(videos);
    if (options.detection) {
      MatchOptions match{MatchKind::kInstrument, options.theta, false};
      report.instrument_detection =
          detection_ap(videos, map, match, options.aggregation);
      match.kind = MatchKind::kTriplet;
      match.require_target = options.require_target;
      report.triplet_detection = detection_ap(videos, map, match,
                                              options.aggregation,
                                              options.class_mask);
    }
    if (options.tas) {
      TasCounts counts;
      for (const DetectionVideo& video : videos) {
        for (const DetectionFrame& frame : video) {
          counts += classify_associations(frame.predictions, frame.groundtruth,
                                          options.theta)
                        .counts;
        }
      }
      report.tas = tas_percentages(counts);
    }
  }
  return report;
}

namespace {

Json optional_number(const std::optional<double>& v) {
  return v ? Json(round4(*v)) : Json(nullptr);
}

Json ap_json(const APResult& r) {
  Json per_class = Json::array();
  for (const auto& v : r.per_class) per_class.push_back(optional_number(v));
  return {{"mAP", optional_number(r.mean)},
          {"defined_count", r.defined_count},
          {"per_class", std::move(per_class)}};
}

Json detection_json(const DetectionReport& r) {
  Json out = ap_json(r.ap);
  Json counts = Json::array();
  for (const ClassCounts& c : r.counts) {
    counts.push_back({{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}});
  }
  out["counts"] = std::move(counts);
  return out;
}

std::optional<double> read_optional(const Json& v) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw Error(ErrorCode::kMalformed, "report: bad number");
  return v.get<double>();
}

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::kMalformed,
                std::string("report: missing \"") + key + "\"");
  }
  return obj.at(key);
}

APResult ap_from_json(const Json& doc) {
  APResult r;
  for (const Json& v : field(doc, "per_class")) {
    r.per_class.push_back(read_optional(v));
  }
  r.mean = read_optional(field(doc, "mAP"));
  r.defined_count = field(doc, "defined_count").get<int>();
  return r;
}

DetectionReport detection_from_json(const Json& doc) {
  DetectionReport r;
  r.ap = ap_from_json(doc);
  for (const Json& c : field(doc, "counts")) {
    r.counts.push_back({field(c, "tp").get<std::size_t>(),
                        field(c, "fp").get<std::size_t>(),
                        field(c, "fn").get<std::size_t>()});
  }
  return r;
}

}  // namespace

Json report_to_json(const EvaluationReport& report) {
  Json doc;
  doc["tool"] = report.tool;
  doc["version"] = report.version;
  doc["split"] = report.selection.split;
  doc["partition"] = report.selection.partition;
  doc["fold"] = report.selection.fold ? Json(*report.selection.fold)
                                      : Json(nullptr);
  doc["videos"] = report.selection.videos;

  Json components = Json::array();
  for (ComponentKind k : report.options.components) {
    components.push_back(std::string(to_string(k)));
  }
  doc["options"] = {
      {"theta", report.options.theta},
      {"mask", std::vector<int>(report.options.class_mask.begin(),
                                report.options.class_mask.end())},
      {"components", std::move(components)},
      {"aggregation", report.options.aggregation == Aggregation::kGlobal
                          ? "global"
                          : "video"},
      {"recognition", report.options.recognition},
      {"detection", report.options.detection},
      {"tas", report.options.tas},
      {"require_target", report.options.require_target},
  };

  if (report.options.recognition) {
    Json rec = Json::object();
    for (ComponentKind k : kAllKinds) {
      const auto it = report.recognition.find(k);
      if (it != report.recognition.end()) {
        rec[std::string(to_string(k))] = ap_json(it->second);
      }
    }
    doc["recognition"] = std::move(rec);
  }
  if (report.instrument_detection || report.triplet_detection) {
    Json det = Json::object();
    if (report.instrument_detection) {
      det["instrument"] = detection_json(*report.instrument_detection);
    }
    if (report.triplet_detection) {
      det["triplet"] = detection_json(*report.triplet_detection);
    }
    doc["detection"] = std::move(det);
  }
  if (report.target_localization) {
    doc["target_localization"] = *report.target_localization;
  }
  if (report.tas) {
    Json counts = Json::object();
    Json percentages = Json::object();
    for (TasCategory c : kAllTasCategories) {
      const std::string key(to_string(c));
      counts[key] = report.tas->counts[c];
      percentages[key] = round4(report.tas->percentage(c));
    }
    doc["tas"] = {{"counts", std::move(counts)},
                  {"percentages", std::move(percentages)}};
  }
  return doc;
}

EvaluationReport report_from_json(const Json& doc) {
  try {
    EvaluationReport r;
    r.tool = field(doc, "tool").get<std::string>();
    r.version = field(doc, "version").get<std::string>();
    r.selection.split = field(doc, "split").get<std::string>();
    r.selection.partition = field(doc, "partition").get<std::string>();
    if (!field(doc, "fold").is_null()) {
      r.selection.fold = field(doc, "fold").get<int>();
    }
    r.selection.videos = field(doc, "videos").get<std::vector<std::string>>();

    const Json& opts = field(doc, "options");
    r.options.theta = field(opts, "theta").get<double>();
    for (int id : field(opts, "mask").get<std::vector<int>>()) {
      r.options.class_mask.insert(id);
    }
    r.options.components.clear();
    for (const Json& c : field(opts, "components")) {
      const auto kind = parse_component(c.get<std::string>());
      if (!kind) throw Error(ErrorCode::kMalformed, "report: bad component");
      r.options.components.push_back(*kind);
    }
    r.options.aggregation = field(opts, "aggregation").get<std::string>() ==
                                    "global"
                                ? Aggregation::kGlobal
                                : Aggregation::kPerVideo;
    r.options.recognition = field(opts, "recognition").get<bool>();
    r.options.detection = field(opts, "detection").get<bool>();
    r.options.tas = field(opts, "tas").get<bool>();
    r.options.require_target = field(opts, "require_target").get<bool>();

    if (doc.contains("recognition")) {
      const Json& rec = doc.at("recognition");
      for (auto it = rec.begin(); it != rec.end(); ++it) {
        const auto kind = parse_component(it.key());
        if (!kind) throw Error(ErrorCode::kMalformed, "report: bad component");
        r.recognition[*kind] = ap_from_json(it.value());
      }
    }
    if (doc.contains("detection")) {
      const Json& det = doc.at("detection");
      if (det.contains("instrument")) {
        r.instrument_detection = detection_from_json(det.at("instrument"));
      }
      if (det.contains("triplet")) {
        r.triplet_detection = detection_from_json(det.at("triplet"));
      }
    }
    if (doc.contains("target_localization")) {
      r.target_localization = doc.at("target_localization").get<bool>();
    }
    if (doc.contains("tas")) {
      TasReport tas;
      const Json& counts = field(doc.at("tas"), "counts");
      const Json& pct = field(doc.at("tas"), "percentages");
      for (TasCategory c : kAllTasCategories) {
        const std::string key(to_string(c));
        tas.counts[c] = field(counts, key.c_str()).get<std::size_t>();
        tas.percentages[static_cast<std::size_t>(c)] =
            field(pct, key.c_str()).get<double>();
      }
      r.tas = tas;
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformed, std::string("report: ") + e.what());
  }
}

}  // namespace ivt
