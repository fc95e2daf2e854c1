#include "ivteval/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ivteval/error.hpp"

namespace ivt {
namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformed, what);
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    malformed(where + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

int as_int(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) malformed(where + ": expected an integer");
  return v.get<int>();
}

double as_number(const Json& v, const std::string& where) {
  if (!v.is_number()) malformed(where + ": expected a number");
  return v.get<double>();
}

int parse_frame_key(const std::string& key, const std::string& video) {
  int index = -1;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
  const bool canonical = ec == std::errc() && ptr == key.data() + key.size() &&
                         index >= 0 && std::to_string(index) == key;
  if (!canonical) malformed(video + ": bad frame key \"" + key + "\"");
  return index;
}

int checked_triplet(const Json& v, const ComponentMap& map,
                    const std::string& where) {
  const int id = as_int(v, where);
  if (id < 0 || id >= map.n_triplets()) {
    throw Error(ErrorCode::kOutOfRange,
                where + ": triplet id " + std::to_string(id) + " out of range");
  }
  return id;
}

BoundingBox parse_box(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) {
    malformed(where + ": box must be [x, y, w, h]");
  }
  BoundingBox box{as_number(v[0], where), as_number(v[1], where),
                  as_number(v[2], where), as_number(v[3], where)};
  if (!is_valid(box)) {
    throw Error(ErrorCode::kOutOfRange, where + ": box outside the unit square");
  }
  return box;
}

std::optional<BoundingBox> parse_optional_box(const Json& obj, const char* key,
                                              const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return parse_box(obj.at(key), where);
}

Json box_json(const BoundingBox& b) { return Json::array({b.x, b.y, b.w, b.h}); }

Json optional_box_json(const std::optional<BoundingBox>& b) {
  return b ? box_json(*b) : Json(nullptr);
}

std::string parse_envelope(const Json& doc, const ComponentMap& map) {
  if (!doc.is_object()) malformed("document is not an object");
  const Json& video = member(doc, "video", "document");
  if (!video.is_string()) malformed("document: \"video\" must be a string");
  const std::string name = video.get<std::string>();
  const int n = as_int(member(doc, "num_triplet_classes", name), name);
  if (n != map.n_triplets()) {
    throw Error(ErrorCode::kShapeMismatch,
                name + ": num_triplet_classes " + std::to_string(n) +
                    " does not match the map's " +
                    std::to_string(map.n_triplets()));
  }
  if (!member(doc, "frames", name).is_object()) {
    malformed(name + ": \"frames\" must be an object");
  }
  return name;
}

// Frame entries sorted by numeric index.
std::vector<std::pair<int, const Json*>> sorted_frames(const Json& frames,
                                                       const std::string& video) {
  std::vector<std::pair<int, const Json*>> out;
  for (auto it = frames.begin(); it != frames.end(); ++it) {
    if (!it.value().is_object()) malformed(video + ": frame must be an object");
    out.emplace_back(parse_frame_key(it.key(), video), &it.value());
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].first == out[i - 1].first) {
      throw Error(ErrorCode::kFrameMismatch,
                  video + ": duplicate frame " + std::to_string(out[i].first));
    }
  }
  return out;
}

}  // namespace

VideoGroundTruth parse_groundtruth(const Json& doc, const ComponentMap& map) {
  VideoGroundTruth gt;
  gt.video = parse_envelope(doc, map);
  for (const auto& [index, frame] : sorted_frames(doc.at("frames"), gt.video)) {
    const std::string where = gt.video + " frame " + std::to_string(index);
    GroundTruthFrame f;
    f.index = index;
    f.labels.assign(static_cast<std::size_t>(map.n_triplets()), 0);
    const Json& triplets = member(*frame, "triplets", where);
    if (!triplets.is_array()) malformed(where + ": \"triplets\" must be a list");
    for (const Json& id : triplets) f.labels[checked_triplet(id, map, where)] = 1;
    if (frame->contains("boxes") && !frame->at("boxes").is_null()) {
      const Json& boxes = frame->at("boxes");
      if (!boxes.is_array()) malformed(where + ": \"boxes\" must be a list");
      f.boxes.emplace();
      for (const Json& b : boxes) {
        GroundTruthBox box;
        box.triplet = checked_triplet(member(b, "triplet", where), map, where);
        box.instrument_box = parse_box(member(b, "instrument_bbox", where), where);
        box.target_box = parse_optional_box(b, "target_bbox", where);
        f.boxes->push_back(box);
      }
    }
    gt.frames.push_back(std::move(f));
  }
  return gt;
}

VideoPredictions parse_predictions(const Json& doc, const ComponentMap& map) {
  VideoPredictions pred;
  pred.video = parse_envelope(doc, map);
  for (const auto& [index, frame] :
       sorted_frames(doc.at("frames"), pred.video)) {
    const std::string where = pred.video + " frame " + std::to_string(index);
    PredictionFrame f;
    f.index = index;
    if (frame->contains("scores") && !frame->at("scores").is_null()) {
      const Json& scores = frame->at("scores");
      if (!scores.is_array() ||
          scores.size() != static_cast<std::size_t>(map.n_triplets())) {
        throw Error(ErrorCode::kShapeMismatch,
                    where + ": \"scores\" must list " +
                        std::to_string(map.n_triplets()) + " values");
      }
      for (const Json& s : scores) {
        const double v = as_number(s, where);
        if (!(v >= 0.0 && v <= 1.0)) {
          throw Error(ErrorCode::kOutOfRange,
                      where + ": score outside [0, 1]");
        }
        f.scores.push_back(v);
      }
    }
    if (frame->contains("detections") && !frame->at("detections").is_null()) {
      const Json& dets = frame->at("detections");
      if (!dets.is_array()) malformed(where + ": \"detections\" must be a list");
      f.detections.emplace();
      for (const Json& d : dets) {
        Detection det;
        det.triplet = checked_triplet(member(d, "triplet", where), map, where);
        det.confidence = as_number(member(d, "score", where), where);
        if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
          throw Error(ErrorCode::kOutOfRange,
                      where + ": detection score outside [0, 1]");
        }
        det.instrument_box = parse_optional_box(d, "instrument_bbox", where);
        det.target_box = parse_optional_box(d, "target_bbox", where);
        f.detections->push_back(det);
      }
    }
    pred.frames.push_back(std::move(f));
  }
  return pred;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(path.string() + ": " + e.what());
  }
}

VideoGroundTruth read_groundtruth(const std::filesystem::path& path,
                                  const ComponentMap& map) {
  return parse_groundtruth(read_json(path), map);
}

VideoPredictions read_predictions(const std::filesystem::path& path,
                                  const ComponentMap& map) {
  return parse_predictions(read_json(path), map);
}

Json to_json(const VideoGroundTruth& gt, const ComponentMap& map) {
  Json frames = Json::object();
  for (const GroundTruthFrame& f : gt.frames) {
    Json frame;
    Json ids = Json::array();
    for (std::size_t t = 0; t < f.labels.size(); ++t) {
      if (f.labels[t]) ids.push_back(t);
    }
    frame["triplets"] = std::move(ids);
    if (f.boxes) {
      Json boxes = Json::array();
      for (const GroundTruthBox& b : *f.boxes) {
        boxes.push_back({{"triplet", b.triplet},
                         {"instrument_bbox", box_json(b.instrument_box)},
                         {"target_bbox", optional_box_json(b.target_box)}});
      }
      frame["boxes"] = std::move(boxes);
    }
    frames[std::to_string(f.index)] = std::move(frame);
  }
  return {{"video", gt.video},
          {"num_triplet_classes", map.n_triplets()},
          {"frames", std::move(frames)}};
}

Json to_json(const VideoPredictions& pred, const ComponentMap& map) {
  Json frames = Json::object();
  for (const PredictionFrame& f : pred.frames) {
    Json frame = Json::object();
    if (!f.scores.empty()) frame["scores"] = f.scores;
    if (f.detections) {
      Json dets = Json::array();
      for (const Detection& d : *f.detections) {
        dets.push_back({{"triplet", d.triplet},
                        {"score", d.confidence},
                        {"instrument_bbox", optional_box_json(d.instrument_box)},
                        {"target_bbox", optional_box_json(d.target_box)}});
      }
      frame["detections"] = std::move(dets);
    }
    frames[std::to_string(f.index)] = std::move(frame);
  }
  return {{"video", pred.video},
          {"num_triplet_classes", map.n_triplets()},
          {"frames", std::move(frames)}};
}

bool target_localization_supported(const VideoGroundTruth& gt) {
  bool any = false;
  for (const GroundTruthFrame& f : gt.frames) {
    if (!f.boxes) return false;
    for (const GroundTruthBox& b : *f.boxes) {
      if (!b.target_box) return false;
      any = true;
    }
  }
  return any;
}

Json manifest_to_json(const SplitManifest& manifest) {
  Json partitions = Json::object();
  for (const Partition& p : manifest.partitions) partitions[p.name] = p.videos;
  return {{"name", manifest.name}, {"partitions", std::move(partitions)}};
}

SplitManifest manifest_from_json(const Json& doc) {
  const Json& name = member(doc, "name", "manifest");
  if (!name.is_string()) malformed("manifest: \"name\" must be a string");
  const Json& partitions = member(doc, "partitions", "manifest");
  if (!partitions.is_object()) {
    malformed("manifest: \"partitions\" must be an object");
  }
  SplitManifest m{name.get<std::string>(), {}};
  for (auto it = partitions.begin(); it != partitions.end(); ++it) {
    if (!it.value().is_array()) {
      malformed("manifest: partition \"" + it.key() + "\" must be a list");
    }
    Partition p{it.key(), {}};
    for (const Json& v : it.value()) {
      if (!v.is_string()) malformed("manifest: video ids must be strings");
      p.videos.push_back(v.get<std::string>());
    }
    m.partitions.push_back(std::move(p));
  }
  return m;
}

SplitManifest read_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_json(path));
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace ivt
