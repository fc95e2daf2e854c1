#include "ivteval/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ivteval/error.hpp"

namespace ivt {
namespace {

const std::set<int> kNoMask;

// Triplet ids grouped by their kind-component id.
std::vector<std::vector<int>> component_groups(const ComponentMap& map,
                                               ComponentKind kind) {
  std::vector<std::vector<int>> groups(map.component_size(kind));
  for (const TripletRow& r : map.rows()) {
    groups[map.component_of(r.triplet, kind)].push_back(r.triplet);
  }
  return groups;
}

}  // namespace

Recognition::Recognition(ComponentMap map, std::set<int> class_mask)
    : map_(std::move(map)) {
  set_class_mask(std::move(class_mask));
}

void Recognition::set_class_mask(std::set<int> mask) {
  for (int id : mask) {
    if (id < 0 || id >= map_.n_triplets()) {
      throw Error(ErrorCode::kOutOfRange,
                  "masked class " + std::to_string(id) + " out of range");
    }
  }
  mask_ = std::move(mask);
}

void Recognition::update(std::span<const FrameLabels> targets,
                         std::span<const FrameScores> predictions) {
  if (targets.size() != predictions.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "targets have " + std::to_string(targets.size()) +
                    " frames, predictions " +
                    std::to_string(predictions.size()));
  }
  const auto width = static_cast<std::size_t>(map_.n_triplets());
  // Validate the whole batch before touching the buffer.
  for (std::size_t f = 0; f < targets.size(); ++f) {
    if (targets[f].size() != width || predictions[f].size() != width) {
      throw Error(ErrorCode::kShapeMismatch,
                  "frame " + std::to_string(f) + " has widths " +
                      std::to_string(targets[f].size()) + "/" +
                      std::to_string(predictions[f].size()) + ", expected " +
                      std::to_string(width));
    }
    for (std::uint8_t v : targets[f]) {
      if (v > 1) throw Error(ErrorCode::kNonBinary, "target is not binary");
    }
    for (double p : predictions[f]) {
      if (!std::isfinite(p)) {
        throw Error(ErrorCode::kNonFinite, "non-finite prediction");
      }
    }
  }
  current_.labels.insert(current_.labels.end(), targets.begin(),
                         targets.end());
  current_.scores.insert(current_.scores.end(), predictions.begin(),
                         predictions.end());
}

void Recognition::update(const FrameLabels& target,
                         const FrameScores& prediction) {
  update(std::span<const FrameLabels>(&target, 1),
         std::span<const FrameScores>(&prediction, 1));
}

void Recognition::video_end() {
  if (current_.empty()) return;
  finished_.push_back(std::move(current_));
  current_ = VideoBuffer{};
}

void Recognition::reset() { current_ = VideoBuffer{}; }

void Recognition::reset_video() { finished_.clear(); }

void Recognition::reset_global() {
  reset();
  reset_video();
}

const std::set<int>& Recognition::mask_for(ComponentKind kind) const {
  return kind == ComponentKind::kIVT ? mask_ : kNoMask;
}

std::vector<std::optional<double>> Recognition::per_class_ap(
    std::span<const VideoBuffer* const> pool, ComponentKind kind) const {
  const auto groups = component_groups(map_, kind);
  const std::set<int>& mask = mask_for(kind);

  std::size_t n_frames = 0;
  for (const VideoBuffer* video : pool) n_frames += video->size();

  std::vector<std::optional<double>> out(groups.size());
  std::vector<RankedSample> samples;
  samples.reserve(n_frames);
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (mask.contains(static_cast<int>(c)) || groups[c].empty()) continue;
    samples.clear();
    for (const VideoBuffer* video : pool) {
      for (std::size_t f = 0; f < video->size(); ++f) {
        RankedSample s;
        for (int t : groups[c]) {
          s.score = std::max(s.score, video->scores[f][t]);
          s.is_positive = s.is_positive || video->labels[f][t] != 0;
        }
        samples.push_back(s);
      }
    }
    out[c] = average_precision(samples);
  }
  return out;
}

APResult Recognition::compute_ap(ComponentKind kind) const {
  const VideoBuffer* pool[] = {&current_};
  return summarize_ap(per_class_ap(pool, kind), mask_for(kind));
}

APResult Recognition::compute_video_ap(ComponentKind kind) const {
  if (finished_.empty()) {
    throw Error(ErrorCode::kNoData,
                "compute_video_ap needs at least one closed video");
  }
  const auto n_classes = static_cast<std::size_t>(map_.component_size(kind));
  std::vector<double> sums(n_classes, 0.0);
  std::vector<int> counts(n_classes, 0);
  for (const VideoBuffer& video : finished_) {
    const VideoBuffer* pool[] = {&video};
    const auto aps = per_class_ap(pool, kind);
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (!aps[c]) continue;
      sums[c] += *aps[c];
      ++counts[c];
    }
  }
  std::vector<std::optional<double>> per_class(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] > 0) per_class[c] = sums[c] / counts[c];
  }
  return summarize_ap(std::move(per_class), mask_for(kind));
}

APResult Recognition::compute_global_ap(ComponentKind kind) const {
  std::vector<const VideoBuffer*> pool;
  pool.reserve(finished_.size());
  for (const VideoBuffer& video : finished_) pool.push_back(&video);
  return summarize_ap(per_class_ap(pool, kind), mask_for(kind));
}

double Recognition::topk(int k) const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "topk needs k >= 1");
  const auto width = static_cast<std::size_t>(map_.n_triplets());
  const auto keep = std::min(static_cast<std::size_t>(k), width);

  std::size_t frames_with_positive = 0;
  std::size_t hits = 0;
  std::vector<int> order(width);
  auto visit = [&](const VideoBuffer& video) {
    for (std::size_t f = 0; f < video.size(); ++f) {
      const FrameLabels& labels = video.labels[f];
      if (std::none_of(labels.begin(), labels.end(),
                       [](std::uint8_t v) { return v != 0; })) {
        continue;
      }
      ++frames_with_positive;
      const FrameScores& scores = video.scores[f];
      std::iota(order.begin(), order.end(), 0);
      std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                        [&](int a, int b) {
                          if (scores[a] != scores[b]) {
                            return scores[a] > scores[b];
                          }
                          return a < b;
                        });
      if (std::any_of(order.begin(), order.begin() + keep,
                      [&](int c) { return labels[c] != 0; })) {
        ++hits;
      }
    }
  };
  for (const VideoBuffer& video : finished_) visit(video);
  visit(current_);
  if (frames_with_positive == 0) return 0.0;
  return static_cast<double>(hits) / static_cast<double>(frames_with_positive);
}

std::vector<int> Recognition::top_class(int k) const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "top_class needs k >= 1");
  const int unmasked = map_.n_triplets() - static_cast<int>(mask_.size());
  if (k > unmasked) {
    throw Error(ErrorCode::kOutOfRange,
                "top_class k=" + std::to_string(k) + " exceeds " +
                    std::to_string(unmasked) + " unmasked classes");
  }
  const APResult result = compute_video_ap(ComponentKind::kIVT);
  std::vector<int> ids;
  for (int c = 0; c < map_.n_triplets(); ++c) {
    if (!mask_.contains(c)) ids.push_back(c);
  }
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    const auto& ap_a = result.per_class[a];
    const auto& ap_b = result.per_class[b];
    if (ap_a.has_value() != ap_b.has_value()) return ap_a.has_value();
    if (ap_a && *ap_a != *ap_b) return *ap_a > *ap_b;
    return false;
  });
  ids.resize(static_cast<std::size_t>(k));
  return ids;
}

void Recognition::merge(const Recognition& other) {
  if (!(other.map_ == map_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot merge accumulators over different maps");
  }
  finished_.insert(finished_.end(), other.finished_.begin(),
                   other.finished_.end());
}

}  // namespace ivt
