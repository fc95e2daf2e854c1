#include "ivteval/disentangle.hpp"

#include <algorithm>
#include <string>

#include "ivteval/error.hpp"

namespace ivt {
namespace {

void check_width(const ComponentMap& map, std::size_t width) {
  if (width != static_cast<std::size_t>(map.n_triplets())) {
    throw Error(ErrorCode::kShapeMismatch,
                "frame vector has " + std::to_string(width) +
                    " entries, map has " + std::to_string(map.n_triplets()) +
                    " triplets");
  }
}

}  // namespace

std::vector<double> disentangle_scores(const ComponentMap& map,
                                       std::span<const double> scores,
                                       ComponentKind kind) {
  check_width(map, scores.size());
  if (kind == ComponentKind::kIVT) return {scores.begin(), scores.end()};
  std::vector<double> out(map.component_size(kind), 0.0);
  for (const TripletRow& r : map.rows()) {
    double& slot = out[map.component_of(r.triplet, kind)];
    slot = std::max(slot, scores[r.triplet]);
  }
  return out;
}

std::vector<std::uint8_t> disentangle_labels(
    const ComponentMap& map, std::span<const std::uint8_t> labels,
    ComponentKind kind) {
  check_width(map, labels.size());
  if (kind == ComponentKind::kIVT) return {labels.begin(), labels.end()};
  std::vector<std::uint8_t> out(map.component_size(kind), 0);
  for (const TripletRow& r : map.rows()) {
    if (labels[r.triplet] != 0) out[map.component_of(r.triplet, kind)] = 1;
  }
  return out;
}

std::vector<FrameScores> disentangle_scores(const ComponentMap& map,
                                            std::span<const FrameScores> batch,
                                            ComponentKind kind) {
  std::vector<FrameScores> out;
  out.reserve(batch.size());
  for (const FrameScores& frame : batch) {
    out.push_back(disentangle_scores(map, std::span<const double>(frame), kind));
  }
  return out;
}

std::vector<FrameLabels> disentangle_labels(const ComponentMap& map,
                                            std::span<const FrameLabels> batch,
                                            ComponentKind kind) {
  std::vector<FrameLabels> out;
  out.reserve(batch.size());
  for (const FrameLabels& frame : batch) {
    out.push_back(
        disentangle_labels(map, std::span<const std::uint8_t>(frame), kind));
  }
  return out;
}

}  // namespace ivt
