#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "ivteval/average_precision.hpp"
#include "ivteval/disentangle.hpp"
#include "ivteval/label_space.hpp"

namespace ivt {

// Frames of one video, in arrival order.
struct VideoBuffer {
  std::vector<FrameLabels> labels;
  std::vector<FrameScores> scores;

  std::size_t size() const noexcept { return labels.size(); }
  bool empty() const noexcept { return labels.empty(); }
};

// Triplet-recognition accumulator.
//
// Lifecycle: update() appends frames to the current video, video_end() closes
// it, and the compute_* calls read back one of three aggregation levels:
//   compute_ap         frames in the current (open) buffer
//   compute_video_ap   per-class AP within each closed video, averaged over
//                      the videos where the class is defined
//   compute_global_ap  one ranking over all frames of all closed videos
// Component kinds other than IVT are derived with the max filter.
//
// The class mask holds triplet ids left out of IVT results (for example the
// null classes 94-99 under the challenge protocol).
//
// Not thread-safe; merge() combines accumulators filled in parallel.
class Recognition {
 public:
  explicit Recognition(ComponentMap map, std::set<int> class_mask = {});

  void update(std::span<const FrameLabels> targets,
              std::span<const FrameScores> predictions);
  void update(const FrameLabels& target, const FrameScores& prediction);
  void video_end();

  // Clears the open buffer only.
  void reset();
  // Clears closed videos only.
  void reset_video();
  void reset_global();

  APResult compute_ap(ComponentKind kind) const;
  APResult compute_video_ap(ComponentKind kind) const;
  APResult compute_global_ap(ComponentKind kind) const;

  // Fraction of frames with at least one positive triplet where a positive
  // is among the k best-scored triplets (ties favour lower ids). Counts
  // closed videos and the open buffer.
  double topk(int k) const;
  // The k unmasked triplet ids with the best compute_video_ap(IVT) values;
  // undefined classes rank last, ties favour lower ids.
  std::vector<int> top_class(int k) const;

  // Appends other's closed videos after this one's. Maps must agree.
  void merge(const Recognition& other);

  const ComponentMap& map() const noexcept { return map_; }
  const std::set<int>& class_mask() const noexcept { return mask_; }
  void set_class_mask(std::set<int> mask);
  const VideoBuffer& current() const noexcept { return current_; }
  const std::vector<VideoBuffer>& finished() const noexcept {
    return finished_;
  }

 private:
  std::vector<std::optional<double>> per_class_ap(
      std::span<const VideoBuffer* const> pool, ComponentKind kind) const;
  const std::set<int>& mask_for(ComponentKind kind) const;

  ComponentMap map_;
  std::set<int> mask_;
  VideoBuffer current_;
  std::vector<VideoBuffer> finished_;
};

}  // namespace ivt
