#include "ivteval/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ivteval/error.hpp"

namespace ivt {

bool is_valid(const BoundingBox& box) noexcept {
  const bool finite = std::isfinite(box.x) && std::isfinite(box.y) &&
                      std::isfinite(box.w) && std::isfinite(box.h);
  return finite && box.w >= 0.0 && box.h >= 0.0 && box.x >= -kBoxTolerance &&
         box.y >= -kBoxTolerance && box.x + box.w <= 1.0 + kBoxTolerance &&
         box.y + box.h <= 1.0 + kBoxTolerance;
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) -
                                      std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) -
                                      std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

int match_identity(const ComponentMap& map, int triplet, MatchKind kind) {
  return map.component_of(triplet, kind == MatchKind::kInstrument
                                       ? ComponentKind::kI
                                       : ComponentKind::kIVT);
}

namespace {

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "theta must lie in [0, 1]");
  }
}

std::vector<std::size_t> confidence_order(
    std::span<const Detection> predictions) {
  std::vector<double> conf;
  conf.reserve(predictions.size());
  for (const Detection& d : predictions) conf.push_back(d.confidence);
  return rank_order(conf);
}

}  // namespace

MatchResult match_frame(const ComponentMap& map,
                        std::span<const Detection> predictions,
                        std::span<const GroundTruthBox> groundtruth,
                        const MatchOptions& options) {
  check_theta(options.theta);
  if (options.require_target) {
    const bool preds_ok =
        std::all_of(predictions.begin(), predictions.end(),
                    [](const Detection& d) { return d.target_box.has_value(); });
    const bool gts_ok = std::all_of(
        groundtruth.begin(), groundtruth.end(),
        [](const GroundTruthBox& g) { return g.target_box.has_value(); });
    if (!preds_ok || !gts_ok) {
      throw Error(ErrorCode::kUnsupported,
                  "target matching requested but target boxes are missing");
    }
  }

  std::vector<int> gt_identity;
  gt_identity.reserve(groundtruth.size());
  for (const GroundTruthBox& g : groundtruth) {
    gt_identity.push_back(match_identity(map, g.triplet, options.kind));
  }

  std::vector<bool> gt_taken(groundtruth.size(), false);
  std::vector<bool> pred_matched(predictions.size(), false);
  MatchResult result;
  for (std::size_t p : confidence_order(predictions)) {
    const Detection& pred = predictions[p];
    const int identity = match_identity(map, pred.triplet, options.kind);
    if (!pred.instrument_box) continue;
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < groundtruth.size(); ++g) {
      if (gt_taken[g] || gt_identity[g] != identity) continue;
      const double overlap = iou(*pred.instrument_box,
                                 groundtruth[g].instrument_box);
      if (overlap < options.theta) continue;
      if (options.require_target &&
          iou(*pred.target_box, *groundtruth[g].target_box) < options.theta) {
        continue;
      }
      if (overlap > best_iou) {
        best_iou = overlap;
        best = g;
      }
    }
    if (best) {
      gt_taken[*best] = true;
      pred_matched[p] = true;
      result.matches.push_back({p, *best, best_iou});
    }
  }

  std::sort(result.matches.begin(), result.matches.end(),
            [](const Match& a, const Match& b) {
              return a.prediction < b.prediction;
            });
  for (std::size_t p = 0; p < predictions.size(); ++p) {
    if (!pred_matched[p]) result.unmatched_predictions.push_back(p);
  }
  for (std::size_t g = 0; g < groundtruth.size(); ++g) {
    if (!gt_taken[g]) result.unmatched_groundtruth.push_back(g);
  }
  return result;
}

double ClassCounts::precision() const noexcept {
  const std::size_t predicted = tp + fp;
  return predicted == 0 ? 0.0
                        : static_cast<double>(tp) /
                              static_cast<double>(predicted);
}

double ClassCounts::recall() const noexcept {
  const std::size_t actual = tp + fn;
  return actual == 0 ? 0.0
                     : static_cast<double>(tp) / static_cast<double>(actual);
}

bool target_localization_supported(std::span<const DetectionVideo> videos) {
  bool any = false;
  for (const DetectionVideo& video : videos) {
    for (const DetectionFrame& frame : video) {
      for (const GroundTruthBox& g : frame.groundtruth) {
        if (!g.target_box) return false;
        any = true;
      }
    }
  }
  return any;
}

namespace {

// Scored predictions of one class, in arrival order, plus its groundtruth
// count.
struct ClassPool {
  std::vector<double> confidence;
  std::vector<std::uint8_t> is_tp;
  std::size_t n_groundtruth = 0;

  std::optional<double> ap() const {
    std::vector<std::uint8_t> hits;
    hits.reserve(is_tp.size());
    for (std::size_t idx : rank_order(confidence)) hits.push_back(is_tp[idx]);
    return ranked_average_precision(hits, n_groundtruth);
  }
};

void accumulate_video(const DetectionVideo& video, const ComponentMap& map,
                      const MatchOptions& options, std::vector<ClassPool>& pools,
                      std::vector<ClassCounts>& counts) {
  for (const DetectionFrame& frame : video) {
    const MatchResult match =
        match_frame(map, frame.predictions, frame.groundtruth, options);
    std::vector<std::uint8_t> tp(frame.predictions.size(), 0);
    for (const Match& m : match.matches) tp[m.prediction] = 1;
    for (std::size_t p = 0; p < frame.predictions.size(); ++p) {
      const int c =
          match_identity(map, frame.predictions[p].triplet, options.kind);
      pools[c].confidence.push_back(frame.predictions[p].confidence);
      pools[c].is_tp.push_back(tp[p]);
      if (tp[p]) {
        ++counts[c].tp;
      } else {
        ++counts[c].fp;
      }
    }
    for (std::size_t g = 0; g < frame.groundtruth.size(); ++g) {
      const int c =
          match_identity(map, frame.groundtruth[g].triplet, options.kind);
      ++pools[c].n_groundtruth;
    }
    for (std::size_t g : match.unmatched_groundtruth) {
      ++counts[match_identity(map, frame.groundtruth[g].triplet, options.kind)]
            .fn;
    }
  }
}

}  // namespace

DetectionReport detection_ap(std::span<const DetectionVideo> videos,
                             const ComponentMap& map,
                             const MatchOptions& options,
                             Aggregation aggregation,
                             const std::set<int>& mask) {
  check_theta(options.theta);
  if (options.require_target && !target_localization_supported(videos)) {
    throw Error(ErrorCode::kUnsupported,
                "groundtruth has no target boxes; target matching unavailable");
  }
  const std::size_t n_classes = static_cast<std::size_t>(
      options.kind == MatchKind::kInstrument
          ? map.component_size(ComponentKind::kI)
          : map.component_size(ComponentKind::kIVT));
  const std::set<int> no_mask;
  const std::set<int>& class_mask =
      options.kind == MatchKind::kTriplet ? mask : no_mask;

  DetectionReport report;
  report.counts.assign(n_classes, ClassCounts{});
  std::vector<std::optional<double>> per_class(n_classes);

  if (aggregation == Aggregation::kGlobal) {
    std::vector<ClassPool> pools(n_classes);
    for (const DetectionVideo& video : videos) {
      accumulate_video(video, map, options, pools, report.counts);
    }
    for (std::size_t c = 0; c < n_classes; ++c) per_class[c] = pools[c].ap();
  } else {
    std::vector<double> sums(n_classes, 0.0);
    std::vector<int> defined(n_classes, 0);
    for (const DetectionVideo& video : videos) {
      std::vector<ClassPool> pools(n_classes);
      accumulate_video(video, map, options, pools, report.counts);
      for (std::size_t c = 0; c < n_classes; ++c) {
        if (const auto ap = pools[c].ap()) {
          sums[c] += *ap;
          ++defined[c];
        }
      }
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (defined[c] > 0) per_class[c] = sums[c] / defined[c];
    }
  }
  report.ap = summarize_ap(std::move(per_class), class_mask);
  return report;
}

}  // namespace ivt
