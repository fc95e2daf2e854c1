#include "ivteval/association.hpp"

#include <algorithm>
#include <optional>

#include "ivteval/error.hpp"

namespace ivt {

std::string_view to_string(TasCategory category) {
  switch (category) {
    case TasCategory::kLM: return "LM";
    case TasCategory::kPLM: return "pLM";
    case TasCategory::kIDS: return "IDS";
    case TasCategory::kIDM: return "IDM";
    case TasCategory::kMIL: return "MIL";
    case TasCategory::kRFP: return "RFP";
    case TasCategory::kRFN: return "RFN";
  }
  return "?";
}

std::size_t TasCounts::total() const noexcept {
  std::size_t sum = 0;
  for (std::size_t v : values) sum += v;
  return sum;
}

TasCounts& TasCounts::operator+=(const TasCounts& other) noexcept {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

FrameAssociation classify_associations(
    std::span<const Detection> predictions,
    std::span<const GroundTruthBox> groundtruth, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "theta must lie in [0, 1]");
  }
  std::vector<double> conf;
  conf.reserve(predictions.size());
  for (const Detection& d : predictions) conf.push_back(d.confidence);
  const std::vector<std::size_t> order = rank_order(conf);

  std::vector<std::optional<TasCategory>> pred_label(predictions.size());
  std::vector<std::optional<TasCategory>> gt_label(groundtruth.size());
  FrameAssociation out;

  auto in_frame = [&](int triplet) {
    return std::any_of(groundtruth.begin(), groundtruth.end(),
                       [&](const GroundTruthBox& g) {
                         return g.triplet == triplet;
                       });
  };

  // One boxed stage: `eligible(pred, gt, overlap)` filters candidates.
  auto boxed_stage = [&](TasCategory category, auto eligible) {
    for (std::size_t p : order) {
      const Detection& pred = predictions[p];
      if (pred_label[p] || !pred.instrument_box) continue;
      std::optional<std::size_t> best;
      double best_iou = -1.0;
      for (std::size_t g = 0; g < groundtruth.size(); ++g) {
        if (gt_label[g]) continue;
        const double overlap =
            iou(*pred.instrument_box, groundtruth[g].instrument_box);
        if (!eligible(pred, groundtruth[g], overlap)) continue;
        if (overlap > best_iou) {
          best_iou = overlap;
          best = g;
        }
      }
      if (best) {
        pred_label[p] = category;
        gt_label[*best] = category;
        ++out.counts[category];
      }
    }
  };

  boxed_stage(TasCategory::kLM, [&](const Detection& d,
                                    const GroundTruthBox& g, double overlap) {
    return d.triplet == g.triplet && overlap >= theta;
  });
  boxed_stage(TasCategory::kPLM, [&](const Detection& d,
                                     const GroundTruthBox& g, double overlap) {
    return d.triplet == g.triplet && overlap > 0.0 && overlap < theta;
  });
  boxed_stage(TasCategory::kIDS, [&](const Detection& d,
                                     const GroundTruthBox& g, double overlap) {
    return d.triplet != g.triplet && overlap >= theta && in_frame(d.triplet);
  });
  boxed_stage(TasCategory::kIDM, [&](const Detection& d,
                                     const GroundTruthBox& g, double overlap) {
    return d.triplet != g.triplet && overlap >= theta && !in_frame(d.triplet);
  });

  for (std::size_t p : order) {
    const Detection& pred = predictions[p];
    if (pred_label[p] || pred.instrument_box) continue;
    for (std::size_t g = 0; g < groundtruth.size(); ++g) {
      if (gt_label[g] || groundtruth[g].triplet != pred.triplet) continue;
      pred_label[p] = TasCategory::kMIL;
      gt_label[g] = TasCategory::kMIL;
      ++out.counts[TasCategory::kMIL];
      break;
    }
  }

  out.prediction_labels.reserve(predictions.size());
  for (auto& label : pred_label) {
    if (!label) {
      label = TasCategory::kRFP;
      ++out.counts[TasCategory::kRFP];
    }
    out.prediction_labels.push_back(*label);
  }
  out.groundtruth_labels.reserve(groundtruth.size());
  for (auto& label : gt_label) {
    if (!label) {
      label = TasCategory::kRFN;
      ++out.counts[TasCategory::kRFN];
    }
    out.groundtruth_labels.push_back(*label);
  }
  return out;
}

TasReport tas_percentages(const TasCounts& counts) {
  TasReport report;
  report.counts = counts;
  const std::size_t total = counts.total();
  if (total == 0) return report;
  for (std::size_t i = 0; i < counts.values.size(); ++i) {
    report.percentages[i] = 100.0 * static_cast<double>(counts.values[i]) /
                            static_cast<double>(total);
  }
  return report;
}

}  // namespace ivt
