#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ivteval/label_space.hpp"

namespace ivt {

// Per-frame triplet probabilities, one entry per triplet class.
using FrameScores = std::vector<double>;
// Per-frame multi-hot triplet labels (0 or 1).
using FrameLabels = std::vector<std::uint8_t>;

// Component scores via the per-group max filter: out[k] is the max score over
// all triplets whose kind-component is k, or 0 when no triplet maps to k.
// kIVT returns a copy of the input.
std::vector<double> disentangle_scores(const ComponentMap& map,
                                       std::span<const double> scores,
                                       ComponentKind kind);

// Component labels: out[k] is the OR of the labels in group k.
std::vector<std::uint8_t> disentangle_labels(const ComponentMap& map,
                                             std::span<const std::uint8_t> labels,
                                             ComponentKind kind);

// Frame-wise batch forms.
std::vector<FrameScores> disentangle_scores(const ComponentMap& map,
                                            std::span<const FrameScores> batch,
                                            ComponentKind kind);
std::vector<FrameLabels> disentangle_labels(const ComponentMap& map,
                                            std::span<const FrameLabels> batch,
                                            ComponentKind kind);

}  // namespace ivt
