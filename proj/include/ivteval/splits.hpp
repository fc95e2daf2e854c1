#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ivt {

struct Partition {
  std::string name;
  std::vector<std::string> videos;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Named partitioning of video ids ("VID01", ...). Partition order is
// significant and preserved by serialization.
struct SplitManifest {
  std::string name;
  std::vector<Partition> partitions;

  // nullptr when absent.
  const Partition* find(std::string_view partition) const;
  // All videos, partition by partition.
  std::vector<std::string> all_videos() const;
  // True when every partition is named fold1..foldK in order.
  bool is_cross_validation() const;

  friend bool operator==(const SplitManifest&, const SplitManifest&) = default;
};

// "rdv", "challenge", "cholect45-cv", "cholect50-cv".
std::span<const std::string_view> builtin_split_names();
// Throws ivt::Error(kUnknownName) for anything else.
SplitManifest builtin_split(std::string_view name);

// Canonical "VIDnn" spelling (two-digit minimum) for a numeric id.
std::string video_id(int number);

struct VideoDuration {
  std::string video;
  double seconds = 0.0;
};

// Duration-stratified k-fold assignment. Videos are sorted by descending
// duration (ties by id), cut into consecutive clusters of k, and each
// cluster is dealt to the k folds through a Fisher-Yates shuffle of
// 0..k-1. The shuffle draws from std::mt19937_64(seed) with rejection
// sampling (a draw x is kept when x >= 2^64 mod n and mapped to x mod n),
// so the output is identical on every conforming standard library.
//
// cluster_size must equal k and videos.size() must be a multiple of k.
SplitManifest generate_cv_folds(std::span<const VideoDuration> videos, int k,
                                int cluster_size, std::uint64_t seed,
                                std::string name = "generated-cv");

struct DatasetStats {
  std::string name;
  int videos = 0;
  int triplets = 100;
  int instruments = 6;
  int verbs = 10;
  int targets = 15;
  int phases = 7;
};

const DatasetStats& cholect45_stats();
const DatasetStats& cholect50_stats();

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const;
  const ValidationCheck* find(std::string_view name) const;
};

// Checks "video-count", "disjoint", "partition-names" and, for
// cross-validation manifests, "equal-fold-sizes". Never throws on a bad
// manifest; failures are report entries.
ValidationReport validate_manifest(const SplitManifest& manifest,
                                   const DatasetStats& expected);

struct FoldResult {
  int fold_index = 0;
  std::map<std::string, double> metrics;
};

struct FoldSummary {
  double mean = 0.0;
  // Population standard deviation.
  double std = 0.0;
  // Raw per-fold values in fold order.
  std::vector<double> values;

  std::string formatted() const;
};

// Mean and population std per metric. Needs at least two folds that all
// report the same metric names.
std::map<std::string, FoldSummary> aggregate_folds(
    std::span<const FoldResult> results);

// One-decimal "M.m±S.s".
std::string format_mean_std(double mean, double std);

}  // namespace ivt
