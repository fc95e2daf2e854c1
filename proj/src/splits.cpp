#include "ivteval/splits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>
#include <set>

#include "ivteval/error.hpp"

namespace ivt {
namespace {

using Ids = std::vector<int>;

// Transcribed column by column from the published split tables.
const Ids kRdvTrain = {1,  2,  4,  5,  13, 15, 18, 22, 23, 25, 26, 27,
                       31, 35, 36, 40, 43, 47, 48, 49, 52, 56, 57, 60,
                       62, 65, 66, 68, 70, 75, 79, 92, 96, 103, 110};
const Ids kRdvVal = {8, 12, 29, 50, 78};
const Ids kRdvTest = {6, 10, 14, 32, 42, 51, 73, 74, 80, 111};

const Ids kChallengeTrainval = {1,  2,  4,  6,  8,  10, 12, 13, 14, 15, 22, 23,
                                25, 26, 27, 29, 31, 32, 35, 40, 42, 43, 47, 48,
                                49, 50, 51, 52, 56, 57, 60, 62, 66, 68, 70, 73,
                                75, 78, 79, 80, 5,  18, 36, 65, 74};
const Ids kChallengeTest = {92, 96, 103, 110, 111};

// Rows 1-9 are CholecT45; row 10 completes CholecT50.
const std::array<Ids, 5> kCvFolds = {{
    {79, 2, 51, 6, 25, 14, 66, 23, 50, 111},
    {80, 32, 5, 15, 40, 47, 26, 48, 70, 96},
    {31, 57, 36, 18, 52, 68, 10, 8, 73, 103},
    {42, 29, 60, 27, 65, 75, 22, 49, 12, 110},
    {78, 43, 62, 35, 74, 1, 56, 4, 13, 92},
}};

constexpr std::array<std::string_view, 4> kBuiltinNames = {
    "rdv", "challenge", "cholect45-cv", "cholect50-cv"};

Partition make_partition(std::string name, const Ids& ids,
                         std::size_t limit = SIZE_MAX) {
  Partition p{std::move(name), {}};
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    p.videos.push_back(video_id(ids[i]));
  }
  return p;
}

SplitManifest cv_manifest(std::string name, std::size_t rows) {
  SplitManifest m{std::move(name), {}};
  for (std::size_t f = 0; f < kCvFolds.size(); ++f) {
    m.partitions.push_back(
        make_partition("fold" + std::to_string(f + 1), kCvFolds[f], rows));
  }
  return m;
}

// Uniform integer in [0, n) from a 64-bit engine, by rejection.
std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t n) {
  const std::uint64_t reject_below = (0 - n) % n;  // 2^64 mod n
  std::uint64_t x = engine();
  while (x < reject_below) x = engine();
  return x % n;
}

}  // namespace

std::string video_id(int number) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "VID%02d", number);
  return buf;
}

const Partition* SplitManifest::find(std::string_view partition) const {
  for (const Partition& p : partitions) {
    if (p.name == partition) return &p;
  }
  return nullptr;
}

std::vector<std::string> SplitManifest::all_videos() const {
  std::vector<std::string> out;
  for (const Partition& p : partitions) {
    out.insert(out.end(), p.videos.begin(), p.videos.end());
  }
  return out;
}

bool SplitManifest::is_cross_validation() const {
  if (partitions.empty()) return false;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    if (partitions[i].name != "fold" + std::to_string(i + 1)) return false;
  }
  return true;
}

std::span<const std::string_view> builtin_split_names() {
  return kBuiltinNames;
}

SplitManifest builtin_split(std::string_view name) {
  if (name == "rdv") {
    return {"rdv",
            {make_partition("train", kRdvTrain),
             make_partition("val", kRdvVal),
             make_partition("test", kRdvTest)}};
  }
  if (name == "challenge") {
    return {"challenge",
            {make_partition("trainval", kChallengeTrainval),
             make_partition("test", kChallengeTest)}};
  }
  if (name == "cholect45-cv") return cv_manifest("cholect45-cv", 9);
  if (name == "cholect50-cv") return cv_manifest("cholect50-cv", 10);
  throw Error(ErrorCode::kUnknownName,
              "unknown split '" + std::string(name) + "'");
}

SplitManifest generate_cv_folds(std::span<const VideoDuration> videos, int k,
                                int cluster_size, std::uint64_t seed,
                                std::string name) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (cluster_size != k) {
    throw Error(ErrorCode::kInvalidArgument,
                "cluster size must equal the fold count");
  }
  if (videos.empty() || videos.size() % static_cast<std::size_t>(k) != 0) {
    throw Error(ErrorCode::kCountMismatch,
                std::to_string(videos.size()) +
                    " videos cannot be split into clusters of " +
                    std::to_string(k));
  }
  std::set<std::string> seen;
  for (const VideoDuration& v : videos) {
    if (!std::isfinite(v.seconds)) {
      throw Error(ErrorCode::kNonFinite, "non-finite duration for " + v.video);
    }
    if (!seen.insert(v.video).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate video id " + v.video);
    }
  }

  std::vector<VideoDuration> sorted(videos.begin(), videos.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const VideoDuration& a, const VideoDuration& b) {
              if (a.seconds != b.seconds) return a.seconds > b.seconds;
              return a.video < b.video;
            });

  SplitManifest manifest{std::move(name), {}};
  for (int f = 0; f < k; ++f) {
    manifest.partitions.push_back({"fold" + std::to_string(f + 1), {}});
  }
  std::mt19937_64 engine(seed);
  const auto fold_count = static_cast<std::size_t>(k);
  std::vector<std::size_t> perm(fold_count);
  for (std::size_t start = 0; start < sorted.size(); start += fold_count) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = fold_count - 1; i > 0; --i) {
      std::swap(perm[i], perm[bounded(engine, i + 1)]);
    }
    for (std::size_t m = 0; m < fold_count; ++m) {
      manifest.partitions[perm[m]].videos.push_back(sorted[start + m].video);
    }
  }
  return manifest;
}

const DatasetStats& cholect45_stats() {
  static const DatasetStats stats{"CholecT45", 45};
  return stats;
}

const DatasetStats& cholect50_stats() {
  static const DatasetStats stats{"CholecT50", 50};
  return stats;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const ValidationCheck& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_manifest(const SplitManifest& manifest,
                                   const DatasetStats& expected) {
  ValidationReport report;
  const std::vector<std::string> all = manifest.all_videos();
  const std::set<std::string> unique(all.begin(), all.end());

  report.checks.push_back(
      {"video-count", static_cast<int>(unique.size()) == expected.videos,
       std::to_string(unique.size()) + " unique videos, expected " +
           std::to_string(expected.videos)});

  std::vector<std::string> repeated;
  std::set<std::string> seen;
  for (const std::string& v : all) {
    if (!seen.insert(v).second) repeated.push_back(v);
  }
  std::string detail = repeated.empty() ? "no video in two places" : "repeated:";
  for (const std::string& v : repeated) detail += " " + v;
  report.checks.push_back({"disjoint", repeated.empty(), detail});

  std::set<std::string> names;
  bool names_ok = true;
  for (const Partition& p : manifest.partitions) {
    names_ok = names_ok && !p.name.empty() && names.insert(p.name).second;
  }
  report.checks.push_back({"partition-names", names_ok,
                           names_ok ? "unique" : "empty or duplicate name"});

  if (manifest.is_cross_validation()) {
    const std::size_t first = manifest.partitions.front().videos.size();
    bool equal = true;
    std::string sizes;
    for (const Partition& p : manifest.partitions) {
      equal = equal && p.videos.size() == first;
      if (!sizes.empty()) sizes += "/";
      sizes += std::to_string(p.videos.size());
    }
    report.checks.push_back({"equal-fold-sizes", equal, "fold sizes " + sizes});
  }
  return report;
}

std::string format_mean_std(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f\xC2\xB1%.1f", mean, std);
  return buf;
}

std::string FoldSummary::formatted() const { return format_mean_std(mean, std); }

std::map<std::string, FoldSummary> aggregate_folds(
    std::span<const FoldResult> results) {
  if (results.size() < 2) {
    throw Error(ErrorCode::kNoData, "aggregation needs at least two folds");
  }
  const auto& reference = results.front().metrics;
  for (const FoldResult& r : results) {
    const bool same =
        r.metrics.size() == reference.size() &&
        std::equal(r.metrics.begin(), r.metrics.end(), reference.begin(),
                   [](const auto& a, const auto& b) { return a.first == b.first; });
    if (!same) {
      throw Error(ErrorCode::kShapeMismatch,
                  "fold " + std::to_string(r.fold_index) +
                      " reports a different metric set");
    }
  }

  std::map<std::string, FoldSummary> out;
  for (const auto& [metric, unused] : reference) {
    FoldSummary s;
    for (const FoldResult& r : results) s.values.push_back(r.metrics.at(metric));
    const double n = static_cast<double>(s.values.size());
    s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / n);
    out.emplace(metric, std::move(s));
  }
  return out;
}

}  // namespace ivt
