#pragma once

// Deterministic synthetic groundtruth/prediction sets on the bundled map.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ivteval/io.hpp"
#include "ivteval/label_space.hpp"

namespace fixtures {

struct VideoPair {
  ivt::VideoGroundTruth gt;
  ivt::VideoPredictions pred;
};

inline ivt::BoundingBox random_box(std::mt19937& rng) {
  std::uniform_int_distribution<int> pos(0, 12);
  std::uniform_int_distribution<int> ext(2, 8);
  return {pos(rng) / 20.0, pos(rng) / 20.0, ext(rng) / 20.0, ext(rng) / 20.0};
}

// Frames are sparse (every other index) so alignment is by index.
inline VideoPair make_video(const std::string& video, const ivt::ComponentMap& map,
                            std::uint32_t seed, int frames = 12) {
  std::mt19937 rng(seed);
  const int n = map.n_triplets();
  VideoPair v;
  v.gt.video = video;
  v.pred.video = video;
  for (int f = 0; f < frames; ++f) {
    ivt::GroundTruthFrame g;
    ivt::PredictionFrame p;
    g.index = p.index = 2 * f + 1;
    g.labels.assign(n, 0);
    g.boxes.emplace();
    p.detections.emplace();
    const int present = rng() % 3;
    for (int i = 0; i < present; ++i) {
      const int t = rng() % std::min(n, 12);
      g.labels[t] = 1;
      g.boxes->push_back({t, random_box(rng), std::nullopt});
    }
    for (int t = 0; t < n; ++t) {
      p.scores.push_back(std::uniform_int_distribution<int>(0, 1000)(rng) / 1000.0);
    }
    for (const auto& b : *g.boxes) {
      if (rng() % 4 == 0) continue;
      const int t = rng() % 5 == 0 ? static_cast<int>(rng() % std::min(n, 12)) : b.triplet;
      p.detections->push_back({t, std::uniform_int_distribution<int>(1, 100)(rng) / 100.0,
                               rng() % 6 == 0 ? std::nullopt
                                              : std::optional<ivt::BoundingBox>(
                                                    rng() % 2 ? b.instrument_box : random_box(rng)),
                               std::nullopt});
    }
    if (rng() % 3 == 0) {
      p.detections->push_back({static_cast<int>(rng() % std::min(n, 12)), 0.3,
                               random_box(rng), std::nullopt});
    }
    v.gt.frames.push_back(std::move(g));
    v.pred.frames.push_back(std::move(p));
  }
  return v;
}

// Writes <dir>/gt/<video>.json and <dir>/pred/<video>.json.
inline void write_set(const std::filesystem::path& dir, const std::vector<std::string>& videos,
                      const ivt::ComponentMap& map, std::uint32_t seed = 7) {
  std::filesystem::create_directories(dir / "gt");
  std::filesystem::create_directories(dir / "pred");
  for (std::size_t i = 0; i < videos.size(); ++i) {
    const auto v = make_video(videos[i], map, seed + static_cast<std::uint32_t>(i));
    ivt::write_text(dir / "gt" / (videos[i] + ".json"), ivt::dump_json(ivt::to_json(v.gt, map)));
    ivt::write_text(dir / "pred" / (videos[i] + ".json"), ivt::dump_json(ivt::to_json(v.pred, map)));
  }
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ivteval_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixtures
