#include <random>

#include "doctest.h"
#include "ivteval/detection.hpp"
#include "ivteval/error.hpp"
#include "oracles.hpp"

using ivt::BoundingBox;
using ivt::Detection;
using ivt::GroundTruthBox;
using ivt::MatchKind;
using ivt::MatchOptions;

namespace {

ivt::ComponentMap five_class_map() {
  // Triplets 0..4; instruments 0,0,1,1,2.
  return ivt::ComponentMap::parse("0,0,0,0\n1,0,1,1\n2,1,0,0\n3,1,1,1\n4,2,0,1\n",
                                  ivt::LabelSpaceSizes{5, 3, 2, 2});
}

BoundingBox jitter(std::mt19937& rng, const BoundingBox& b) {
  std::uniform_real_distribution<double> d(-0.05, 0.05);
  BoundingBox j{b.x + std::abs(d(rng)), b.y + std::abs(d(rng)), b.w * 0.9, b.h * 0.9};
  return j;
}

BoundingBox random_box(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 0.6);
  std::uniform_real_distribution<double> s(0.05, 0.4);
  return {u(rng), u(rng), s(rng), s(rng)};
}

// Reference detection AP per class: oracle matcher, then oracle step AP
// normalized by the class's groundtruth count, averaged over videos.
std::vector<std::optional<double>> reference_detection_ap(
    const std::vector<ivt::DetectionVideo>& videos, const ivt::ComponentMap& map,
    MatchKind kind, double theta, int n_classes) {
  auto ident = [&](int t) {
    return kind == MatchKind::kInstrument ? map.row(t).instrument : t;
  };
  std::vector<double> sum(n_classes, 0.0);
  std::vector<int> cnt(n_classes, 0);
  for (const auto& video : videos) {
    std::vector<std::vector<double>> conf(n_classes);
    std::vector<std::vector<int>> tp(n_classes);
    std::vector<std::size_t> ngt(n_classes, 0);
    for (const auto& frame : video) {
      std::vector<int> pi, gi;
      for (const auto& p : frame.predictions) pi.push_back(ident(p.triplet));
      for (const auto& g : frame.groundtruth) gi.push_back(ident(g.triplet));
      const auto m = oracle::greedy_match(pi, frame.predictions, gi, frame.groundtruth, theta);
      std::vector<int> hit(frame.predictions.size(), 0);
      for (const auto& x : m.matches) hit[x.prediction] = 1;
      for (std::size_t p = 0; p < pi.size(); ++p) {
        conf[pi[p]].push_back(frame.predictions[p].confidence);
        tp[pi[p]].push_back(hit[p]);
      }
      for (int g : gi) ++ngt[g];
    }
    for (int c = 0; c < n_classes; ++c) {
      if (auto ap = oracle::step_ap(conf[c], tp[c], ngt[c])) {
        sum[c] += *ap;
        ++cnt[c];
      }
    }
  }
  std::vector<std::optional<double>> out(n_classes);
  for (int c = 0; c < n_classes; ++c) {
    if (cnt[c]) out[c] = sum[c] / cnt[c];
  }
  return out;
}

}  // namespace

TEST_CASE("iou") {
  const BoundingBox a{0, 0, 0.5, 0.5};
  CHECK(ivt::iou(a, a) == 1.0);
  CHECK(ivt::iou(a, BoundingBox{0.5, 0.5, 0.5, 0.5}) == 0.0);
  CHECK(ivt::iou(a, BoundingBox{0.25, 0, 0.5, 0.5}) == doctest::Approx(1.0 / 3.0));
  CHECK(ivt::iou(BoundingBox{0.2, 0.2, 0, 0}, BoundingBox{0.2, 0.2, 0, 0}) == 0.0);
  CHECK(ivt::iou(a, BoundingBox{0.1, 0.1, 0, 0.2}) == 0.0);
}

TEST_CASE("iou symmetry") {
  std::mt19937 rng(1);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_box(rng);
    const auto b = random_box(rng);
    CHECK(ivt::iou(a, b) == ivt::iou(b, a));
    CHECK(ivt::iou(a, b) == doctest::Approx(oracle::corner_iou(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("box validity") {
  CHECK(ivt::is_valid(BoundingBox{0.5, 0.5, 0.5, 0.5}));
  CHECK(ivt::is_valid(BoundingBox{0.5, 0.5, 0.5 + 5e-7, 0.5}));
  CHECK_FALSE(ivt::is_valid(BoundingBox{0.6, 0.5, 0.5, 0.2}));
  CHECK_FALSE(ivt::is_valid(BoundingBox{0.1, 0.1, -0.1, 0.2}));
}

TEST_CASE("match_frame basics") {
  const auto map = five_class_map();
  const GroundTruthBox gt{3, {0.1, 0.1, 0.4, 0.4}, std::nullopt};
  const Detection pred{3, 0.9, BoundingBox{0.1, 0.1, 0.4, 0.36}, std::nullopt};
  const std::vector<Detection> preds = {pred};

  auto r = ivt::match_frame(map, preds, std::vector<GroundTruthBox>{gt});
  REQUIRE(r.matches.size() == 1);
  CHECK(r.matches[0].iou == doctest::Approx(0.9));

  GroundTruthBox other = gt;
  other.triplet = 4;
  r = ivt::match_frame(map, preds, std::vector<GroundTruthBox>{other});
  CHECK(r.matches.empty());
  CHECK(r.unmatched_predictions == std::vector<std::size_t>{0});
  CHECK(r.unmatched_groundtruth == std::vector<std::size_t>{0});

  // Instrument identity: triplets 2 and 3 share instrument 1.
  GroundTruthBox same_instrument = gt;
  same_instrument.triplet = 2;
  r = ivt::match_frame(map, preds, std::vector<GroundTruthBox>{same_instrument},
                       MatchOptions{MatchKind::kInstrument, 0.5, false});
  CHECK(r.matches.size() == 1);
}

TEST_CASE("higher confidence wins the contested groundtruth") {
  const auto map = five_class_map();
  const GroundTruthBox gt{1, {0.0, 0.0, 0.5, 0.5}, std::nullopt};
  // IoU 0.7 and 0.9 against gt; the 0.9-confidence one has the lower IoU.
  const std::vector<Detection> preds = {
      {1, 0.9, BoundingBox{0.0, 0.0, 0.5, 0.35}, std::nullopt},
      {1, 0.8, BoundingBox{0.0, 0.0, 0.5, 0.45}, std::nullopt}};
  CHECK(ivt::iou(*preds[0].instrument_box, gt.instrument_box) == doctest::Approx(0.7));
  CHECK(ivt::iou(*preds[1].instrument_box, gt.instrument_box) == doctest::Approx(0.9));
  const auto r = ivt::match_frame(map, preds, std::vector<GroundTruthBox>{gt});
  REQUIRE(r.matches.size() == 1);
  CHECK(r.matches[0].prediction == 0);
  CHECK(r.unmatched_predictions == std::vector<std::size_t>{1});
}

TEST_CASE("target matching") {
  const auto map = five_class_map();
  const BoundingBox box{0.1, 0.1, 0.3, 0.3};
  const std::vector<GroundTruthBox> with_target = {{0, box, BoundingBox{0.5, 0.5, 0.2, 0.2}}};
  std::vector<Detection> preds = {{0, 0.9, box, BoundingBox{0.5, 0.5, 0.2, 0.2}}};
  const MatchOptions both{MatchKind::kTriplet, 0.5, true};
  CHECK(ivt::match_frame(map, preds, with_target, both).matches.size() == 1);
  preds[0].target_box = BoundingBox{0.0, 0.7, 0.2, 0.2};
  CHECK(ivt::match_frame(map, preds, with_target, both).matches.empty());
  preds[0].target_box.reset();
  CHECK_THROWS_AS(ivt::match_frame(map, preds, with_target, both), ivt::Error);
  CHECK_THROWS_AS(ivt::match_frame(map, preds, with_target, MatchOptions{MatchKind::kTriplet, 1.5, false}),
                  ivt::Error);
}

TEST_CASE("box-less predictions never match") {
  const auto map = five_class_map();
  const std::vector<Detection> preds = {{0, 0.9, std::nullopt, std::nullopt}};
  const std::vector<GroundTruthBox> gts = {{0, {0, 0, 0.2, 0.2}, std::nullopt}};
  const auto r = ivt::match_frame(map, preds, gts, MatchOptions{MatchKind::kTriplet, 0.0, false});
  CHECK(r.matches.empty());
}

TEST_CASE("random frames: conservation, theta monotonicity, determinism") {
  const auto map = five_class_map();
  std::mt19937 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Detection> preds;
    std::vector<GroundTruthBox> gts;
    const int np = rng() % 6, ng = rng() % 6;
    for (int i = 0; i < ng; ++i) gts.push_back({static_cast<int>(rng() % 5), random_box(rng), std::nullopt});
    for (int i = 0; i < np; ++i) {
      BoundingBox b = (ng > 0 && rng() % 2) ? jitter(rng, gts[rng() % ng].instrument_box) : random_box(rng);
      preds.push_back({static_cast<int>(rng() % 5), oracle::random_score(rng), b, std::nullopt});
    }
    std::size_t prev = SIZE_MAX;
    for (double theta : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      const MatchOptions opt{MatchKind::kTriplet, theta, false};
      const auto r = ivt::match_frame(map, preds, gts, opt);
      CHECK(r.matches.size() + r.unmatched_predictions.size() == preds.size());
      CHECK(r.matches.size() + r.unmatched_groundtruth.size() == gts.size());
      CHECK(r.matches.size() <= prev);
      prev = r.matches.size();
      for (const auto& m : r.matches) CHECK(m.iou >= theta);
      CHECK(r == ivt::match_frame(map, preds, gts, opt));
    }
  }
}

TEST_CASE("detection_ap: exact reproduction and threshold saturation") {
  const auto map = five_class_map();
  std::mt19937 rng(12);
  std::vector<ivt::DetectionVideo> exact(2);
  std::vector<ivt::DetectionVideo> jittered(2);
  for (auto v = 0; v < 2; ++v) {
    for (int f = 0; f < 5; ++f) {
      ivt::DetectionFrame frame;
      for (int i = 0; i < 3; ++i) {
        frame.groundtruth.push_back({static_cast<int>(rng() % 5), random_box(rng), std::nullopt});
      }
      ivt::DetectionFrame shifted = frame;
      for (const auto& g : frame.groundtruth) {
        frame.predictions.push_back({g.triplet, 0.8, g.instrument_box, std::nullopt});
        shifted.predictions.push_back({g.triplet, 0.8, jitter(rng, g.instrument_box), std::nullopt});
      }
      exact[v].push_back(frame);
      jittered[v].push_back(shifted);
    }
  }
  const auto r = ivt::detection_ap(exact, map);
  for (const auto& ap : r.ap.per_class) {
    if (ap) CHECK(*ap == 1.0);
  }
  CHECK(r.ap.mean == 1.0);
  const auto sat = ivt::detection_ap(jittered, map, MatchOptions{MatchKind::kTriplet, 1.0, false});
  for (std::size_t c = 0; c < sat.counts.size(); ++c) {
    CHECK(sat.counts[c].tp == 0);
    if (sat.ap.per_class[c]) CHECK(*sat.ap.per_class[c] == 0.0);
  }
}

TEST_CASE("detection_ap matches the reference implementation") {
  const auto map = five_class_map();
  std::mt19937 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ivt::DetectionVideo> videos(1 + rng() % 3);
    for (auto& video : videos) {
      const int frames = 1 + rng() % 10;
      for (int f = 0; f < frames; ++f) {
        ivt::DetectionFrame frame;
        const int ng = rng() % 6, np = rng() % 6;
        for (int i = 0; i < ng; ++i) {
          frame.groundtruth.push_back({static_cast<int>(rng() % 5), random_box(rng), std::nullopt});
        }
        for (int i = 0; i < np; ++i) {
          BoundingBox b = (ng > 0 && rng() % 3) ? jitter(rng, frame.groundtruth[rng() % ng].instrument_box)
                                                : random_box(rng);
          frame.predictions.push_back({static_cast<int>(rng() % 5), oracle::random_score(rng), b, std::nullopt});
        }
        video.push_back(frame);
      }
    }
    for (MatchKind kind : {MatchKind::kTriplet, MatchKind::kInstrument}) {
      const int n = kind == MatchKind::kTriplet ? 5 : 3;
      const auto got = ivt::detection_ap(videos, map, MatchOptions{kind, 0.5, false});
      const auto want = reference_detection_ap(videos, map, kind, 0.5, n);
      REQUIRE(got.ap.per_class.size() == want.size());
      for (int c = 0; c < n; ++c) {
        REQUIRE(got.ap.per_class[c].has_value() == want[c].has_value());
        if (want[c]) CHECK(*got.ap.per_class[c] == doctest::Approx(*want[c]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("global aggregation pools videos") {
  const auto map = five_class_map();
  const BoundingBox b{0.1, 0.1, 0.3, 0.3};
  const BoundingBox far{0.6, 0.6, 0.3, 0.3};
  // Video 1: class 0 TP at 0.9. Video 2: class 0 FP at 0.95, GT missed.
  std::vector<ivt::DetectionVideo> videos = {
      {{{{0, 0.9, b, std::nullopt}}, {{0, b, std::nullopt}}}},
      {{{{0, 0.95, far, std::nullopt}}, {{0, b, std::nullopt}}}}};
  const auto per_video = ivt::detection_ap(videos, map);
  CHECK(*per_video.ap.per_class[0] == doctest::Approx(0.5));
  const auto global = ivt::detection_ap(videos, map, {}, ivt::Aggregation::kGlobal);
  // Ranked FP, TP with 2 groundtruth: 1/2 * 1/2.
  CHECK(*global.ap.per_class[0] == doctest::Approx(0.25));
  CHECK(global.counts[0].tp == 1);
  CHECK(global.counts[0].fp == 1);
  CHECK(global.counts[0].fn == 1);
  CHECK(global.counts[0].precision() == doctest::Approx(0.5));
  CHECK(global.counts[0].recall() == doctest::Approx(0.5));
}

TEST_CASE("target localization support") {
  const BoundingBox b{0.1, 0.1, 0.2, 0.2};
  std::vector<ivt::DetectionVideo> instrument_only = {{{{}, {{0, b, std::nullopt}}}}};
  std::vector<ivt::DetectionVideo> both = {{{{}, {{0, b, b}}}}};
  std::vector<ivt::DetectionVideo> mixed = {{{{}, {{0, b, b}}}, {{}, {{1, b, std::nullopt}}}}};
  CHECK_FALSE(ivt::target_localization_supported(instrument_only));
  CHECK(ivt::target_localization_supported(both));
  CHECK_FALSE(ivt::target_localization_supported(mixed));
  CHECK_THROWS_AS(ivt::detection_ap(instrument_only, five_class_map(),
                                    MatchOptions{MatchKind::kTriplet, 0.5, true}),
                  ivt::Error);
}
