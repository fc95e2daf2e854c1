#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "ivteval/error.hpp"
#include "ivteval/evaluate.hpp"
#include "ivteval/io.hpp"
#include "ivteval/recognition.hpp"

using ivt::Json;

namespace {

const ivt::ComponentMap& map() { return ivt::ComponentMap::cholect50(); }

ivt::ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const ivt::Error& e) {
    return e.code();
  }
  FAIL("no ivt::Error thrown");
  return ivt::ErrorCode::kInvalidArgument;
}

Json gt_doc() {
  return Json::parse(R"({"video": "VID01", "num_triplet_classes": 100,
    "frames": {"10": {"triplets": [3, 17]}, "2": {"triplets": []}}})");
}

}  // namespace

TEST_CASE("groundtruth with labels only") {
  const auto gt = ivt::parse_groundtruth(gt_doc(), map());
  CHECK(gt.video == "VID01");
  REQUIRE(gt.frames.size() == 2);
  CHECK(gt.frames[0].index == 2);  // sorted numerically, not lexically
  CHECK(gt.frames[1].labels[3] == 1);
  CHECK(gt.frames[1].labels[17] == 1);
  CHECK(gt.frames[1].labels[4] == 0);
  CHECK_FALSE(gt.frames[1].boxes.has_value());
  CHECK_FALSE(ivt::target_localization_supported(gt));
}

TEST_CASE("groundtruth validation") {
  auto doc = gt_doc();
  doc["frames"]["10"]["triplets"].push_back(100);
  CHECK(code_of([&] { ivt::parse_groundtruth(doc, map()); }) == ivt::ErrorCode::kOutOfRange);

  doc = gt_doc();
  doc["num_triplet_classes"] = 99;
  CHECK_THROWS_AS(ivt::parse_groundtruth(doc, map()), ivt::Error);

  doc = gt_doc();
  doc["frames"]["01"] = Json::parse(R"({"triplets": []})");
  CHECK(code_of([&] { ivt::parse_groundtruth(doc, map()); }) == ivt::ErrorCode::kMalformed);

  doc = gt_doc();
  doc.erase("frames");
  CHECK_THROWS_AS(ivt::parse_groundtruth(doc, map()), ivt::Error);
}

TEST_CASE("groundtruth boxes and target support") {
  auto doc = Json::parse(R"({"video": "VID02", "num_triplet_classes": 100, "frames": {
    "0": {"triplets": [1], "boxes": [{"triplet": 1, "instrument_bbox": [0.1, 0.1, 0.2, 0.2],
                                          "target_bbox": [0.3, 0.3, 0.2, 0.2]}]},
    "1": {"triplets": [1], "boxes": [{"triplet": 1, "instrument_bbox": [0.1, 0.1, 0.2, 0.2],
                                          "target_bbox": null}]}}})");
  const auto mixed = ivt::parse_groundtruth(doc, map());
  CHECK_FALSE(ivt::target_localization_supported(mixed));
  doc["frames"].erase("1");
  const auto full = ivt::parse_groundtruth(doc, map());
  CHECK(ivt::target_localization_supported(full));

  doc["frames"]["0"]["boxes"][0]["instrument_bbox"] = {0.9, 0.9, 0.5, 0.5};
  CHECK(code_of([&] { ivt::parse_groundtruth(doc, map()); }) == ivt::ErrorCode::kOutOfRange);
}

TEST_CASE("predictions") {
  Json doc = {{"video", "VID01"}, {"num_triplet_classes", 100}, {"frames", Json::object()}};
  Json scores = Json::array();
  for (int t = 0; t < 100; ++t) scores.push_back(t / 100.0);
  doc["frames"]["0"] = {{"scores", scores},
                        {"detections", Json::parse(R"([{"triplet": 4, "score": 0.8,
                            "instrument_bbox": [0.1, 0.2, 0.3, 0.4]},
                            {"triplet": 5, "score": 0.4, "instrument_bbox": null}])")}};
  const auto pred = ivt::parse_predictions(doc, map());
  REQUIRE(pred.frames.size() == 1);
  CHECK(pred.frames[0].scores[42] == doctest::Approx(0.42));
  REQUIRE(pred.frames[0].detections->size() == 2);
  CHECK((*pred.frames[0].detections)[0].instrument_box->h == doctest::Approx(0.4));
  CHECK_FALSE((*pred.frames[0].detections)[1].instrument_box.has_value());

  auto bad = doc;
  bad["frames"]["0"]["scores"][7] = 1.5;
  CHECK(code_of([&] { ivt::parse_predictions(bad, map()); }) == ivt::ErrorCode::kOutOfRange);
  bad = doc;
  bad["frames"]["0"]["scores"].erase(0);
  CHECK_THROWS_AS(ivt::parse_predictions(bad, map()), ivt::Error);
}

TEST_CASE("document round trip") {
  const auto v = fixtures::make_video("VID07", map(), 3);
  const auto gt = ivt::parse_groundtruth(ivt::to_json(v.gt, map()), map());
  const auto pred = ivt::parse_predictions(ivt::to_json(v.pred, map()), map());
  REQUIRE(gt.frames.size() == v.gt.frames.size());
  for (std::size_t f = 0; f < gt.frames.size(); ++f) {
    CHECK(gt.frames[f].labels == v.gt.frames[f].labels);
    CHECK(pred.frames[f].scores == v.pred.frames[f].scores);
    CHECK(pred.frames[f].detections->size() == v.pred.frames[f].detections->size());
  }
}

TEST_CASE("manifest round trip") {
  for (auto name : ivt::builtin_split_names()) {
    const auto m = ivt::builtin_split(name);
    CHECK(ivt::manifest_from_json(ivt::manifest_to_json(m)) == m);
  }
  CHECK_THROWS_AS(ivt::manifest_from_json(Json::parse(R"({"name": "x"})")), ivt::Error);
}

TEST_CASE("selection") {
  const auto cv = ivt::builtin_split("cholect45-cv");
  const auto s = ivt::select_videos(cv, 1, std::nullopt);
  CHECK(s.partition == "fold1");
  CHECK(s.videos.size() == 9);
  CHECK(ivt::select_videos(ivt::builtin_split("rdv"), std::nullopt, "val").videos.size() == 5);
  CHECK_THROWS_AS(ivt::select_videos(cv, 6, std::nullopt), ivt::Error);
  CHECK_THROWS_AS(ivt::select_videos(cv, 1, "test"), ivt::Error);
  CHECK_THROWS_AS(ivt::select_videos(cv, std::nullopt, std::nullopt), ivt::Error);
}

namespace {

struct Sets {
  ivt::GroundTruthSet gt;
  ivt::PredictionSet pred;
  ivt::Selection selection;
};

Sets make_sets(const std::vector<std::string>& videos) {
  Sets s;
  s.selection = {"none", "all", std::nullopt, videos};
  for (std::size_t i = 0; i < videos.size(); ++i) {
    auto v = fixtures::make_video(videos[i], map(), 100 + static_cast<std::uint32_t>(i));
    s.gt[videos[i]] = v.gt;
    s.pred[videos[i]] = v.pred;
  }
  return s;
}

}  // namespace

TEST_CASE("evaluate: perfect predictions") {
  auto s = make_sets({"VID01", "VID02"});
  for (auto& [id, p] : s.pred) {
    const auto& g = s.gt.at(id);
    for (std::size_t f = 0; f < p.frames.size(); ++f) {
      p.frames[f].scores.assign(g.frames[f].labels.begin(), g.frames[f].labels.end());
    }
  }
  const auto r = ivt::evaluate(map(), s.gt, s.pred, s.selection, {});
  for (auto kind : ivt::kAllKinds) {
    REQUIRE(r.recognition.at(kind).mean.has_value());
    CHECK(*r.recognition.at(kind).mean == doctest::Approx(1.0));
  }
}

TEST_CASE("evaluate matches the accumulator") {
  auto s = make_sets({"VID01", "VID02", "VID03"});
  ivt::EvaluationOptions options;
  options.class_mask = {94, 95, 96, 97, 98, 99};
  options.detection = true;
  options.tas = true;
  const auto r = ivt::evaluate(map(), s.gt, s.pred, s.selection, options);

  ivt::Recognition rec(map(), options.class_mask);
  for (const auto& id : s.selection.videos) {
    const auto& g = s.gt.at(id);
    const auto& p = s.pred.at(id);
    for (std::size_t f = 0; f < g.frames.size(); ++f) rec.update(g.frames[f].labels, p.frames[f].scores);
    rec.video_end();
  }
  for (auto kind : ivt::kAllKinds) {
    const auto expected = rec.compute_video_ap(kind);
    const auto& got = r.recognition.at(kind);
    REQUIRE(got.per_class.size() == expected.per_class.size());
    for (std::size_t c = 0; c < got.per_class.size(); ++c) {
      CHECK(got.per_class[c].has_value() == expected.per_class[c].has_value());
      if (got.per_class[c]) CHECK(*got.per_class[c] == doctest::Approx(*expected.per_class[c]));
    }
  }
  CHECK_FALSE(r.recognition.at(ivt::ComponentKind::kIVT).per_class[96].has_value());
  REQUIRE(r.triplet_detection.has_value());
  REQUIRE(r.instrument_detection.has_value());
  REQUIRE(r.tas.has_value());
  CHECK_FALSE(*r.target_localization);

  // Report JSON round trip at four decimals.
  const auto doc = ivt::report_to_json(r);
  const auto back = ivt::report_from_json(doc);
  CHECK(ivt::report_to_json(back) == doc);
  CHECK(back.tas->counts == r.tas->counts);
  CHECK(back.options.class_mask == options.class_mask);
}

TEST_CASE("evaluate input errors") {
  auto s = make_sets({"VID01", "VID02"});
  auto missing = s;
  missing.pred.erase("VID02");
  CHECK(code_of([&] { ivt::evaluate(map(), missing.gt, missing.pred, missing.selection, {}); }) ==
        ivt::ErrorCode::kMissingVideo);
  auto shifted = s;
  shifted.pred["VID01"].frames[0].index = 0;
  CHECK(code_of([&] { ivt::evaluate(map(), shifted.gt, shifted.pred, shifted.selection, {}); }) ==
        ivt::ErrorCode::kFrameMismatch);
}

TEST_CASE("round4") {
  CHECK(ivt::round4(0.123456) == doctest::Approx(0.1235));
  CHECK(ivt::round4(1.0) == 1.0);
}
