#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "dynamask/error.hpp"
#include "dynamask/evaluation.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dynamask;
using dynamask::testing::random_mask;
using dynamask::testing::rect_mask;

namespace {

LabelRaster filled(int w, int h, std::int32_t id) {
  return {w, h, std::vector<std::int32_t>(static_cast<std::size_t>(w) * h, id)};
}

EvalRecord with_f1(std::string frame, std::optional<double> f1) {
  EvalRecord r;
  r.frame = std::move(frame);
  r.f1 = f1;
  return r;
}

std::string prefix_group(const EvalRecord& r) { return r.frame.substr(0, r.frame.find('_')); }

}  // namespace

TEST_CASE("fuse_ground_truth examples") {
  CHECK(fuse_ground_truth(filled(8, 8, 26), {{26}}) == BinaryMask(8, 8, true));
  CHECK(fuse_ground_truth(filled(8, 8, 23), {{24, 26}}) == BinaryMask(8, 8));

  // road background with a person block and a car block
  LabelRaster raster = filled(40, 30, 7);
  const BinaryMask person = rect_mask(40, 30, 3, 4, 6, 14);
  const BinaryMask car = rect_mask(40, 30, 15, 10, 20, 9);
  for (std::size_t i = 0; i < raster.ids.size(); ++i) {
    if (person[i]) raster.ids[i] = 24;
    if (car[i]) raster.ids[i] = 26;
  }
  BinaryMask expected = person;
  expected |= car;
  CHECK(fuse_ground_truth(raster, LabelFusionSpec::cityscapes_default()) == expected);
}

TEST_CASE("Cityscapes default dynamic ids") {
  const auto ids = LabelFusionSpec::cityscapes_default().dynamic_label_ids;
  CHECK(ids == std::set<std::int32_t>{5, 24, 25, 26, 27, 28, 29, 30, 31, 32, 33});
  // sky (23) and road (7) stay static
  CHECK_FALSE(ids.contains(23));
  CHECK_FALSE(ids.contains(7));
  CHECK_THROWS_AS(LabelFusionSpec{}.validate(), ConfigError);
}

TEST_CASE("score_frame examples") {
  const BinaryMask truth = rect_mask(20, 20, 0, 0, 10, 10);
  const EvalRecord perfect = score_frame(truth, truth);
  CHECK(perfect.f1 == 1.0);
  CHECK(perfect.tp == 100);

  const EvalRecord miss = score_frame(BinaryMask(20, 20), truth);
  CHECK(miss.f1 == 0.0);
  CHECK(miss.fn == 100);

  // 50 of the 100 truth pixels plus 50 false ones
  BinaryMask pred = rect_mask(20, 20, 0, 0, 10, 5);
  pred |= rect_mask(20, 20, 10, 10, 10, 5);
  const EvalRecord half = score_frame(pred, truth);
  CHECK(half.tp == 50);
  CHECK(half.fp == 50);
  CHECK(half.fn == 50);
  CHECK(half.tn == 250);
  REQUIRE(half.f1.has_value());
  CHECK(std::abs(*half.f1 - 0.5) <= 1e-9);

  CHECK_FALSE(score_frame(BinaryMask(20, 20), BinaryMask(20, 20)).f1.has_value());
  CHECK_THROWS_AS(score_frame(BinaryMask(20, 20), BinaryMask(20, 21)), DimensionMismatch);
}

TEST_CASE("score_frame matches the pixel-loop oracle and is symmetric in f1") {
  std::mt19937 rng(31);
  for (int t = 0; t < 50; ++t) {
    const BinaryMask p = random_mask(rng, 64, 64, 0.02 * (t % 25));
    const BinaryMask q = random_mask(rng, 64, 64, 0.3);
    const EvalRecord r = score_frame(p, q);
    const auto c = oracle::confusion(p, q);
    CHECK(r.tp == c.tp);
    CHECK(r.fp == c.fp);
    CHECK(r.fn == c.fn);
    CHECK(r.tn == c.tn);
    REQUIRE(r.f1.has_value());
    CHECK(*r.f1 == 2.0 * c.tp / static_cast<double>(2 * c.tp + c.fp + c.fn));
    CHECK(*score_frame(q, p).f1 == *r.f1);
  }
}

TEST_CASE("aggregate examples") {
  const auto one = aggregate({with_f1("a_1", 0.5)}, prefix_group);
  CHECK(one.groups.at("a").mean_f1 == 0.5);

  const auto pair = aggregate({with_f1("a_1", 1.0), with_f1("a_2", 0.0)}, prefix_group);
  CHECK(pair.groups.at("a").mean_f1 == 0.5);

  const auto cities =
      aggregate({with_f1("A_1", 0.8), with_f1("A_2", 0.6), with_f1("B_1", 0.9)}, prefix_group);
  CHECK(std::abs(cities.groups.at("A").mean_f1 - 0.7) <= 1e-9);
  CHECK(std::abs(cities.groups.at("B").mean_f1 - 0.9) <= 1e-9);
  REQUIRE(cities.mean_f1.has_value());
  CHECK(std::abs(*cities.mean_f1 - 2.3 / 3.0) <= 1e-9);
  CHECK(std::abs(*cities.mean_f1 - 0.7667) <= 1e-4);
}

TEST_CASE("aggregate excludes undefined frames from the means") {
  const auto r = aggregate({with_f1("a_1", 0.4), with_f1("a_2", std::nullopt),
                            with_f1("b_1", std::nullopt)},
                           prefix_group);
  CHECK(r.undefined_count == 2);
  CHECK(r.groups.at("a").frame_count == 1);
  CHECK(r.groups.at("a").undefined_count == 1);
  CHECK(r.groups.at("a").mean_f1 == 0.4);
  CHECK(r.groups.at("b").frame_count == 0);
  CHECK(r.mean_f1 == 0.4);

  const auto none = aggregate({}, prefix_group);
  CHECK_FALSE(none.mean_f1.has_value());
  CHECK_FALSE(none.micro_f1.has_value());
}

TEST_CASE("micro f1 pools the counts") {
  const BinaryMask truth = rect_mask(10, 10, 0, 0, 5, 5);
  std::vector<EvalRecord> recs{score_frame(truth, truth), score_frame(BinaryMask(10, 10), truth)};
  recs[0].frame = "x_1";
  recs[1].frame = "x_2";
  const auto r = aggregate(recs, prefix_group);
  // tp 25, fn 25 -> 50 / 75
  CHECK(std::abs(*r.micro_f1 - 2.0 / 3.0) <= 1e-12);
  CHECK(*r.mean_f1 == 0.5);
}

TEST_CASE("report serialization") {
  const auto r = aggregate({with_f1("A_1", 0.8), with_f1("B_1", std::nullopt)}, prefix_group);
  const auto doc = nlohmann::json::parse(report_to_json(r));
  CHECK(doc["mean_f1"].get<double>() == 0.8);
  CHECK(doc["groups"]["A"]["frame_count"].get<int>() == 1);
  CHECK(doc["groups"]["B"]["mean_f1"].is_null());
  CHECK(doc["records"].size() == 2);
  CHECK(doc["records"][1]["f1"].is_null());

  const std::string table = format_report_table(r);
  CHECK(table.find("0.8000") != std::string::npos);
  CHECK(table.find("n/a") != std::string::npos);
}
