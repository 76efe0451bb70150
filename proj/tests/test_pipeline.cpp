#include <doctest.h>

#include <algorithm>
#include <random>

#include "dynamask/error.hpp"
#include "dynamask/evaluation.hpp"
#include "dynamask/pipeline.hpp"
#include "dynamask/synthgen.hpp"
#include "test_util.hpp"

using namespace dynamask;
using dynamask::testing::uniform_frame;

namespace {

ClipFrameSet flat_clip(std::size_t n, int w = 16, int h = 16) {
  std::vector<Frame> frames;
  for (std::size_t i = 0; i < n; ++i) {
    frames.push_back(uniform_frame(w, h, 50, {"flat", static_cast<int>(i)}));
  }
  return ClipFrameSet("flat", std::move(frames));
}

SceneSpec moving_rect_scene() {
  SceneSpec spec;
  spec.clip_id = "mover";
  spec.width = 256;
  spec.height = 96;
  spec.background = {BackgroundKind::texture, 90, 20.0, 16};
  spec.noise_sigma = 2.0;
  spec.seed = 5;
  Mover m;
  m.width = 24;
  m.height = 24;
  m.intensity = 210;
  m.x = 4;
  m.y = 36;
  m.vx = 20;
  spec.movers.push_back(m);
  return spec;
}

std::vector<std::size_t> indices_of(const ClipFrameSet& c) { return c.tfs_indices(); }

}  // namespace

TEST_CASE("sample_tfs even spacing") {
  CHECK(indices_of(sample_tfs(flat_clip(50), 5)) == std::vector<std::size_t>{0, 10, 20, 30, 40});
  CHECK(indices_of(sample_tfs(flat_clip(6), 5)) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(indices_of(sample_tfs(flat_clip(6), 1)) == std::vector<std::size_t>{0});
  // floor(k * 7 / 3) = 0, 2, 4
  CHECK(indices_of(sample_tfs(flat_clip(7), 3)) == std::vector<std::size_t>{0, 2, 4});
}

TEST_CASE("sample_tfs rejects counts outside 1..|ofs|-1") {
  CHECK_THROWS_AS(sample_tfs(flat_clip(6), 6), CountError);
  CHECK_THROWS_AS(sample_tfs(flat_clip(6), 0), CountError);
  CHECK_THROWS_AS(sample_tfs(flat_clip(6), -2), CountError);
}

TEST_CASE("sample_tfs random mode is a seeded subset") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = indices_of(sample_tfs(flat_clip(30), 7, TfsSampling::random, seed));
    const auto b = indices_of(sample_tfs(flat_clip(30), 7, TfsSampling::random, seed));
    CHECK(a == b);
    REQUIRE(a.size() == 7);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
    CHECK(a.back() < 30);
  }
  CHECK(indices_of(sample_tfs(flat_clip(30), 7, TfsSampling::random, 1)) !=
        indices_of(sample_tfs(flat_clip(30), 7, TfsSampling::random, 2)));
}

TEST_CASE("ClipFrameSet validation") {
  CHECK_THROWS_AS(flat_clip(5), CountError);

  std::vector<Frame> sizes;
  for (int i = 0; i < 6; ++i) sizes.push_back(uniform_frame(16 + (i == 3), 16, 0, {"c", i}));
  CHECK_THROWS_AS(ClipFrameSet("c", sizes), DimensionMismatch);

  std::vector<Frame> clips;
  for (int i = 0; i < 6; ++i) clips.push_back(uniform_frame(16, 16, 0, {i == 2 ? "d" : "c", i}));
  CHECK_THROWS_AS(ClipFrameSet("c", clips), ClipMismatch);

  ClipFrameSet ok = flat_clip(6);
  CHECK_THROWS_AS(ok.set_tfs_indices({0, 6}), IndexError);
  CHECK_THROWS_AS(ok.set_tfs_indices({1, 1}), IndexError);
  ok.set_tfs_indices({4, 2});
  CHECK(ok.tfs_indices() == std::vector<std::size_t>{2, 4});
}

TEST_CASE("clip of identical frames yields no instances") {
  const PipelineConfig cfg;
  const ClipFrameSet clip = sample_tfs(flat_clip(8, 64, 64), 5);
  const auto results = extract_clip(clip, cfg);
  REQUIRE(results.size() == 5);
  for (const auto& r : results) {
    CHECK(r.instances.empty());
    CHECK_FALSE(r.mask.any());
  }
}

TEST_CASE("extract_query_mask rejects non-query frames") {
  const ClipFrameSet clip = sample_tfs(flat_clip(8), 2);
  CHECK_THROWS_AS(extract_query_mask(clip, 1, PipelineConfig{}), IndexError);
}

TEST_CASE("moving rectangle is recovered at every query frame") {
  const SyntheticClip s = generate(moving_rect_scene());
  const ClipFrameSet clip = sample_tfs(s.clip, 5);
  const auto results = extract_clip(clip, PipelineConfig{});
  REQUIRE(results.size() == 5);
  for (const auto& r : results) {
    const EvalRecord rec = score_frame(r.mask, s.truth[static_cast<std::size_t>(r.frame_index)]);
    REQUIRE(rec.f1.has_value());
    CHECK(*rec.f1 >= 0.9);
    CHECK(r.instances.size() == 1);
  }
}

TEST_CASE("two far-apart squares give two instances") {
  SceneSpec spec;
  spec.clip_id = "pair";
  spec.width = 160;
  spec.height = 128;
  spec.background = {BackgroundKind::uniform, 70, 0.0, 16};
  spec.noise_sigma = 2.0;
  spec.seed = 11;
  spec.movers.push_back({MoverShape::rectangle, 18, 18, 220, 4, 10, 9, 0});
  spec.movers.push_back({MoverShape::rectangle, 18, 18, 20, 138, 96, -9, 0});
  const SyntheticClip s = generate(spec);
  const auto results = extract_clip(sample_tfs(s.clip, 5), PipelineConfig{});
  for (const auto& r : results) CHECK(r.instances.size() == 2);
}

TEST_CASE("final mask equals the composition of the stages") {
  const SyntheticClip s = generate(moving_rect_scene());
  const ClipFrameSet clip = sample_tfs(s.clip, 3);
  PipelineConfig cfg;
  cfg.dump_intermediates = true;
  const QueryResult r = extract_query_mask(clip, clip.tfs_indices()[1], cfg);
  REQUIRE(r.intermediates.has_value());
  const Intermediates& in = *r.intermediates;
  CHECK(in.adfs.size() == clip.ofs().size() - 1);
  CHECK(in.bdfs.size() == clip.ofs().size() - 1);
  CHECK(in.votes.cardinality() == clip.ofs().size() - 1);
  CHECK(std::find(in.other_frame_indices.begin(), in.other_frame_indices.end(), r.frame_index) ==
        in.other_frame_indices.end());

  const Frame& query = clip.ofs()[clip.tfs_indices()[1]];
  for (std::size_t k = 0; k < in.adfs.size(); ++k) {
    const Frame& other = clip.ofs()[static_cast<std::size_t>(in.other_frame_indices[k])];
    CHECK(in.adfs[k].values == abs_diff(query, other).values);
    CHECK(in.bdfs[k] == threshold_adf(in.adfs[k]));
  }
  CHECK(in.vote_mask == vote_threshold(in.votes, cfg.vote));
  CHECK(in.labeling.labels == segment(query, cfg.superpixel).labels);
  CHECK(in.promoted == promote(in.labeling, in.vote_mask, cfg.superpixel));
  const InstanceSet refined = refine(in.promoted, cfg.morph);
  CHECK(refined.union_mask() == r.mask);
  CHECK(r.instances.union_mask() == r.mask);

  cfg.dump_intermediates = false;
  CHECK_FALSE(extract_query_mask(clip, clip.tfs_indices()[1], cfg).intermediates.has_value());
}

TEST_CASE("permuting non-query frames does not change the masks") {
  const SyntheticClip s = generate(moving_rect_scene());
  const ClipFrameSet base = sample_tfs(s.clip, 5);
  const auto expected = extract_clip(base, PipelineConfig{});

  const auto& tfs = base.tfs_indices();
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < base.ofs().size(); ++i) {
    if (!std::binary_search(tfs.begin(), tfs.end(), i)) others.push_back(i);
  }
  std::mt19937 rng(8);
  for (int t = 0; t < 3; ++t) {
    std::vector<std::size_t> shuffled = others;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<Frame> frames = base.ofs();
    for (std::size_t k = 0; k < others.size(); ++k) frames[others[k]] = base.ofs()[shuffled[k]];
    ClipFrameSet permuted(base.clip_id(), std::move(frames));
    permuted.set_tfs_indices(tfs);
    const auto got = extract_clip(permuted, PipelineConfig{});
    REQUIRE(got.size() == expected.size());
    for (std::size_t q = 0; q < got.size(); ++q) {
      CHECK(got[q].frame_index == expected[q].frame_index);
      CHECK(got[q].mask == expected[q].mask);
    }
  }
}

TEST_CASE("extract_clip is deterministic and independent of the job count") {
  const SyntheticClip s = generate(moving_rect_scene());
  ClipFrameSet clip = s.clip;
  // No tfs indices yet: extract_clip samples cfg.tfs_count.
  const auto a = extract_clip(clip, PipelineConfig{}, 1);
  const auto b = extract_clip(clip, PipelineConfig{}, 4);
  REQUIRE(a.size() == 5);
  REQUIRE(b.size() == 5);
  for (std::size_t q = 0; q < a.size(); ++q) {
    CHECK(a[q].frame_index == b[q].frame_index);
    CHECK(a[q].mask == b[q].mask);
    CHECK(a[q].instances.size() == b[q].instances.size());
    if (q > 0) CHECK(a[q - 1].frame_index < a[q].frame_index);
  }
}

TEST_CASE("PipelineConfig validation") {
  PipelineConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tfs_count = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.vote.tau_c = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.morph.kernel_size = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
