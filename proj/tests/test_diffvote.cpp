#include <doctest.h>

#include <random>

#include "dynamask/diffvote.hpp"
#include "dynamask/error.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dynamask;
using dynamask::testing::random_frame;
using dynamask::testing::random_mask;
using dynamask::testing::uniform_frame;

TEST_CASE("abs_diff examples") {
  const Frame a = uniform_frame(32, 32, 100);
  CHECK(std::all_of(abs_diff(a, a).values.begin(), abs_diff(a, a).values.end(),
                    [](auto v) { return v == 0; }));

  const AbsDiffFrame c = abs_diff(a, uniform_frame(32, 32, 60));
  CHECK(std::all_of(c.values.begin(), c.values.end(), [](auto v) { return v == 40; }));

  // 10x10 square at 200 on a 50 background against all-50.
  std::vector<std::uint8_t> px(32 * 32, 50);
  for (int y = 5; y < 15; ++y) {
    for (int x = 8; x < 18; ++x) px[y * 32 + x] = 200;
  }
  const Frame q = Frame::from_gray(32, 32, px, {"clip", 1});
  const Frame o = uniform_frame(32, 32, 50);
  const AbsDiffFrame d = abs_diff(q, o);
  const auto expected = oracle::abs_diff(q, o);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      const bool inside = x >= 8 && x < 18 && y >= 5 && y < 15;
      CHECK(d.values[y * 32 + x] == (inside ? 150 : 0));
      CHECK(d.values[y * 32 + x] == expected[y * 32 + x]);
    }
  }
}

TEST_CASE("abs_diff rejects mismatched inputs") {
  CHECK_THROWS_AS(abs_diff(uniform_frame(32, 32, 0), uniform_frame(32, 16, 0)), DimensionMismatch);
  CHECK_THROWS_AS(abs_diff(uniform_frame(32, 32, 0, {"a", 0}), uniform_frame(32, 32, 0, {"b", 1})),
                  ClipMismatch);
}

TEST_CASE("abs_diff is symmetric") {
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    const Frame a = random_frame(rng, 32, 32), b = random_frame(rng, 32, 32);
    CHECK(abs_diff(a, b).values == abs_diff(b, a).values);
  }
}

TEST_CASE("threshold_adf: uniform difference frames are all static") {
  for (int c : {0, 1, 77, 255}) {
    const AbsDiffFrame adf{20, 20, std::vector<std::uint8_t>(400, static_cast<std::uint8_t>(c))};
    CHECK(adf_stats(adf).stddev == 0.0);
    CHECK_FALSE(threshold_adf(adf).any());
  }
}

TEST_CASE("threshold_adf: half 0 / half 200 sits exactly on the threshold") {
  AbsDiffFrame adf{20, 20, std::vector<std::uint8_t>(400, 0)};
  std::fill(adf.values.begin() + 200, adf.values.end(), 200);
  const auto stats = adf_stats(adf);
  CHECK(stats.mean == 100.0);
  CHECK(stats.stddev == 100.0);
  CHECK(stats.threshold() == 200.0);
  CHECK_FALSE(threshold_adf(adf).any());  // 200 > 200 is false
}

TEST_CASE("threshold_adf: 1% of pixels at 255 are exactly the dynamic ones") {
  // 100x100 image, 100 pixels at 255. Closed form:
  //   mean = 255 * 0.01 = 2.55
  //   var  = 0.01 * 255^2 - 2.55^2 = 650.25 - 6.5025 = 643.7475
  //   threshold = 2.55 + sqrt(643.7475) ~= 27.92
  AbsDiffFrame adf{100, 100, std::vector<std::uint8_t>(10000, 0)};
  for (int k = 0; k < 100; ++k) adf.values[k * 97 % 10000] = 255;
  const auto stats = adf_stats(adf);
  CHECK(stats.mean == doctest::Approx(2.55).epsilon(1e-12));
  CHECK(stats.stddev == doctest::Approx(std::sqrt(643.7475)).epsilon(1e-12));
  CHECK(stats.threshold() == doctest::Approx(27.922).epsilon(1e-4));

  const BinaryMask m = threshold_adf(adf);
  CHECK(m.count() == 100);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(m[i] == (adf.values[i] == 255));
}

TEST_CASE("threshold_adf never marks more than the nonzero pixels") {
  std::mt19937 rng(5);
  for (int t = 0; t < 30; ++t) {
    Frame a = random_frame(rng, 24, 24), b = random_frame(rng, 24, 24);
    AbsDiffFrame adf = abs_diff(a, b);
    adf.values[0] = 0;
    std::size_t nonzero = 0;
    for (auto v : adf.values) nonzero += v != 0;
    CHECK(threshold_adf(adf).count() <= nonzero);
  }
}

TEST_CASE("accumulate_votes examples") {
  std::mt19937 rng(3);
  const BinaryMask m = random_mask(rng, 16, 16, 0.4);
  const std::vector<BinaryMask> same(4, m);
  const VoteMap v = accumulate_votes(same);
  CHECK(v.cardinality() == 4);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(v.counts()[i] == (m[i] ? 4u : 0u));

  const std::vector<BinaryMask> disjoint{dynamask::testing::rect_mask(16, 16, 0, 0, 8, 16),
                                         dynamask::testing::rect_mask(16, 16, 8, 0, 8, 16)};
  const VoteMap d = accumulate_votes(disjoint);
  for (auto c : d.counts()) CHECK(c <= 1);

  // Three masks that share exactly one pixel, (5, 7).
  std::vector<BinaryMask> three(3, BinaryMask(16, 16));
  for (auto& t : three) t.set(5, 7, true);
  three[0].set(1, 1, true);
  three[1].set(1, 1, true);
  three[2].set(9, 9, true);
  const VoteMap o = accumulate_votes(three);
  const auto expected = oracle::votes(three);
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(o.counts()[i] == expected[i]);
  CHECK(o.count_at(5, 7) == 3);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i != 7 * 16 + 5) CHECK(o.counts()[i] < 3);
  }
}

TEST_CASE("accumulate_votes error paths") {
  CHECK_THROWS_AS(accumulate_votes(std::vector<BinaryMask>{}), EmptySet);
  CHECK_THROWS_AS(accumulate_votes(std::vector<BinaryMask>{BinaryMask(4, 4), BinaryMask(4, 5)}),
                  DimensionMismatch);
}

TEST_CASE("vote monotonicity") {
  std::mt19937 rng(8);
  VoteMap votes(32, 32);
  std::vector<std::uint32_t> before(32 * 32, 0);
  for (int k = 0; k < 10; ++k) {
    votes.add(random_mask(rng, 32, 32, 0.3));
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(votes.counts()[i] >= before[i]);
      CHECK(votes.counts()[i] <= votes.cardinality());
    }
    before.assign(votes.counts().begin(), votes.counts().end());
  }
  // Under a fixed cutoff, adding all-ones BDFs only grows the dynamic set.
  const double cutoff = 4.0;
  auto above = [&](const VoteMap& v) {
    BinaryMask m(32, 32);
    for (std::size_t i = 0; i < m.size(); ++i) m.set(i, v.counts()[i] > cutoff);
    return m;
  };
  BinaryMask prev = above(votes);
  for (int k = 0; k < 3; ++k) {
    votes.add(BinaryMask(32, 32, true));
    const BinaryMask next = above(votes);
    CHECK(prev.is_subset_of(next));
    prev = next;
  }
}

TEST_CASE("vote_threshold examples") {
  const VoteConfig cfg;  // tau_c = 0.65
  auto single = [&](int count, int cardinality) {
    VoteMap v(16, 16);
    for (int k = 0; k < cardinality; ++k) {
      BinaryMask m(16, 16);
      if (k < count) m.set(3, 3, true);
      v.add(m);
    }
    return vote_threshold(v, cfg).at(3, 3);
  };
  CHECK(single(3, 4));         // 3 > 2.6
  CHECK_FALSE(single(2, 4));   // 2 > 2.6 is false
  VoteMap zero(16, 16);
  zero.add(BinaryMask(16, 16));
  CHECK_FALSE(vote_threshold(zero, cfg).any());
  CHECK_THROWS_AS(vote_threshold(VoteMap(16, 16), cfg), EmptySet);
}

TEST_CASE("vote_threshold is a per-pixel function of count, cardinality, tau_c") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> tau(0.05, 0.95);
  for (int t = 0; t < 25; ++t) {
    std::vector<BinaryMask> bdfs;
    const int n = 1 + t % 9;
    for (int k = 0; k < n; ++k) bdfs.push_back(random_mask(rng, 32, 32, 0.5));
    VoteConfig cfg{tau(rng)};
    const BinaryMask out = vote_threshold(accumulate_votes(bdfs), cfg);
    const auto counts = oracle::votes(bdfs);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      CHECK(out[i] == oracle::vote_pixel(counts[i], bdfs.size(), cfg.tau_c));
    }
  }
}

TEST_CASE("VoteConfig validation") {
  CHECK_NOTHROW(VoteConfig{}.validate());
  CHECK_THROWS_AS(VoteConfig{0.0}.validate(), ConfigError);
  CHECK_THROWS_AS(VoteConfig{1.0}.validate(), ConfigError);
}
