#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynamask/image.hpp"

namespace dynamask {

// |query - other| over the gray planes of two frames of the same clip.
struct AbsDiffFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;
};

// Whole-image intensity statistics of one difference frame.
struct ThresholdStats {
  double mean = 0.0;
  double stddev = 0.0;  // population (1/N) estimator

  double threshold() const { return mean + stddev; }
};

struct VoteConfig {
  // A pixel is dynamic when its vote count exceeds tau_c * cardinality.
  double tau_c = 0.65;

  // Throws ConfigError unless 0 < tau_c < 1.
  void validate() const;
};

// Per-pixel count of how many binary difference frames marked the pixel.
class VoteMap {
 public:
  VoteMap() = default;
  VoteMap(int width, int height);

  // Throws DimensionMismatch if `bdf` has different dimensions.
  void add(const BinaryMask& bdf);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t cardinality() const { return cardinality_; }
  std::span<const std::uint32_t> counts() const { return counts_; }
  std::uint32_t count_at(int x, int y) const {
    return counts_[static_cast<std::size_t>(y) * width_ + x];
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::size_t cardinality_ = 0;
  std::vector<std::uint32_t> counts_;
};

// Throws DimensionMismatch or ClipMismatch.
AbsDiffFrame abs_diff(const Frame& query, const Frame& other);

ThresholdStats adf_stats(const AbsDiffFrame& adf);

// Marks pixels strictly above mean + stddev of this difference frame. A
// uniform frame therefore yields an all-static mask.
BinaryMask threshold_adf(const AbsDiffFrame& adf);

// Throws EmptySet for an empty collection, DimensionMismatch if sizes differ.
VoteMap accumulate_votes(std::span<const BinaryMask> bdfs);

// Strict: count > tau_c * cardinality. Requires cardinality >= 1.
BinaryMask vote_threshold(const VoteMap& votes, const VoteConfig& cfg);

}  // namespace dynamask
