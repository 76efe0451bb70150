#pragma once

#include <cstdint>
#include <vector>

#include "dynamask/image.hpp"

namespace dynamask {

enum class SuperpixelFeatures {
  luma,   // (gray, x, y)
  color,  // (R, G, B, x, y); falls back to luma on gray-only frames
};

struct SuperpixelConfig {
  int target_region_size = 32;  // seed grid spacing in pixels
  double compactness = 10.0;
  // A region is promoted when its dynamic fraction strictly exceeds this.
  double dynamic_fraction = 0.05;
  int iterations = 10;
  SuperpixelFeatures features = SuperpixelFeatures::luma;

  void validate() const;
};

// Over-segmentation of a frame. Labels are in [0, region_count), every
// region is non-empty and 4-connected, and ids follow the raster order of
// each region's first pixel.
struct SuperpixelLabeling {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;
  int region_count = 0;

  std::int32_t label_at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
};

// SLIC k-means seeded on a regular grid, followed by connectivity
// enforcement. Deterministic for a given (frame, cfg). Throws DimensionError
// when the frame is smaller than target_region_size on either axis.
SuperpixelLabeling segment(const Frame& frame, const SuperpixelConfig& cfg);

// Region-level promotion without hole filling: each region becomes all
// dynamic when its dynamic fraction exceeds cfg.dynamic_fraction, else all
// static.
BinaryMask promote_regions(const SuperpixelLabeling& labels,
                           const BinaryMask& votes_mask,
                           const SuperpixelConfig& cfg);

// promote_regions followed by fill_holes. Throws DimensionMismatch.
BinaryMask promote(const SuperpixelLabeling& labels,
                   const BinaryMask& votes_mask, const SuperpixelConfig& cfg);

// Static pixels not 4-connected to the image border become dynamic.
BinaryMask fill_holes(const BinaryMask& mask);

}  // namespace dynamask
