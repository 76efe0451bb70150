#pragma once

#include <cstddef>
#include <vector>

#include "dynamask/image.hpp"

namespace dynamask {

struct MorphConfig {
  int kernel_size = 5;  // side of the square structuring element
  // Components must cover more than this fraction of the image to be kept.
  double min_component_fraction = 0.001;
  static constexpr int connectivity = 8;

  void validate() const;
};

struct BoundingBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// One 8-connected dynamic component.
struct Instance {
  int id = 0;
  BinaryMask mask;  // full-frame mask with only this component set
  BoundingBox box;
  std::size_t area = 0;
};

// Pairwise disjoint instances of one frame, ids 0..n-1 in raster order of
// each instance's first pixel.
struct InstanceSet {
  FrameRef frame;
  int width = 0;
  int height = 0;
  std::vector<Instance> instances;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
  BinaryMask union_mask() const;
};

// 8-connected labeling of the dynamic pixels (two-pass with union-find).
InstanceSet connected_components(const BinaryMask& mask);

// Square-kernel dilation; the kernel is clipped at the image border.
BinaryMask dilate(const BinaryMask& mask, const MorphConfig& cfg);

// Square-kernel erosion; neighbors outside the image count as dynamic.
BinaryMask erode(const BinaryMask& mask, const MorphConfig& cfg);

// Keeps instances whose area exceeds min_component_fraction * image_area and
// renumbers the survivors.
InstanceSet filter_components(InstanceSet instances, const MorphConfig& cfg,
                              std::size_t image_area);

// dilate -> connected_components -> filter_components -> erode each kept
// component on its own. A component whose erosion is empty is dropped; one
// whose erosion falls apart is split into one instance per 8-connected piece.
InstanceSet refine(const BinaryMask& mask, const MorphConfig& cfg);

}  // namespace dynamask
