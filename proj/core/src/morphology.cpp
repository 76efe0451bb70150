#include "dynamask/morphology.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "dynamask/error.hpp"

namespace dynamask {

namespace {

// Row-wise then column-wise window test over prefix counts. `all` selects
// erosion (every in-image neighbor set) versus dilation (any neighbor set);
// clipping the window makes out-of-image neighbors neutral for both.
std::vector<std::uint8_t> separable_pass(std::span<const std::uint8_t> in,
                                         int w, int h, int radius, bool all) {
  std::vector<std::uint8_t> tmp(in.size());
  std::vector<std::uint32_t> prefix(static_cast<std::size_t>(std::max(w, h)) + 1);

  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    prefix[0] = 0;
    for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + in[row + x];
    for (int x = 0; x < w; ++x) {
      const int lo = std::max(0, x - radius), hi = std::min(w - 1, x + radius);
      const std::uint32_t set = prefix[hi + 1] - prefix[lo];
      tmp[row + x] = all ? set == static_cast<std::uint32_t>(hi - lo + 1) : set > 0;
    }
  }

  std::vector<std::uint8_t> out(in.size());
  for (int x = 0; x < w; ++x) {
    prefix[0] = 0;
    for (int y = 0; y < h; ++y) {
      prefix[y + 1] = prefix[y] + tmp[static_cast<std::size_t>(y) * w + x];
    }
    for (int y = 0; y < h; ++y) {
      const int lo = std::max(0, y - radius), hi = std::min(h - 1, y + radius);
      const std::uint32_t set = prefix[hi + 1] - prefix[lo];
      out[static_cast<std::size_t>(y) * w + x] =
          all ? set == static_cast<std::uint32_t>(hi - lo + 1) : set > 0;
    }
  }
  return out;
}

// 8-connected labeling with ids in raster order of each component's first
// pixel (-1 is background), plus per-component area and bounding box.
struct Labeling {
  std::vector<std::int32_t> ids;
  std::vector<std::size_t> area;
  std::vector<BoundingBox> box;
};

// Full-frame mask of one labeled component.
Instance materialize(const Labeling& l, std::int32_t k, int w, int h) {
  Instance inst;
  inst.id = k;
  inst.area = l.area[k];
  inst.box = l.box[k];
  inst.mask = BinaryMask(w, h);
  const BoundingBox& b = l.box[k];
  for (int y = b.y; y < b.y + b.height; ++y) {
    for (int x = b.x; x < b.x + b.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (l.ids[i] == k) inst.mask.set(i, true);
    }
  }
  return inst;
}

std::size_t first_pixel(const Instance& inst) {
  const auto bits = inst.mask.bits();
  const std::size_t row = static_cast<std::size_t>(inst.box.y) * inst.mask.width();
  for (std::size_t i = row + inst.box.x; i < bits.size(); ++i) {
    if (bits[i]) return i;
  }
  return bits.size();
}

Labeling label_components(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  const std::size_t n = mask.size();

  // Provisional labels start at 1; 0 is background.
  std::vector<std::uint32_t> label(n, 0);
  std::vector<std::uint32_t> parent{0};
  auto find = [&](std::uint32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!mask[i]) continue;
      // Already-visited 8-neighbors: W, NW, N, NE.
      std::uint32_t nb[4] = {0, 0, 0, 0};
      if (x > 0) nb[0] = label[i - 1];
      if (y > 0) {
        const std::size_t up = i - w;
        if (x > 0) nb[1] = label[up - 1];
        nb[2] = label[up];
        if (x + 1 < w) nb[3] = label[up + 1];
      }
      std::uint32_t best = 0;
      for (auto l : nb) {
        if (l != 0 && (best == 0 || l < best)) best = l;
      }
      if (best == 0) {
        best = static_cast<std::uint32_t>(parent.size());
        parent.push_back(best);
      } else {
        for (auto l : nb) {
          if (l != 0) unite(best, l);
        }
      }
      label[i] = best;
    }
  }

  // Final ids in raster order of each component's first pixel.
  std::vector<std::int32_t> id_of_root(parent.size(), -1);
  Labeling out;
  out.ids.assign(n, -1);
  std::vector<int> x1, y1;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] == 0) continue;
    const auto r = find(label[i]);
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    if (id_of_root[r] < 0) {
      id_of_root[r] = static_cast<std::int32_t>(out.area.size());
      out.area.push_back(0);
      out.box.push_back({x, y, 1, 1});
      x1.push_back(x);
      y1.push_back(y);
    }
    const auto k = id_of_root[r];
    out.ids[i] = k;
    ++out.area[k];
    out.box[k].x = std::min(out.box[k].x, x);
    x1[k] = std::max(x1[k], x);
    y1[k] = y;
  }
  for (std::size_t k = 0; k < out.box.size(); ++k) {
    out.box[k].width = x1[k] - out.box[k].x + 1;
    out.box[k].height = y1[k] - out.box[k].y + 1;
  }
  return out;
}

}  // namespace

void MorphConfig::validate() const {
  if (kernel_size < 3 || kernel_size % 2 == 0) {
    throw ConfigError("morphology.kernel_size must be odd and >= 3, got " +
                      std::to_string(kernel_size));
  }
  if (!(min_component_fraction > 0.0 && min_component_fraction < 1.0)) {
    throw ConfigError("morphology.min_component_fraction must lie in (0, 1)");
  }
}

BinaryMask InstanceSet::union_mask() const {
  BinaryMask out(width, height);
  for (const auto& inst : instances) out |= inst.mask;
  return out;
}

InstanceSet connected_components(const BinaryMask& mask) {
  const Labeling l = label_components(mask);
  InstanceSet out;
  out.width = mask.width();
  out.height = mask.height();
  out.instances.reserve(l.area.size());
  for (std::size_t k = 0; k < l.area.size(); ++k) {
    out.instances.push_back(materialize(l, static_cast<std::int32_t>(k), mask.width(), mask.height()));
  }
  return out;
}

BinaryMask dilate(const BinaryMask& mask, const MorphConfig& cfg) {
  cfg.validate();
  return BinaryMask::from_bits(
      mask.width(), mask.height(),
      separable_pass(mask.bits(), mask.width(), mask.height(),
                     cfg.kernel_size / 2, false));
}

BinaryMask erode(const BinaryMask& mask, const MorphConfig& cfg) {
  cfg.validate();
  return BinaryMask::from_bits(
      mask.width(), mask.height(),
      separable_pass(mask.bits(), mask.width(), mask.height(),
                     cfg.kernel_size / 2, true));
}

InstanceSet filter_components(InstanceSet instances, const MorphConfig& cfg,
                              std::size_t image_area) {
  const double min_area =
      cfg.min_component_fraction * static_cast<double>(image_area);
  std::erase_if(instances.instances, [&](const Instance& inst) {
    return !(static_cast<double>(inst.area) > min_area);
  });
  int next = 0;
  for (auto& inst : instances.instances) inst.id = next++;
  return instances;
}

InstanceSet refine(const BinaryMask& mask, const MorphConfig& cfg) {
  cfg.validate();
  const int w = mask.width(), h = mask.height();
  const Labeling dilated = label_components(dilate(mask, cfg));
  const double min_area = cfg.min_component_fraction * static_cast<double>(mask.size());

  InstanceSet out;
  out.width = w;
  out.height = h;
  for (std::size_t k = 0; k < dilated.area.size(); ++k) {
    if (!(static_cast<double>(dilated.area[k]) > min_area)) continue;
    const Instance comp = materialize(dilated, static_cast<std::int32_t>(k), w, h);
    BinaryMask eroded = erode(comp.mask, cfg);
    if (!eroded.any()) continue;
    InstanceSet pieces = connected_components(eroded);
    for (auto& piece : pieces.instances) out.instances.push_back(std::move(piece));
  }

  std::vector<std::size_t> order(out.instances.size());
  std::vector<std::size_t> first(out.instances.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    order[k] = k;
    first[k] = first_pixel(out.instances[k]);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return first[a] < first[b]; });
  std::vector<Instance> sorted;
  sorted.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted.push_back(std::move(out.instances[order[k]]));
    sorted.back().id = static_cast<int>(k);
  }
  out.instances = std::move(sorted);
  return out;
}

}  // namespace dynamask
