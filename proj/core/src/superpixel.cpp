#include "dynamask/superpixel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "dynamask/error.hpp"

namespace dynamask {

namespace {

constexpr int kMaxChannels = 3;

struct Center {
  std::array<double, kMaxChannels> feat{};
  double x = 0.0;
  double y = 0.0;
};

// Per-pixel feature planes, channel-major.
struct Features {
  int channels = 1;
  std::vector<double> data;

  double at(int c, std::size_t i, std::size_t n) const { return data[c * n + i]; }
};

Features make_features(const Frame& frame, SuperpixelFeatures kind) {
  const std::size_t n = frame.pixel_count();
  Features f;
  if (kind == SuperpixelFeatures::color && frame.has_color()) {
    f.channels = 3;
    f.data.resize(3 * n);
    const auto rgb = frame.color();
    for (std::size_t i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) f.data[c * n + i] = rgb[3 * i + c];
    }
  } else {
    f.channels = 1;
    const auto gray = frame.gray();
    f.data.assign(gray.begin(), gray.end());
  }
  return f;
}

double gradient_at(const Features& f, int w, int h, int x, int y) {
  const std::size_t n = static_cast<std::size_t>(w) * h;
  auto idx = [w](int xx, int yy) { return static_cast<std::size_t>(yy) * w + xx; };
  const int xl = std::max(x - 1, 0), xr = std::min(x + 1, w - 1);
  const int yu = std::max(y - 1, 0), yd = std::min(y + 1, h - 1);
  double g = 0.0;
  for (int c = 0; c < f.channels; ++c) {
    const double dx = f.at(c, idx(xr, y), n) - f.at(c, idx(xl, y), n);
    const double dy = f.at(c, idx(x, yd), n) - f.at(c, idx(x, yu), n);
    g += dx * dx + dy * dy;
  }
  return g;
}

// Grid seeds at cell centers, each nudged to the lowest-gradient pixel of
// its 3x3 neighborhood (kept in place on ties).
std::vector<Center> seed_centers(const Features& f, int w, int h, int step,
                                 int& cells_x, int& cells_y) {
  cells_x = std::max(1, w / step);
  cells_y = std::max(1, h / step);
  const double sx = static_cast<double>(w) / cells_x;
  const double sy = static_cast<double>(h) / cells_y;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  std::vector<Center> centers;
  centers.reserve(static_cast<std::size_t>(cells_x) * cells_y);
  for (int gy = 0; gy < cells_y; ++gy) {
    for (int gx = 0; gx < cells_x; ++gx) {
      Center c;
      c.x = (gx + 0.5) * sx - 0.5;
      c.y = (gy + 0.5) * sy - 0.5;
      int px = std::clamp(static_cast<int>(std::lround(c.x)), 0, w - 1);
      int py = std::clamp(static_cast<int>(std::lround(c.y)), 0, h - 1);
      double best = gradient_at(f, w, h, px, py);
      int bx = px, by = py;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = px + dx, ny = py + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const double g = gradient_at(f, w, h, nx, ny);
          if (g < best) {
            best = g;
            bx = nx;
            by = ny;
          }
        }
      }
      if (bx != px || by != py) {
        c.x = bx;
        c.y = by;
      }
      const std::size_t i = static_cast<std::size_t>(by) * w + bx;
      for (int ch = 0; ch < f.channels; ++ch) c.feat[ch] = f.at(ch, i, n);
      centers.push_back(c);
    }
  }
  return centers;
}

// Labels the 4-connected components of a label map; ids follow raster order
// of each component's first pixel.
std::vector<std::int32_t> label_components4(const std::vector<std::int32_t>& labels,
                                            int w, int h, int& count) {
  std::vector<std::int32_t> cc(labels.size(), -1);
  std::vector<std::size_t> stack;
  count = 0;
  for (std::size_t start = 0; start < labels.size(); ++start) {
    if (cc[start] >= 0) continue;
    const std::int32_t id = count++;
    const std::int32_t value = labels[start];
    cc[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      const std::size_t nbrs[4] = {p - 1, p + 1, p - w, p + w};
      const bool valid[4] = {x > 0, x + 1 < w, y > 0, y + 1 < h};
      for (int k = 0; k < 4; ++k) {
        if (!valid[k]) continue;
        const std::size_t q = nbrs[k];
        if (cc[q] < 0 && labels[q] == value) {
          cc[q] = id;
          stack.push_back(q);
        }
      }
    }
  }
  return cc;
}

// Splits every label into its 4-connected pieces, then merges fragments
// (pieces other than a label's largest) smaller than `min_size` into the
// adjacent piece sharing the longest boundary (lowest id on ties). Returns
// compact ids in raster order.
int enforce_connectivity(std::vector<std::int32_t>& labels, int w, int h,
                         std::size_t min_size) {
  int count = 0;
  const auto cc = label_components4(labels, w, h, count);

  std::vector<std::size_t> size(count, 0);
  std::vector<std::size_t> offset(count + 1, 0);
  for (auto id : cc) ++size[id];
  for (int i = 0; i < count; ++i) offset[i + 1] = offset[i] + size[i];
  std::vector<std::size_t> pixels(labels.size());
  {
    auto fill = offset;
    for (std::size_t p = 0; p < cc.size(); ++p) pixels[fill[cc[p]]++] = p;
  }

  std::vector<std::int32_t> parent(count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  std::vector<std::size_t> root_size = size;

  // The largest piece of each k-means label is its body; the other pieces
  // are orphaned fragments and only those are merged away.
  std::vector<std::int32_t> body;
  for (std::int32_t piece = 0; piece < count; ++piece) {
    const auto label = static_cast<std::size_t>(labels[pixels[offset[piece]]]);
    if (label >= body.size()) body.resize(label + 1, -1);
    if (body[label] < 0 || size[piece] > size[body[label]]) body[label] = piece;
  }

  std::vector<std::size_t> shared(count, 0);
  std::vector<std::int32_t> touched;
  for (std::int32_t piece = 0; piece < count; ++piece) {
    const std::int32_t root = find(piece);
    if (body[labels[pixels[offset[piece]]]] == piece) continue;
    if (root_size[root] >= min_size) continue;

    touched.clear();
    for (std::size_t k = offset[piece]; k < offset[piece + 1]; ++k) {
      const std::size_t p = pixels[k];
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      const std::size_t nbrs[4] = {p - 1, p + 1, p - w, p + w};
      const bool valid[4] = {x > 0, x + 1 < w, y > 0, y + 1 < h};
      for (int j = 0; j < 4; ++j) {
        if (!valid[j]) continue;
        const std::int32_t other = find(cc[nbrs[j]]);
        if (other == root) continue;
        if (shared[other]++ == 0) touched.push_back(other);
      }
    }
    if (touched.empty()) continue;  // whole image; cannot happen when min_size <= w*h

    std::int32_t target = touched.front();
    for (auto t : touched) {
      if (shared[t] > shared[target] ||
          (shared[t] == shared[target] && t < target)) {
        target = t;
      }
    }
    for (auto t : touched) shared[t] = 0;

    parent[root] = target;
    root_size[target] += root_size[root];
  }

  std::vector<std::int32_t> compact(count, -1);
  int regions = 0;
  for (std::size_t p = 0; p < labels.size(); ++p) {
    const std::int32_t r = find(cc[p]);
    if (compact[r] < 0) compact[r] = regions++;
    labels[p] = compact[r];
  }
  return regions;
}

}  // namespace

void SuperpixelConfig::validate() const {
  if (target_region_size < 4) {
    throw ConfigError("superpixel.region_size must be >= 4, got " +
                      std::to_string(target_region_size));
  }
  if (!(compactness > 0.0)) {
    throw ConfigError("superpixel.compactness must be > 0");
  }
  if (!(dynamic_fraction > 0.0 && dynamic_fraction < 1.0)) {
    throw ConfigError("superpixel.dynamic_fraction must lie in (0, 1)");
  }
  if (iterations < 1) {
    throw ConfigError("superpixel.iterations must be >= 1");
  }
}

SuperpixelLabeling segment(const Frame& frame, const SuperpixelConfig& cfg) {
  cfg.validate();
  const int w = frame.width(), h = frame.height();
  const int step = cfg.target_region_size;
  if (w < step || h < step) {
    throw DimensionError("frame " + std::to_string(w) + "x" +
                         std::to_string(h) + " is smaller than the superpixel size " +
                         std::to_string(step));
  }
  const std::size_t n = frame.pixel_count();
  const Features feat = make_features(frame, cfg.features);

  int cells_x = 0, cells_y = 0;
  std::vector<Center> centers = seed_centers(feat, w, h, step, cells_x, cells_y);
  const std::size_t k_count = centers.size();

  // Start from the seed grid cells so pixels outside every search window
  // still carry a label.
  std::vector<std::int32_t> labels(n);
  {
    const double sx = static_cast<double>(w) / cells_x;
    const double sy = static_cast<double>(h) / cells_y;
    for (int y = 0; y < h; ++y) {
      const int gy = std::min(cells_y - 1, static_cast<int>(y / sy));
      for (int x = 0; x < w; ++x) {
        const int gx = std::min(cells_x - 1, static_cast<int>(x / sx));
        labels[static_cast<std::size_t>(y) * w + x] = gy * cells_x + gx;
      }
    }
  }

  const double spatial_weight =
      (cfg.compactness * cfg.compactness) / (static_cast<double>(step) * step);
  std::vector<double> dist(n);
  std::vector<std::array<double, kMaxChannels + 3>> sums(k_count);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());

    // Clusters in ascending id with a strict comparison: ties go to the
    // lowest id.
    for (std::size_t k = 0; k < k_count; ++k) {
      const Center& c = centers[k];
      const int x0 = std::max(0, static_cast<int>(std::floor(c.x - step)));
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(c.x + step)));
      const int y0 = std::max(0, static_cast<int>(std::floor(c.y - step)));
      const int y1 = std::min(h - 1, static_cast<int>(std::ceil(c.y + step)));
      for (int y = y0; y <= y1; ++y) {
        const double dy = y - c.y;
        for (int x = x0; x <= x1; ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          double dc = 0.0;
          for (int ch = 0; ch < feat.channels; ++ch) {
            const double d = feat.at(ch, i, n) - c.feat[ch];
            dc += d * d;
          }
          const double dx = x - c.x;
          const double d = dc + (dx * dx + dy * dy) * spatial_weight;
          if (d < dist[i]) {
            dist[i] = d;
            labels[i] = static_cast<std::int32_t>(k);
          }
        }
      }
    }

    for (auto& s : sums) s.fill(0.0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        auto& s = sums[labels[i]];
        for (int ch = 0; ch < feat.channels; ++ch) s[ch] += feat.at(ch, i, n);
        s[kMaxChannels] += x;
        s[kMaxChannels + 1] += y;
        s[kMaxChannels + 2] += 1.0;
      }
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      const auto& s = sums[k];
      const double cnt = s[kMaxChannels + 2];
      if (cnt == 0.0) continue;  // empty cluster keeps its last center
      for (int ch = 0; ch < feat.channels; ++ch) centers[k].feat[ch] = s[ch] / cnt;
      centers[k].x = s[kMaxChannels] / cnt;
      centers[k].y = s[kMaxChannels + 1] / cnt;
    }
  }

  const std::size_t min_size =
      std::max<std::size_t>(1, static_cast<std::size_t>(step) * step / 4);
  const int regions = enforce_connectivity(labels, w, h, min_size);
  return SuperpixelLabeling{w, h, std::move(labels), regions};
}

BinaryMask promote_regions(const SuperpixelLabeling& labels,
                           const BinaryMask& votes_mask,
                           const SuperpixelConfig& cfg) {
  if (labels.width != votes_mask.width() || labels.height != votes_mask.height()) {
    throw DimensionMismatch("labeling and vote mask dimensions differ");
  }
  std::vector<std::size_t> area(labels.region_count, 0);
  std::vector<std::size_t> dynamic(labels.region_count, 0);
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const auto r = labels.labels[i];
    ++area[r];
    dynamic[r] += votes_mask[i] ? 1 : 0;
  }
  std::vector<std::uint8_t> promoted(labels.region_count, 0);
  for (int r = 0; r < labels.region_count; ++r) {
    if (area[r] == 0) continue;
    const double fraction =
        static_cast<double>(dynamic[r]) / static_cast<double>(area[r]);
    promoted[r] = fraction > cfg.dynamic_fraction ? 1 : 0;
  }
  BinaryMask out(labels.width, labels.height);
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    out.set(i, promoted[labels.labels[i]] != 0);
  }
  return out;
}

BinaryMask promote(const SuperpixelLabeling& labels, const BinaryMask& votes_mask,
                   const SuperpixelConfig& cfg) {
  return fill_holes(promote_regions(labels, votes_mask, cfg));
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  if (mask.size() == 0) return mask;
  std::vector<std::uint8_t> outside(mask.size(), 0);
  std::deque<std::size_t> queue;
  auto seed = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    if (!mask[i] && !outside[i]) {
      outside[i] = 1;
      queue.push_back(i);
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
    if (x > 0) seed(x - 1, y);
    if (x + 1 < w) seed(x + 1, y);
    if (y > 0) seed(x, y - 1);
    if (y + 1 < h) seed(x, y + 1);
  }
  BinaryMask out = mask;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!outside[i]) out.set(i, true);
  }
  return out;
}

}  // namespace dynamask
