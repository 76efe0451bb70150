#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dynamask {

// Frames smaller than this on either side are rejected; 5x5 morphology and
// superpixels stop being meaningful below it.
inline constexpr int kMinFrameSide = 16;

// Identity of a frame: which clip it came from and its ordinal in that clip.
struct FrameRef {
  std::string clip_id;
  int frame_index = 0;

  auto operator<=>(const FrameRef&) const = default;
};

// Rec. 601 luma, rounded to nearest and clamped to [0,255].
std::uint8_t rec601_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// A decoded image. Always carries an 8-bit luminance plane; optionally an
// interleaved 8-bit RGB plane of the same dimensions. Immutable once built.
class Frame {
 public:
  Frame() = default;

  // Throws DimensionError if either side is below kMinFrameSide or the plane
  // length does not equal width * height.
  static Frame from_gray(int width, int height, std::vector<std::uint8_t> gray,
                         FrameRef ref = {});

  // `rgb` is interleaved R,G,B. The gray plane is derived with rec601_luma.
  static Frame from_rgb(int width, int height, std::vector<std::uint8_t> rgb,
                        FrameRef ref = {});

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return gray_.size(); }

  std::span<const std::uint8_t> gray() const { return gray_; }
  std::uint8_t gray_at(int x, int y) const {
    return gray_[static_cast<std::size_t>(y) * width_ + x];
  }

  bool has_color() const { return !color_.empty(); }
  // Interleaved RGB, empty when the frame is gray-only.
  std::span<const std::uint8_t> color() const { return color_; }

  const FrameRef& ref() const { return ref_; }
  const std::string& clip_id() const { return ref_.clip_id; }
  int frame_index() const { return ref_.frame_index; }

  Frame with_ref(FrameRef ref) const;

  friend Frame to_grayscale(const Frame& frame);

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> gray_;
  std::vector<std::uint8_t> color_;
  FrameRef ref_;
};

// Recomputes the gray plane from the color plane. Gray-only frames are
// returned unchanged.
Frame to_grayscale(const Frame& frame);

// Per-pixel dynamic (1) / static (0) classification.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool value = false);

  // Any nonzero entry of `bits` becomes 1.
  static BinaryMask from_bits(int width, int height,
                              std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  bool at(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
  void set(int x, int y, bool value) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }

  // One byte per pixel, each exactly 0 or 1.
  std::span<const std::uint8_t> bits() const { return bits_; }

  std::size_t count() const;
  bool any() const;
  bool same_shape(const BinaryMask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool is_subset_of(const BinaryMask& other) const;

  BinaryMask complement() const;
  BinaryMask& operator|=(const BinaryMask& other);
  BinaryMask& operator&=(const BinaryMask& other);

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Per-pixel integer ids, e.g. a semantic ground-truth labeling.
struct LabelRaster {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> ids;

  std::int32_t at(int x, int y) const {
    return ids[static_cast<std::size_t>(y) * width + x];
  }
};

}  // namespace dynamask
