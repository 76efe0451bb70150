#include "dynamask/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynamask/error.hpp"

namespace dynamask {

namespace {

void check_frame_dims(int width, int height, std::size_t plane_len,
                      std::size_t channels) {
  if (width < kMinFrameSide || height < kMinFrameSide) {
    throw DimensionError("frame " + std::to_string(width) + "x" +
                         std::to_string(height) + " is below the minimum " +
                         std::to_string(kMinFrameSide) + "x" +
                         std::to_string(kMinFrameSide));
  }
  if (plane_len != static_cast<std::size_t>(width) * height * channels) {
    throw DimensionError("plane length does not match frame dimensions");
  }
}

std::vector<std::uint8_t> luma_plane(std::span<const std::uint8_t> rgb) {
  std::vector<std::uint8_t> gray(rgb.size() / 3);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = rec601_luma(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
  }
  return gray;
}

}  // namespace

std::uint8_t rec601_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
}

Frame Frame::from_gray(int width, int height, std::vector<std::uint8_t> gray,
                       FrameRef ref) {
  check_frame_dims(width, height, gray.size(), 1);
  Frame f;
  f.width_ = width;
  f.height_ = height;
  f.gray_ = std::move(gray);
  f.ref_ = std::move(ref);
  return f;
}

Frame Frame::from_rgb(int width, int height, std::vector<std::uint8_t> rgb,
                      FrameRef ref) {
  check_frame_dims(width, height, rgb.size(), 3);
  Frame f;
  f.width_ = width;
  f.height_ = height;
  f.gray_ = luma_plane(rgb);
  f.color_ = std::move(rgb);
  f.ref_ = std::move(ref);
  return f;
}

Frame Frame::with_ref(FrameRef ref) const {
  Frame f = *this;
  f.ref_ = std::move(ref);
  return f;
}

Frame to_grayscale(const Frame& frame) {
  Frame f = frame;
  if (f.has_color()) f.gray_ = luma_plane(f.color_);
  return f;
}

BinaryMask::BinaryMask(int width, int height, bool value)
    : width_(width),
      height_(height),
      bits_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0),
            value ? 1 : 0) {
  if (width < 0 || height < 0) {
    throw DimensionError("negative mask dimensions");
  }
}

BinaryMask BinaryMask::from_bits(int width, int height,
                                 std::vector<std::uint8_t> bits) {
  if (width < 0 || height < 0 ||
      bits.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("mask bit count does not match dimensions");
  }
  for (auto& b : bits) b = b != 0 ? 1 : 0;
  BinaryMask m;
  m.width_ = width;
  m.height_ = height;
  m.bits_ = std::move(bits);
  return m;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool BinaryMask::any() const {
  return std::find(bits_.begin(), bits_.end(), 1) != bits_.end();
}

bool BinaryMask::is_subset_of(const BinaryMask& other) const {
  if (!same_shape(other)) throw DimensionMismatch("mask dimensions differ");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

BinaryMask BinaryMask::complement() const {
  BinaryMask m = *this;
  for (auto& b : m.bits_) b ^= 1;
  return m;
}

BinaryMask& BinaryMask::operator|=(const BinaryMask& other) {
  if (!same_shape(other)) throw DimensionMismatch("mask dimensions differ");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

BinaryMask& BinaryMask::operator&=(const BinaryMask& other) {
  if (!same_shape(other)) throw DimensionMismatch("mask dimensions differ");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
  return *this;
}

}  // namespace dynamask
