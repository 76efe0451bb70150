#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>

#include "dynamask/image.hpp"

namespace dynamask {

// Last run of decimal digits in the file name's stem, e.g.
// "frame_0042.png" -> 42. Runs glued to letters ("leftImg8bit") are only
// used when no other run exists. Empty when the stem has no digits.
std::optional<int> parse_frame_index(std::string_view filename);

// Decodes a PNG or JPEG. The color plane is always populated (gray files are
// replicated to three channels) and the gray plane derived from it. clip_id
// is the parent directory name; frame_index comes from parse_frame_index, or
// 0 when the name has no digits.
//
// Throws IoError, DecodeError or DimensionError.
Frame load_frame(const std::filesystem::path& path);

// 8-bit single-channel PNG, 255 for dynamic and 0 for static.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

// Reads a mask written by save_mask (any nonzero pixel is dynamic).
BinaryMask load_mask(const std::filesystem::path& path);

void save_gray8(std::span<const std::uint8_t> pixels, int width, int height,
                const std::filesystem::path& path);
void save_gray16(std::span<const std::uint16_t> pixels, int width, int height,
                 const std::filesystem::path& path);

// 8- or 16-bit single-channel PNG of label ids.
LabelRaster load_label_raster(const std::filesystem::path& path);

}  // namespace dynamask
