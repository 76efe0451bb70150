#include "dynamask/image_io.hpp"

#include <cctype>
#include <fstream>
#include <string>
#include <system_error>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "dynamask/error.hpp"

namespace dynamask {

namespace fs = std::filesystem;

namespace {

void require_readable(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw IoError("cannot read '" + path.string() + "': no such file");
  }
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open '" + path.string() + "'");
}

void write_png(const cv::Mat& img, const fs::path& path) {
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), img);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write '" + path.string() + "': " + e.what());
  }
  if (!ok) throw IoError("cannot write '" + path.string() + "'");
}

cv::Mat read_image(const fs::path& path, int flags) {
  require_readable(path);
  cv::Mat img;
  try {
    img = cv::imread(path.string(), flags);
  } catch (const cv::Exception& e) {
    throw DecodeError("cannot decode '" + path.string() + "': " + e.what());
  }
  if (img.empty()) throw DecodeError("cannot decode '" + path.string() + "'");
  return img;
}

}  // namespace

std::optional<int> parse_frame_index(std::string_view filename) {
  const std::string stem = fs::path(filename).stem().string();
  const auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  const auto alpha = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; };
  // Prefer the last digit run standing alone ("leftImg8bit" is not an index).
  std::optional<std::pair<std::size_t, std::size_t>> last, last_token;
  for (std::size_t i = 0; i < stem.size();) {
    if (!digit(stem[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < stem.size() && digit(stem[j])) ++j;
    last = {i, j};
    if ((i == 0 || !alpha(stem[i - 1])) && (j == stem.size() || !alpha(stem[j]))) {
      last_token = last;
    }
    i = j;
  }
  const auto run = last_token ? last_token : last;
  if (!run) return std::nullopt;
  try {
    return std::stoi(stem.substr(run->first, run->second - run->first));
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

Frame load_frame(const fs::path& path) {
  const cv::Mat bgr = read_image(path, cv::IMREAD_COLOR);
  if (bgr.cols < kMinFrameSide || bgr.rows < kMinFrameSide) {
    throw DimensionError("'" + path.string() + "' is " +
                         std::to_string(bgr.cols) + "x" +
                         std::to_string(bgr.rows) + ", below the minimum " +
                         std::to_string(kMinFrameSide) + "x" +
                         std::to_string(kMinFrameSide));
  }
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(bgr.cols) *
                                bgr.rows * 3);
  std::size_t k = 0;
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      rgb[k++] = row[x][2];
      rgb[k++] = row[x][1];
      rgb[k++] = row[x][0];
    }
  }
  FrameRef ref{path.parent_path().filename().string(),
               parse_frame_index(path.filename().string()).value_or(0)};
  return Frame::from_rgb(bgr.cols, bgr.rows, std::move(rgb), std::move(ref));
}

void save_mask(const BinaryMask& mask, const fs::path& path) {
  cv::Mat img(mask.height(), mask.width(), CV_8UC1);
  const auto bits = mask.bits();
  for (int y = 0; y < mask.height(); ++y) {
    auto* row = img.ptr<std::uint8_t>(y);
    for (int x = 0; x < mask.width(); ++x) {
      row[x] = bits[static_cast<std::size_t>(y) * mask.width() + x] ? 255 : 0;
    }
  }
  write_png(img, path);
}

BinaryMask load_mask(const fs::path& path) {
  const cv::Mat img = read_image(path, cv::IMREAD_GRAYSCALE);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(img.cols) *
                                 img.rows);
  for (int y = 0; y < img.rows; ++y) {
    const auto* row = img.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.cols; ++x) {
      bits[static_cast<std::size_t>(y) * img.cols + x] = row[x] != 0;
    }
  }
  return BinaryMask::from_bits(img.cols, img.rows, std::move(bits));
}

void save_gray8(std::span<const std::uint8_t> pixels, int width, int height,
                const fs::path& path) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("pixel count does not match dimensions");
  }
  cv::Mat img(height, width, CV_8UC1,
              const_cast<std::uint8_t*>(pixels.data()));
  write_png(img, path);
}

void save_gray16(std::span<const std::uint16_t> pixels, int width, int height,
                 const fs::path& path) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("pixel count does not match dimensions");
  }
  cv::Mat img(height, width, CV_16UC1,
              const_cast<std::uint16_t*>(pixels.data()));
  write_png(img, path);
}

LabelRaster load_label_raster(const fs::path& path) {
  const cv::Mat img = read_image(path, cv::IMREAD_UNCHANGED);
  if (img.channels() != 1) {
    throw DecodeError("'" + path.string() +
                      "' is not a single-channel label image");
  }
  LabelRaster out{img.cols, img.rows, {}};
  out.ids.resize(static_cast<std::size_t>(img.cols) * img.rows);
  std::size_t k = 0;
  for (int y = 0; y < img.rows; ++y) {
    for (int x = 0; x < img.cols; ++x) {
      switch (img.depth()) {
        case CV_8U: out.ids[k++] = img.at<std::uint8_t>(y, x); break;
        case CV_16U: out.ids[k++] = img.at<std::uint16_t>(y, x); break;
        default:
          throw DecodeError("'" + path.string() +
                            "' must be an 8- or 16-bit label image");
      }
    }
  }
  return out;
}

}  // namespace dynamask
