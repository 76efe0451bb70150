#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "dynamask/morphology.hpp"

namespace dynamask::cli {

struct ManifestInstance {
  int instance_id = 0;
  std::string mask_file;  // relative to the manifest's directory
  BoundingBox box;
  std::size_t area = 0;
};

struct ManifestImage {
  std::string image_path;  // source frame, as found on the input side
  std::string clip_id;
  int frame_index = 0;
  int width = 0;
  int height = 0;
  std::string mask_file;  // union mask, relative to the manifest's directory
  std::vector<ManifestInstance> instances;
};

// Minimal COCO-style export: images, annotations (bbox + mask file) and the
// single category "dynamic".
struct ExportManifest {
  std::vector<ManifestImage> images;

  std::string to_json() const;

  // Checks that every referenced file exists (IoError) and every box lies
  // inside its image (Error), then writes to_json() to <root>/manifest.json.
  void write(const std::filesystem::path& root) const;
};

}  // namespace dynamask::cli
