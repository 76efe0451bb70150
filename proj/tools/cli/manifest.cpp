#include "cli/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "dynamask/error.hpp"

namespace dynamask::cli {

namespace fs = std::filesystem;

std::string ExportManifest::to_json() const {
  using nlohmann::json;
  json images = json::array();
  json annotations = json::array();
  int annotation_id = 1;
  for (std::size_t i = 0; i < this->images.size(); ++i) {
    const auto& img = this->images[i];
    const int image_id = static_cast<int>(i) + 1;
    images.push_back({{"id", image_id},
                      {"file_name", img.image_path},
                      {"width", img.width},
                      {"height", img.height},
                      {"clip_id", img.clip_id},
                      {"frame_index", img.frame_index},
                      {"mask_file", img.mask_file}});
    for (const auto& inst : img.instances) {
      annotations.push_back(
          {{"id", annotation_id++},
           {"image_id", image_id},
           {"instance_id", inst.instance_id},
           {"category_id", 1},
           {"bbox", {inst.box.x, inst.box.y, inst.box.width, inst.box.height}},
           {"area", inst.area},
           {"mask_file", inst.mask_file},
           {"iscrowd", 0}});
    }
  }
  json doc = {{"images", std::move(images)},
              {"annotations", std::move(annotations)},
              {"categories", json::array({{{"id", 1}, {"name", "dynamic"}}})}};
  return doc.dump(2);
}

void ExportManifest::write(const fs::path& root) const {
  auto require = [](const fs::path& p) {
    if (!fs::exists(p)) throw IoError("manifest references missing file '" + p.string() + "'");
  };
  for (const auto& img : images) {
    require(img.image_path);
    require(root / img.mask_file);
    for (const auto& inst : img.instances) {
      require(root / inst.mask_file);
      const auto& b = inst.box;
      if (b.x < 0 || b.y < 0 || b.width < 1 || b.height < 1 ||
          b.x + b.width > img.width || b.y + b.height > img.height) {
        throw Error("instance box outside image '" + img.image_path + "'");
      }
    }
  }
  const fs::path file = root / "manifest.json";
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  out << to_json() << '\n';
  if (!out) throw IoError("cannot write '" + file.string() + "'");
}

}  // namespace dynamask::cli
