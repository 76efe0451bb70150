#include "dynamask/config_file.hpp"

#include <fstream>
#include <string>

#include "dynamask/error.hpp"
#include "ini_reader.hpp"

namespace dynamask {

PipelineConfig parse_pipeline_config(std::istream& in, PipelineConfig cfg) {
  using Section = detail::Section<ConfigError>;
  const auto tree = detail::read_ini<ConfigError>(in, "config");

  for (const auto& [name, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + name + "' outside of any section");
    }
    Section sec(name, body);
    if (name == "vote") {
      sec.expect_keys({"tau_c"});
      sec.read("tau_c", cfg.vote.tau_c);
    } else if (name == "superpixel") {
      sec.expect_keys({"region_size", "compactness", "dynamic_fraction", "iterations",
                       "features"});
      sec.read("region_size", cfg.superpixel.target_region_size);
      sec.read("compactness", cfg.superpixel.compactness);
      sec.read("dynamic_fraction", cfg.superpixel.dynamic_fraction);
      sec.read("iterations", cfg.superpixel.iterations);
      if (sec.has("features")) {
        const std::string f = sec.text("features");
        if (f == "luma") {
          cfg.superpixel.features = SuperpixelFeatures::luma;
        } else if (f == "color") {
          cfg.superpixel.features = SuperpixelFeatures::color;
        } else {
          throw sec.bad_value("features", f);
        }
      }
    } else if (name == "morphology") {
      sec.expect_keys({"kernel_size", "min_component_fraction"});
      sec.read("kernel_size", cfg.morph.kernel_size);
      sec.read("min_component_fraction", cfg.morph.min_component_fraction);
    } else if (name == "pipeline") {
      sec.expect_keys({"tfs_count", "sampling", "seed", "dump_intermediates"});
      sec.read("tfs_count", cfg.tfs_count);
      sec.read("seed", cfg.seed);
      sec.read("dump_intermediates", cfg.dump_intermediates);
      if (sec.has("sampling")) {
        const std::string s = sec.text("sampling");
        if (s == "even") {
          cfg.sampling = TfsSampling::even;
        } else if (s == "random") {
          cfg.sampling = TfsSampling::random;
        } else {
          throw sec.bad_value("sampling", s);
        }
      }
    } else {
      throw ConfigError("unknown section '" + name + "'");
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_pipeline_config(in, std::move(base));
}

std::string default_config_text() {
  const PipelineConfig d;
  auto num = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s;
  };
  std::string out;
  out += "; dynamask pipeline configuration\n";
  out += "\n[vote]\n";
  out += "; vote fraction: a pixel is dynamic when its BDF vote count exceeds\n";
  out += "; tau_c x (number of BDFs)\n";
  out += "tau_c = " + num(d.vote.tau_c) + "\n";
  out += "\n[superpixel]\n";
  out += "; seed grid spacing in pixels\n";
  out += "region_size = " + std::to_string(d.superpixel.target_region_size) + "\n";
  out += "compactness = " + num(d.superpixel.compactness) + "\n";
  out += "; a superpixel becomes dynamic when more than this fraction of it is\n";
  out += "; dynamic (5%)\n";
  out += "dynamic_fraction = " + num(d.superpixel.dynamic_fraction) + "\n";
  out += "iterations = " + std::to_string(d.superpixel.iterations) + "\n";
  out += "; luma | color\n";
  out += "features = luma\n";
  out += "\n[morphology]\n";
  out += "; side of the square dilation/erosion kernel (5x5)\n";
  out += "kernel_size = " + std::to_string(d.morph.kernel_size) + "\n";
  out += "; components must exceed this fraction of the image area\n";
  out += "min_component_fraction = " + num(d.morph.min_component_fraction) + "\n";
  out += "\n[pipeline]\n";
  out += "; query frames sampled per clip\n";
  out += "tfs_count = " + std::to_string(d.tfs_count) + "\n";
  out += "; even | random\n";
  out += "sampling = even\n";
  out += "seed = " + std::to_string(d.seed) + "\n";
  out += "dump_intermediates = false\n";
  return out;
}

}  // namespace dynamask
