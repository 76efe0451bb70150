#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dynamask/pipeline.hpp"

namespace dynamask {

// Overlays the keys found in an INI-style stream onto `base`:
//
//   [vote]        tau_c
//   [superpixel]  region_size compactness dynamic_fraction iterations features
//   [morphology]  kernel_size min_component_fraction
//   [pipeline]    tfs_count sampling seed dump_intermediates
//
// Unknown sections or keys and unparsable values throw ConfigError whose
// message names the key ("superpixel.region_size").
PipelineConfig parse_pipeline_config(std::istream& in,
                                     PipelineConfig base = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    PipelineConfig base = {});

// The built-in defaults written out as a commented config file.
std::string default_config_text();

}  // namespace dynamask
