#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynamask/pipeline.hpp"

namespace dynamask::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kIoError = 2,
  kClipFailures = 3,  // some clips failed and were skipped
};

// Command-line values that take precedence over the config file.
struct ConfigOverrides {
  std::optional<double> tau_c;
  std::optional<int> superpixel_size;
  std::optional<double> min_component_fraction;
  std::optional<std::uint64_t> seed;
  bool dump_intermediates = false;
};

// Built-in defaults, then the config file (if any), then the overrides.
// Throws ConfigError or IoError.
PipelineConfig resolve_config(const std::optional<std::filesystem::path>& config_path,
                              const ConfigOverrides& overrides);

struct ExtractOptions {
  std::filesystem::path input_root;
  std::filesystem::path output_root;
  std::optional<std::filesystem::path> config_path;
  ConfigOverrides overrides;
  std::size_t jobs = 1;
};

// Input: one subdirectory per clip holding its frames. Output, per clip:
//   <out>/<clip>/masks/<clip>_<frame>.png
//   <out>/<clip>/instances/<clip>_<frame>_<instance>.png
//   <out>/<clip>/intermediates/<clip>_<frame>/...   (with dump_intermediates)
// plus <out>/manifest.json.
int cmd_extract(const ExtractOptions& opts);

enum class TruthKind {
  labels,  // label-id PNGs fused with the dynamic id set
  mask,    // binary masks (nonzero = dynamic)
};

struct EvalOptions {
  std::filesystem::path pred_root;
  std::filesystem::path truth_root;
  TruthKind truth_kind = TruthKind::labels;
  std::vector<std::int32_t> dynamic_ids;  // empty: Cityscapes default
  // First capture group of the match against the frame key names the group.
  std::string group_pattern = "^(.*)_[0-9]+$";
  std::string pred_suffix;   // stripped from file stems to form keys
  std::string truth_suffix;
  bool allow_partial = false;
  std::optional<std::filesystem::path> report_path;  // default <pred>/eval_report.json
  std::size_t jobs = 1;
};

// Frames are matched by key (file stem minus suffix). A prediction without
// ground truth is an error (kIoError) unless allow_partial is set; ground
// truth without a prediction is ignored. Prints the report table to `out`
// and writes the JSON report.
int cmd_eval(const EvalOptions& opts, std::ostream& out);

struct SynthOptions {
  std::filesystem::path spec_path;
  std::filesystem::path output_root;
  std::optional<std::uint64_t> seed;
};

// Writes <out>/frames/<clip>/frame_NNNN.png (extract's input layout) and
// <out>/truth/<clip>_NNNN.png (binary masks keyed like extract's output).
int cmd_synth(const SynthOptions& opts);

// "<clip>_<frame zero-padded to 4>"
std::string frame_key(const std::string& clip_id, int frame_index);

}  // namespace dynamask::cli
