#include "cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <regex>
#include <set>

#include <spdlog/spdlog.h>

#include "cli/manifest.hpp"
#include "dynamask/config_file.hpp"
#include "dynamask/error.hpp"
#include "dynamask/evaluation.hpp"
#include "dynamask/image_io.hpp"
#include "dynamask/parallel.hpp"
#include "dynamask/synthgen.hpp"

namespace dynamask::cli {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_image_file(const fs::path& p) {
  const std::string ext = lower(p.extension().string());
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::string padded(int v, int width = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*d", width, v);
  return buf;
}

struct LoadedClip {
  std::vector<Frame> frames;
  std::map<int, std::string> sources;  // frame_index -> file
};

// Frames of one clip directory, ordered by the index in their file names.
// Names without digits, or duplicate indices, fall back to name order.
LoadedClip load_clip_frames(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  LoadedClip clip;
  clip.frames.reserve(files.size());
  for (const auto& f : files) clip.frames.push_back(load_frame(f));

  std::set<int> seen;
  bool indexed = true;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!parse_frame_index(files[i].filename().string()) ||
        !seen.insert(clip.frames[i].frame_index()).second) {
      indexed = false;
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!indexed) {
      clip.frames[i] = clip.frames[i].with_ref({clip.frames[i].clip_id(), static_cast<int>(i)});
    }
    clip.sources[clip.frames[i].frame_index()] = files[i].string();
  }
  std::stable_sort(clip.frames.begin(), clip.frames.end(), [](const Frame& a, const Frame& b) {
    return a.frame_index() < b.frame_index();
  });
  return clip;
}

void dump_intermediates(const Intermediates& inter, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t k = 0; k < inter.adfs.size(); ++k) {
    const auto& adf = inter.adfs[k];
    const std::string other = padded(inter.other_frame_indices[k]);
    save_gray8(adf.values, adf.width, adf.height, dir / ("adf_" + other + ".png"));
    save_mask(inter.bdfs[k], dir / ("bdf_" + other + ".png"));
  }
  const auto counts = inter.votes.counts();
  std::vector<std::uint16_t> votes(counts.size());
  std::transform(counts.begin(), counts.end(), votes.begin(), [](std::uint32_t c) {
    return static_cast<std::uint16_t>(std::min<std::uint32_t>(c, 65535));
  });
  save_gray16(votes, inter.votes.width(), inter.votes.height(), dir / "votes.png");
  save_mask(inter.vote_mask, dir / "vote_mask.png");

  std::vector<std::uint16_t> labels(inter.labeling.labels.size());
  std::transform(inter.labeling.labels.begin(), inter.labeling.labels.end(), labels.begin(),
                 [](std::int32_t l) { return static_cast<std::uint16_t>(l); });
  save_gray16(labels, inter.labeling.width, inter.labeling.height, dir / "superpixels.png");
  save_mask(inter.promoted, dir / "promoted.png");
}

struct ClipOutcome {
  std::vector<ManifestImage> images;
  std::size_t instances = 0;
};

ClipOutcome process_clip(const fs::path& clip_dir, const fs::path& output_root,
                         const PipelineConfig& cfg, std::size_t jobs) {
  const std::string clip_id = clip_dir.filename().string();
  LoadedClip loaded = load_clip_frames(clip_dir);
  ClipFrameSet clip(clip_id, std::move(loaded.frames));
  clip = sample_tfs(std::move(clip), cfg.tfs_count, cfg.sampling, cfg.seed);
  const auto results = extract_clip(clip, cfg, jobs);

  const fs::path clip_out = output_root / clip_id;
  fs::create_directories(clip_out / "masks");
  fs::create_directories(clip_out / "instances");

  ClipOutcome outcome;
  for (const auto& r : results) {
    const std::string key = frame_key(clip_id, r.frame_index);
    const fs::path mask_rel = fs::path(clip_id) / "masks" / (key + ".png");
    save_mask(r.mask, output_root / mask_rel);

    ManifestImage img;
    img.image_path = loaded.sources.at(r.frame_index);
    img.clip_id = clip_id;
    img.frame_index = r.frame_index;
    img.width = r.mask.width();
    img.height = r.mask.height();
    img.mask_file = mask_rel.generic_string();

    for (const auto& inst : r.instances.instances) {
      const fs::path inst_rel =
          fs::path(clip_id) / "instances" / (key + "_" + std::to_string(inst.id) + ".png");
      save_mask(inst.mask, output_root / inst_rel);
      img.instances.push_back({inst.id, inst_rel.generic_string(), inst.box, inst.area});
    }
    outcome.instances += r.instances.size();

    if (r.intermediates) {
      dump_intermediates(*r.intermediates, clip_out / "intermediates" / key);
    }
    outcome.images.push_back(std::move(img));
  }
  return outcome;
}

// Frame key -> file, skipping extract's instance and intermediate folders.
std::map<std::string, fs::path> collect_keyed_pngs(const fs::path& root,
                                                   const std::string& suffix) {
  std::map<std::string, fs::path> out;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
       ++it) {
    if (it->is_directory()) {
      const std::string name = it->path().filename().string();
      if (name == "instances" || name == "intermediates") it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file() || lower(it->path().extension().string()) != ".png") continue;
    std::string key = it->path().stem().string();
    if (!suffix.empty() && key.size() > suffix.size() && key.ends_with(suffix)) {
      key.erase(key.size() - suffix.size());
    }
    if (!out.emplace(key, it->path()).second) {
      throw IoError("duplicate frame key '" + key + "' under '" + root.string() + "'");
    }
  }
  return out;
}

}  // namespace

std::string frame_key(const std::string& clip_id, int frame_index) {
  return clip_id + "_" + padded(frame_index);
}

PipelineConfig resolve_config(const std::optional<fs::path>& config_path,
                              const ConfigOverrides& overrides) {
  PipelineConfig cfg;
  if (config_path) cfg = load_pipeline_config(*config_path, cfg);
  if (overrides.tau_c) cfg.vote.tau_c = *overrides.tau_c;
  if (overrides.superpixel_size) cfg.superpixel.target_region_size = *overrides.superpixel_size;
  if (overrides.min_component_fraction) {
    cfg.morph.min_component_fraction = *overrides.min_component_fraction;
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.dump_intermediates) cfg.dump_intermediates = true;
  cfg.validate();
  return cfg;
}

int cmd_extract(const ExtractOptions& opts) {
  PipelineConfig cfg;
  try {
    cfg = resolve_config(opts.config_path, opts.overrides);
  } catch (const ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kConfigError;
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return kIoError;
  }

  std::error_code ec;
  if (!fs::is_directory(opts.input_root, ec)) {
    spdlog::error("input root '{}' is not a directory", opts.input_root.string());
    return kIoError;
  }
  std::vector<fs::path> clip_dirs;
  for (const auto& entry : fs::directory_iterator(opts.input_root, ec)) {
    if (entry.is_directory()) clip_dirs.push_back(entry.path());
  }
  std::sort(clip_dirs.begin(), clip_dirs.end());
  if (clip_dirs.empty()) {
    spdlog::error("input root '{}' contains no clip directories", opts.input_root.string());
    return kIoError;
  }
  fs::create_directories(opts.output_root, ec);
  if (ec) {
    spdlog::error("cannot create output root '{}': {}", opts.output_root.string(), ec.message());
    return kIoError;
  }

  ExportManifest manifest;
  std::size_t failures = 0;
  for (const auto& dir : clip_dirs) {
    try {
      ClipOutcome outcome = process_clip(dir, opts.output_root, cfg, opts.jobs);
      spdlog::info("clip '{}': {} query frames, {} instances", dir.filename().string(),
                   outcome.images.size(), outcome.instances);
      for (auto& img : outcome.images) manifest.images.push_back(std::move(img));
    } catch (const std::exception& e) {
      ++failures;
      spdlog::error("clip '{}' skipped: {}", dir.filename().string(), e.what());
    }
  }

  try {
    manifest.write(opts.output_root);
  } catch (const std::exception& e) {
    spdlog::error("manifest: {}", e.what());
    return kIoError;
  }
  if (failures > 0) {
    spdlog::warn("{} of {} clips failed", failures, clip_dirs.size());
    return kClipFailures;
  }
  return kOk;
}

int cmd_eval(const EvalOptions& opts, std::ostream& out) {
  LabelFusionSpec fusion = LabelFusionSpec::cityscapes_default();
  if (!opts.dynamic_ids.empty()) {
    fusion.dynamic_label_ids = {opts.dynamic_ids.begin(), opts.dynamic_ids.end()};
  }
  std::regex group_re;
  try {
    group_re = std::regex(opts.group_pattern);
  } catch (const std::regex_error& e) {
    spdlog::error("config: invalid --group-pattern '{}': {}", opts.group_pattern, e.what());
    return kConfigError;
  }

  std::error_code ec;
  for (const auto& root : {opts.pred_root, opts.truth_root}) {
    if (!fs::is_directory(root, ec)) {
      spdlog::error("'{}' is not a directory", root.string());
      return kIoError;
    }
  }

  std::map<std::string, fs::path> preds, truths;
  try {
    preds = collect_keyed_pngs(opts.pred_root, opts.pred_suffix);
    truths = collect_keyed_pngs(opts.truth_root, opts.truth_suffix);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kIoError;
  }

  std::vector<std::string> keys;
  std::size_t unmatched = 0;
  for (const auto& [key, path] : preds) {
    if (truths.contains(key)) {
      keys.push_back(key);
    } else {
      ++unmatched;
      spdlog::debug("prediction '{}' has no ground truth", key);
    }
  }
  // Ground truth usually covers more frames than were predicted; only
  // predictions without truth count as unmatched.
  if (keys.size() < truths.size()) {
    spdlog::debug("{} ground-truth frames have no prediction", truths.size() - keys.size());
  }
  if (unmatched > 0 && !opts.allow_partial) {
    spdlog::error("{} predictions in '{}' have no ground truth in '{}' (use --allow-partial)",
                  unmatched, opts.pred_root.string(), opts.truth_root.string());
    return kIoError;
  }
  if (keys.empty()) {
    spdlog::error("no matching frames to evaluate");
    return kIoError;
  }

  std::vector<EvalRecord> records(keys.size());
  try {
    parallel_for(keys.size(), opts.jobs, [&](std::size_t i) {
      const BinaryMask pred = load_mask(preds.at(keys[i]));
      const fs::path& tpath = truths.at(keys[i]);
      const BinaryMask truth = opts.truth_kind == TruthKind::mask
                                   ? load_mask(tpath)
                                   : fuse_ground_truth(load_label_raster(tpath), fusion);
      try {
        records[i] = score_frame(pred, truth);
      } catch (const DimensionMismatch& e) {
        throw DimensionMismatch("frame '" + keys[i] + "': " + e.what());
      }
      records[i].frame = keys[i];
    });
  } catch (const ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kIoError;
  }

  const EvalReport report = aggregate(std::move(records), [&](const EvalRecord& r) {
    std::smatch m;
    if (!std::regex_search(r.frame, m, group_re)) return std::string("(ungrouped)");
    return m.size() > 1 ? m[1].str() : m[0].str();
  });
  out << format_report_table(report);

  const fs::path report_path = opts.report_path.value_or(opts.pred_root / "eval_report.json");
  std::ofstream json(report_path, std::ios::binary);
  json << report_to_json(report) << '\n';
  if (!json) {
    spdlog::error("cannot write report '{}'", report_path.string());
    return kIoError;
  }
  spdlog::info("report written to '{}'", report_path.string());
  return kOk;
}

int cmd_synth(const SynthOptions& opts) {
  SyntheticClip synth;
  try {
    SceneSpec spec = load_scene_spec(opts.spec_path);
    if (opts.seed) spec.seed = *opts.seed;
    synth = generate(spec);
  } catch (const SpecError& e) {
    spdlog::error("scene spec: {}", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kIoError;
  }

  const std::string& clip_id = synth.clip.clip_id();
  const fs::path clip_dir = opts.output_root / "frames" / clip_id;
  const fs::path truth_dir = opts.output_root / "truth";
  try {
    fs::create_directories(clip_dir);
    fs::create_directories(truth_dir);
    for (std::size_t k = 0; k < synth.clip.ofs().size(); ++k) {
      const Frame& f = synth.clip.ofs()[k];
      save_gray8(f.gray(), f.width(), f.height(),
                 clip_dir / ("frame_" + padded(f.frame_index()) + ".png"));
      save_mask(synth.truth[k], truth_dir / (frame_key(clip_id, f.frame_index()) + ".png"));
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kIoError;
  }
  spdlog::info("clip '{}': {} frames written to '{}'", clip_id, synth.clip.ofs().size(),
               clip_dir.string());
  return kOk;
}

}  // namespace dynamask::cli
