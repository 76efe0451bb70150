#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/logging.hpp"
#include "dynamask/parallel.hpp"

int main(int argc, char** argv) {
  using namespace dynamask::cli;
  init_logging();

  CLI::App app{"Dynamic-object mask extraction from static-camera frame sets"};
  app.require_subcommand(1);

  std::size_t jobs = dynamask::default_jobs();
  app.add_option("--jobs,-j", jobs, "Worker threads (default: logical cores)")
      ->check(CLI::PositiveNumber);

  // extract
  ExtractOptions ex;
  std::string ex_config;
  std::optional<double> tau_c, min_fraction;
  std::optional<int> sp_size;
  std::optional<std::uint64_t> ex_seed;
  auto* extract = app.add_subcommand("extract", "Extract dynamic-object masks for every clip");
  extract->add_option("input_root", ex.input_root, "Directory with one subdirectory per clip")
      ->required();
  extract->add_option("output_root", ex.output_root, "Destination for masks and manifest")
      ->required();
  extract->add_option("--config", ex_config, "INI-style pipeline configuration");
  extract->add_option("--tau-c", tau_c, "Vote fraction threshold (default 0.65)");
  extract->add_option("--superpixel-size", sp_size, "Superpixel grid spacing in pixels");
  extract->add_option("--min-component-fraction", min_fraction,
                      "Minimum component area as a fraction of the image");
  extract->add_option("--seed", ex_seed, "Seed for random query-frame sampling");
  extract->add_flag("--dump-intermediates", ex.overrides.dump_intermediates,
                    "Write per-stage images for every query frame");

  // eval
  EvalOptions ev;
  std::string truth_kind = "labels";
  std::string report;
  auto* eval = app.add_subcommand("eval", "Score predicted masks against ground truth");
  eval->add_option("pred_root", ev.pred_root, "Predicted masks (e.g. an extract output)")
      ->required();
  eval->add_option("truth_root", ev.truth_root, "Ground-truth label or mask images")->required();
  eval->add_option("--truth-kind", truth_kind, "labels | mask")
      ->check(CLI::IsMember({"labels", "mask"}));
  eval->add_option("--dynamic-ids", ev.dynamic_ids,
                   "Label ids fused into the dynamic class (default: Cityscapes set)")
      ->delimiter(',');
  eval->add_option("--group-pattern", ev.group_pattern,
                   "Regex; its first capture group on the frame key names the group");
  eval->add_option("--pred-suffix", ev.pred_suffix, "Suffix stripped from prediction stems");
  eval->add_option("--truth-suffix", ev.truth_suffix, "Suffix stripped from ground-truth stems");
  eval->add_option("--report", report, "JSON report path (default <pred_root>/eval_report.json)");
  eval->add_flag("--allow-partial", ev.allow_partial, "Score only the frames present on both sides");

  // synth
  SynthOptions sy;
  std::optional<std::uint64_t> sy_seed;
  auto* synth = app.add_subcommand("synth", "Render a synthetic static-camera clip with ground truth");
  synth->add_option("spec", sy.spec_path, "Scene description file")->required();
  synth->add_option("output_root", sy.output_root, "Destination directory")->required();
  synth->add_option("--seed", sy_seed, "Override the scene seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (extract->parsed()) {
    if (!ex_config.empty()) ex.config_path = ex_config;
    ex.overrides.tau_c = tau_c;
    ex.overrides.superpixel_size = sp_size;
    ex.overrides.min_component_fraction = min_fraction;
    ex.overrides.seed = ex_seed;
    ex.jobs = jobs;
    return cmd_extract(ex);
  }
  if (eval->parsed()) {
    ev.truth_kind = truth_kind == "mask" ? TruthKind::mask : TruthKind::labels;
    if (!report.empty()) ev.report_path = report;
    ev.jobs = jobs;
    return cmd_eval(ev, std::cout);
  }
  sy.seed = sy_seed;
  return cmd_synth(sy);
}
