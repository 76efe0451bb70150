#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dynamask/image.hpp"

namespace dynamask {

// Semantic label ids that count as "dynamic" in ground truth.
struct LabelFusionSpec {
  std::set<std::int32_t> dynamic_label_ids;

  // Cityscapes: dynamic(5), person(24), rider(25), car(26), truck(27),
  // bus(28), caravan(29), trailer(30), train(31), motorcycle(32),
  // bicycle(33).
  static LabelFusionSpec cityscapes_default();

  // Throws ConfigError when empty.
  void validate() const;
};

struct EvalRecord {
  std::string frame;  // matching key, usually the file stem
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  // Undefined when both masks are all static (2tp + fp + fn == 0).
  std::optional<double> f1;
};

struct GroupStats {
  double mean_f1 = 0.0;         // over frames with a defined f1
  std::size_t frame_count = 0;  // frames with a defined f1
  std::size_t undefined_count = 0;
};

struct EvalReport {
  std::vector<EvalRecord> records;
  std::map<std::string, GroupStats> groups;
  std::optional<double> mean_f1;   // macro: mean of per-frame f1
  std::optional<double> micro_f1;  // pooled counts over all frames
  std::size_t undefined_count = 0;
};

BinaryMask fuse_ground_truth(const LabelRaster& labels,
                             const LabelFusionSpec& spec);

// Dynamic is the positive class. Throws DimensionMismatch.
EvalRecord score_frame(const BinaryMask& pred, const BinaryMask& truth);

double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

EvalReport aggregate(
    std::vector<EvalRecord> records,
    const std::function<std::string(const EvalRecord&)>& group_of);

// Fixed-width text table, one row per group plus the overall line.
std::string format_report_table(const EvalReport& report);

std::string report_to_json(const EvalReport& report);

}  // namespace dynamask
