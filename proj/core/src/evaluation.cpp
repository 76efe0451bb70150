#include "dynamask/evaluation.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "dynamask/error.hpp"

namespace dynamask {

LabelFusionSpec LabelFusionSpec::cityscapes_default() {
  return {{5, 24, 25, 26, 27, 28, 29, 30, 31, 32, 33}};
}

void LabelFusionSpec::validate() const {
  if (dynamic_label_ids.empty()) {
    throw ConfigError("fusion spec needs at least one dynamic label id");
  }
}

BinaryMask fuse_ground_truth(const LabelRaster& labels,
                             const LabelFusionSpec& spec) {
  spec.validate();
  if (labels.ids.size() != static_cast<std::size_t>(labels.width) * labels.height) {
    throw DimensionError("label raster size does not match its dimensions");
  }
  BinaryMask out(labels.width, labels.height);
  for (std::size_t i = 0; i < labels.ids.size(); ++i) {
    out.set(i, spec.dynamic_label_ids.contains(labels.ids[i]));
  }
  return out;
}

double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  const double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp) +
                       static_cast<double>(fn);
  return denom > 0.0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;
}

EvalRecord score_frame(const BinaryMask& pred, const BinaryMask& truth) {
  if (!pred.same_shape(truth)) {
    throw DimensionMismatch("prediction " + std::to_string(pred.width()) + "x" +
                            std::to_string(pred.height()) + " vs truth " +
                            std::to_string(truth.width()) + "x" +
                            std::to_string(truth.height()));
  }
  // Index by (pred, truth) bit pair: 0 tn, 1 fn, 2 fp, 3 tp.
  std::size_t bins[4] = {0, 0, 0, 0};
  const auto p = pred.bits();
  const auto t = truth.bits();
  for (std::size_t i = 0; i < p.size(); ++i) ++bins[(p[i] << 1) | t[i]];

  EvalRecord rec;
  rec.tn = bins[0];
  rec.fn = bins[1];
  rec.fp = bins[2];
  rec.tp = bins[3];
  if (2 * rec.tp + rec.fp + rec.fn > 0) rec.f1 = f1_from_counts(rec.tp, rec.fp, rec.fn);
  return rec;
}

EvalReport aggregate(std::vector<EvalRecord> records,
                     const std::function<std::string(const EvalRecord&)>& group_of) {
  EvalReport report;
  std::map<std::string, double> sums;
  double total = 0.0;
  std::size_t defined = 0;
  std::size_t tp = 0, fp = 0, fn = 0;

  for (const auto& rec : records) {
    auto& g = report.groups[group_of(rec)];
    auto& s = sums[group_of(rec)];
    tp += rec.tp;
    fp += rec.fp;
    fn += rec.fn;
    if (!rec.f1) {
      ++g.undefined_count;
      ++report.undefined_count;
      continue;
    }
    s += *rec.f1;
    ++g.frame_count;
    total += *rec.f1;
    ++defined;
  }
  for (auto& [name, g] : report.groups) {
    if (g.frame_count > 0) g.mean_f1 = sums[name] / static_cast<double>(g.frame_count);
  }
  if (defined > 0) report.mean_f1 = total / static_cast<double>(defined);
  if (2 * tp + fp + fn > 0) report.micro_f1 = f1_from_counts(tp, fp, fn);
  report.records = std::move(records);
  return report;
}

std::string format_report_table(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-32s %8s %8s %10s\n", "group", "frames",
                "skipped", "mean F1");
  out << line;
  for (const auto& [name, g] : report.groups) {
    if (g.frame_count > 0) {
      std::snprintf(line, sizeof line, "%-32s %8zu %8zu %10.4f\n", name.c_str(),
                    g.frame_count, g.undefined_count, g.mean_f1);
    } else {
      std::snprintf(line, sizeof line, "%-32s %8zu %8zu %10s\n", name.c_str(),
                    g.frame_count, g.undefined_count, "n/a");
    }
    out << line;
  }
  auto fmt = [](const std::optional<double>& v) {
    char buf[32];
    if (!v) return std::string("n/a");
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  std::snprintf(line, sizeof line, "%-32s %8zu %8zu %10s\n", "overall (macro)",
                report.records.size() - report.undefined_count,
                report.undefined_count, fmt(report.mean_f1).c_str());
  out << line;
  std::snprintf(line, sizeof line, "%-32s %8s %8s %10s\n", "overall (micro)", "",
                "", fmt(report.micro_f1).c_str());
  out << line;
  return out.str();
}

std::string report_to_json(const EvalReport& report) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };

  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({{"frame", r.frame},
                       {"tp", r.tp},
                       {"fp", r.fp},
                       {"fn", r.fn},
                       {"tn", r.tn},
                       {"f1", opt(r.f1)}});
  }
  json groups = json::object();
  for (const auto& [name, g] : report.groups) {
    groups[name] = {{"mean_f1", g.frame_count > 0 ? json(g.mean_f1) : json(nullptr)},
                    {"frame_count", g.frame_count},
                    {"undefined_count", g.undefined_count}};
  }
  json doc = {{"records", std::move(records)},
              {"groups", std::move(groups)},
              {"mean_f1", opt(report.mean_f1)},
              {"micro_f1", opt(report.micro_f1)},
              {"undefined_count", report.undefined_count}};
  return doc.dump(2);
}

}  // namespace dynamask
