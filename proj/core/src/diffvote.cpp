#include "dynamask/diffvote.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "dynamask/error.hpp"

namespace dynamask {

void VoteConfig::validate() const {
  if (!(tau_c > 0.0 && tau_c < 1.0)) {
    throw ConfigError("vote.tau_c must lie in (0, 1), got " +
                      std::to_string(tau_c));
  }
}

VoteMap::VoteMap(int width, int height)
    : width_(width),
      height_(height),
      counts_(static_cast<std::size_t>(width) * height, 0) {}

void VoteMap::add(const BinaryMask& bdf) {
  if (bdf.width() != width_ || bdf.height() != height_) {
    throw DimensionMismatch("BDF dimensions do not match the vote map");
  }
  const auto bits = bdf.bits();
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += bits[i];
  ++cardinality_;
}

AbsDiffFrame abs_diff(const Frame& query, const Frame& other) {
  if (query.width() != other.width() || query.height() != other.height()) {
    throw DimensionMismatch("cannot difference frames of different sizes");
  }
  if (query.clip_id() != other.clip_id()) {
    throw ClipMismatch("cannot difference frames of clips '" +
                       query.clip_id() + "' and '" + other.clip_id() + "'");
  }
  const auto a = query.gray();
  const auto b = other.gray();
  AbsDiffFrame adf{query.width(), query.height(),
                   std::vector<std::uint8_t>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) {
    adf.values[i] = static_cast<std::uint8_t>(std::abs(int{a[i]} - int{b[i]}));
  }
  return adf;
}

ThresholdStats adf_stats(const AbsDiffFrame& adf) {
  const auto n = static_cast<double>(adf.values.size());
  if (adf.values.empty()) return {};

  // Two passes over an intensity histogram: exact sums, no cancellation.
  std::size_t hist[256] = {};
  for (auto v : adf.values) ++hist[v];
  double sum = 0.0;
  for (int v = 0; v < 256; ++v) sum += static_cast<double>(hist[v]) * v;
  const double mean = sum / n;
  double sq = 0.0;
  for (int v = 0; v < 256; ++v) {
    const double d = v - mean;
    sq += static_cast<double>(hist[v]) * d * d;
  }
  return {mean, std::sqrt(sq / n)};
}

BinaryMask threshold_adf(const AbsDiffFrame& adf) {
  const double cut = adf_stats(adf).threshold();
  BinaryMask out(adf.width, adf.height);
  for (std::size_t i = 0; i < adf.values.size(); ++i) {
    out.set(i, adf.values[i] > cut);
  }
  return out;
}

VoteMap accumulate_votes(std::span<const BinaryMask> bdfs) {
  if (bdfs.empty()) throw EmptySet("cannot accumulate an empty BDF set");
  VoteMap votes(bdfs.front().width(), bdfs.front().height());
  for (const auto& bdf : bdfs) votes.add(bdf);
  return votes;
}

BinaryMask vote_threshold(const VoteMap& votes, const VoteConfig& cfg) {
  if (votes.cardinality() == 0) {
    throw EmptySet("vote map has no accumulated BDFs");
  }
  const double cut = cfg.tau_c * static_cast<double>(votes.cardinality());
  const auto counts = votes.counts();
  BinaryMask out(votes.width(), votes.height());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.set(i, static_cast<double>(counts[i]) > cut);
  }
  return out;
}

}  // namespace dynamask
