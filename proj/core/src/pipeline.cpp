#include "dynamask/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "dynamask/error.hpp"
#include "dynamask/parallel.hpp"

namespace dynamask {

void PipelineConfig::validate() const {
  vote.validate();
  superpixel.validate();
  morph.validate();
  if (tfs_count < 1) {
    throw ConfigError("pipeline.tfs_count must be >= 1, got " +
                      std::to_string(tfs_count));
  }
}

ClipFrameSet::ClipFrameSet(std::string clip_id, std::vector<Frame> ofs)
    : clip_id_(std::move(clip_id)), ofs_(std::move(ofs)) {
  if (ofs_.size() < kMinFrames) {
    throw CountError("clip '" + clip_id_ + "' has " + std::to_string(ofs_.size()) +
                     " frames; at least " + std::to_string(kMinFrames) +
                     " are required");
  }
  for (const auto& f : ofs_) {
    if (f.width() != ofs_.front().width() || f.height() != ofs_.front().height()) {
      throw DimensionMismatch("frames of clip '" + clip_id_ +
                              "' do not share dimensions");
    }
    if (f.clip_id() != clip_id_) {
      throw ClipMismatch("frame of clip '" + f.clip_id() + "' in clip '" +
                         clip_id_ + "'");
    }
  }
}

void ClipFrameSet::set_tfs_indices(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw IndexError("duplicate tfs index");
  }
  if (!indices.empty() && indices.back() >= ofs_.size()) {
    throw IndexError("tfs index " + std::to_string(indices.back()) +
                     " out of range for " + std::to_string(ofs_.size()) +
                     " frames");
  }
  tfs_ = std::move(indices);
}

ClipFrameSet sample_tfs(ClipFrameSet clip, int count, TfsSampling mode,
                        std::uint64_t seed) {
  const std::size_t n = clip.ofs().size();
  if (count < 1 || static_cast<std::size_t>(count) > n - 1) {
    throw CountError("cannot sample " + std::to_string(count) + " of " +
                     std::to_string(n) + " frames (need 1 <= count <= " +
                     std::to_string(n - 1) + ")");
  }
  std::vector<std::size_t> picked;
  if (mode == TfsSampling::even) {
    for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
      picked.push_back(std::min(n - 1, k * n / static_cast<std::size_t>(count)));
    }
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);
  }
  clip.set_tfs_indices(std::move(picked));
  return clip;
}

QueryResult extract_query_mask(const ClipFrameSet& clip, std::size_t query_index,
                               const PipelineConfig& cfg, std::size_t jobs) {
  cfg.validate();
  const auto& tfs = clip.tfs_indices();
  if (std::find(tfs.begin(), tfs.end(), query_index) == tfs.end()) {
    throw IndexError("frame " + std::to_string(query_index) +
                     " is not a sampled query of clip '" + clip.clip_id() + "'");
  }
  const auto& frames = clip.ofs();
  const Frame& query = frames[query_index];

  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i != query_index) others.push_back(i);
  }

  // One ADF/BDF per other frame; independent, gathered by position.
  std::vector<AbsDiffFrame> adfs(cfg.dump_intermediates ? others.size() : 0);
  std::vector<BinaryMask> bdfs(others.size());
  parallel_for(others.size(), jobs, [&](std::size_t k) {
    AbsDiffFrame adf = abs_diff(query, frames[others[k]]);
    bdfs[k] = threshold_adf(adf);
    if (cfg.dump_intermediates) adfs[k] = std::move(adf);
  });

  VoteMap votes = accumulate_votes(bdfs);
  BinaryMask vote_mask = vote_threshold(votes, cfg.vote);
  SuperpixelLabeling labeling = segment(query, cfg.superpixel);
  BinaryMask promoted = promote(labeling, vote_mask, cfg.superpixel);
  InstanceSet instances = refine(promoted, cfg.morph);
  instances.frame = query.ref();

  QueryResult result;
  result.frame_index = query.frame_index();
  result.mask = instances.union_mask();
  result.instances = std::move(instances);
  if (cfg.dump_intermediates) {
    Intermediates inter;
    for (auto i : others) inter.other_frame_indices.push_back(frames[i].frame_index());
    inter.adfs = std::move(adfs);
    inter.bdfs = std::move(bdfs);
    inter.votes = std::move(votes);
    inter.vote_mask = std::move(vote_mask);
    inter.labeling = std::move(labeling);
    inter.promoted = std::move(promoted);
    result.intermediates = std::move(inter);
  }
  return result;
}

std::vector<QueryResult> extract_clip(const ClipFrameSet& clip,
                                      const PipelineConfig& cfg, std::size_t jobs) {
  cfg.validate();
  if (clip.tfs_indices().empty()) {
    return extract_clip(sample_tfs(clip, cfg.tfs_count, cfg.sampling, cfg.seed),
                        cfg, jobs);
  }
  const auto& tfs = clip.tfs_indices();
  std::vector<QueryResult> results(tfs.size());
  parallel_for(tfs.size(), jobs, [&](std::size_t k) {
    results[k] = extract_query_mask(clip, tfs[k], cfg, 1);
  });
  std::stable_sort(results.begin(), results.end(),
                   [](const QueryResult& a, const QueryResult& b) {
                     return a.frame_index < b.frame_index;
                   });
  return results;
}

}  // namespace dynamask
