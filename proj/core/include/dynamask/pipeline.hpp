#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynamask/diffvote.hpp"
#include "dynamask/image.hpp"
#include "dynamask/morphology.hpp"
#include "dynamask/superpixel.hpp"

namespace dynamask {

enum class TfsSampling {
  even,    // index_k = floor(k * |ofs| / count)
  random,  // seeded draw without replacement
};

struct PipelineConfig {
  VoteConfig vote;
  SuperpixelConfig superpixel;
  MorphConfig morph;
  int tfs_count = 5;
  TfsSampling sampling = TfsSampling::even;
  std::uint64_t seed = 0;  // only used by TfsSampling::random
  bool dump_intermediates = false;

  // Validates every sub-config; throws ConfigError.
  void validate() const;
};

// All frames of one static-camera clip (the original frame set) plus the
// indices of the frames sampled as queries.
class ClipFrameSet {
 public:
  static constexpr std::size_t kMinFrames = 6;

  ClipFrameSet() = default;

  // Throws CountError for fewer than kMinFrames frames, DimensionMismatch if
  // frame sizes differ, ClipMismatch if a frame belongs to another clip.
  ClipFrameSet(std::string clip_id, std::vector<Frame> ofs);

  const std::string& clip_id() const { return clip_id_; }
  const std::vector<Frame>& ofs() const { return ofs_; }
  const std::vector<std::size_t>& tfs_indices() const { return tfs_; }
  int width() const { return ofs_.front().width(); }
  int height() const { return ofs_.front().height(); }

  // Indices must be distinct and valid; they are stored sorted. Throws
  // IndexError.
  void set_tfs_indices(std::vector<std::size_t> indices);

 private:
  std::string clip_id_;
  std::vector<Frame> ofs_;
  std::vector<std::size_t> tfs_;
};

// Throws CountError unless 1 <= count <= |ofs| - 1.
ClipFrameSet sample_tfs(ClipFrameSet clip, int count,
                        TfsSampling mode = TfsSampling::even,
                        std::uint64_t seed = 0);

// Per-stage products of one query, kept only when dump_intermediates is set.
struct Intermediates {
  std::vector<int> other_frame_indices;  // frame_index of each ADF's partner
  std::vector<AbsDiffFrame> adfs;
  std::vector<BinaryMask> bdfs;
  VoteMap votes;
  BinaryMask vote_mask;
  SuperpixelLabeling labeling;
  BinaryMask promoted;
};

struct QueryResult {
  int frame_index = 0;
  BinaryMask mask;  // union of the instances
  InstanceSet instances;
  std::optional<Intermediates> intermediates;
};

// Runs the full extraction for the frame at ofs position `query_index`,
// which must be one of the clip's tfs indices (IndexError otherwise). An
// empty instance set is a valid result.
QueryResult extract_query_mask(const ClipFrameSet& clip,
                               std::size_t query_index,
                               const PipelineConfig& cfg,
                               std::size_t jobs = 1);

// extract_query_mask for every tfs index, ordered by frame_index. A clip
// without tfs indices is sampled first with cfg.tfs_count.
std::vector<QueryResult> extract_clip(const ClipFrameSet& clip,
                                      const PipelineConfig& cfg,
                                      std::size_t jobs = 1);

}  // namespace dynamask
