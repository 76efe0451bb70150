#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynamask/image.hpp"
#include "dynamask/pipeline.hpp"

namespace dynamask {

enum class BackgroundKind { uniform, texture };

struct Background {
  BackgroundKind kind = BackgroundKind::uniform;
  int intensity = 80;
  // texture only: smooth value noise in [-amplitude, amplitude] with one
  // random lattice value every cell_size pixels.
  double amplitude = 0.0;
  int cell_size = 16;
};

enum class MoverShape { rectangle, ellipse };

struct Mover {
  MoverShape shape = MoverShape::rectangle;
  int width = 20;
  int height = 20;
  int intensity = 200;
  double x = 0.0;  // top-left corner at frame 0
  double y = 0.0;
  double vx = 0.0;  // pixels per frame
  double vy = 0.0;
};

struct SceneSpec {
  std::string clip_id = "synthetic";
  int width = 128;
  int height = 128;
  int frame_count = 12;
  Background background;
  std::vector<Mover> movers;  // painted in order; later movers occlude
  double noise_sigma = 0.0;   // additive Gaussian, per pixel and frame
  std::uint64_t seed = 0;

  // Throws SpecError.
  void validate() const;
};

struct SyntheticClip {
  ClipFrameSet clip;                 // no tfs indices sampled
  std::vector<BinaryMask> truth;     // one per frame: pixels covered by movers
};

// Mover positions are clamped so each mover stays fully inside the frame.
// Throws SpecError when the spec is invalid or a mover starts out of bounds.
SyntheticClip generate(const SceneSpec& spec);

// INI-style scene description:
//   [scene]      clip_id width height frames noise_sigma seed
//   [background] kind(uniform|texture) intensity amplitude cell_size
//   [mover...]   shape(rectangle|ellipse) width height intensity x y vx vy
// Throws SpecError naming the offending key.
SceneSpec parse_scene_spec(std::istream& in);
SceneSpec load_scene_spec(const std::filesystem::path& path);

}  // namespace dynamask
