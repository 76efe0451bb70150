#include "dynamask/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "dynamask/error.hpp"
#include "ini_reader.hpp"

namespace dynamask {

namespace {

std::vector<double> render_background(const SceneSpec& spec) {
  const int w = spec.width, h = spec.height;
  std::vector<double> bg(static_cast<std::size_t>(w) * h, spec.background.intensity);
  if (spec.background.kind != BackgroundKind::texture ||
      spec.background.amplitude == 0.0) {
    return bg;
  }

  // Value noise: random lattice values, bilinearly interpolated.
  const int cell = spec.background.cell_size;
  const int lw = w / cell + 2, lh = h / cell + 2;
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> dist(-spec.background.amplitude,
                                              spec.background.amplitude);
  std::vector<double> lattice(static_cast<std::size_t>(lw) * lh);
  for (auto& v : lattice) v = dist(rng);

  for (int y = 0; y < h; ++y) {
    const double fy = static_cast<double>(y) / cell;
    const int ly = static_cast<int>(fy);
    const double ty = fy - ly;
    for (int x = 0; x < w; ++x) {
      const double fx = static_cast<double>(x) / cell;
      const int lx = static_cast<int>(fx);
      const double tx = fx - lx;
      auto at = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * lw + i]; };
      const double top = at(lx, ly) * (1 - tx) + at(lx + 1, ly) * tx;
      const double bot = at(lx, ly + 1) * (1 - tx) + at(lx + 1, ly + 1) * tx;
      bg[static_cast<std::size_t>(y) * w + x] += top * (1 - ty) + bot * ty;
    }
  }
  return bg;
}

bool covers(const Mover& m, int px, int py, int x, int y) {
  if (x < px || y < py || x >= px + m.width || y >= py + m.height) return false;
  if (m.shape == MoverShape::rectangle) return true;
  const double rx = m.width / 2.0, ry = m.height / 2.0;
  const double dx = (x + 0.5 - px - rx) / rx;
  const double dy = (y + 0.5 - py - ry) / ry;
  return dx * dx + dy * dy <= 1.0;
}

MoverShape parse_shape(const std::string& s, const detail::Section<SpecError>& sec) {
  if (s == "rectangle" || s == "rect") return MoverShape::rectangle;
  if (s == "ellipse") return MoverShape::ellipse;
  throw sec.bad_value("shape", s);
}

}  // namespace

void SceneSpec::validate() const {
  if (width < kMinFrameSide || height < kMinFrameSide) {
    throw SpecError("scene must be at least " + std::to_string(kMinFrameSide) +
                    "x" + std::to_string(kMinFrameSide));
  }
  if (frame_count < static_cast<int>(ClipFrameSet::kMinFrames)) {
    throw SpecError("scene.frames must be >= " +
                    std::to_string(ClipFrameSet::kMinFrames) + ", got " +
                    std::to_string(frame_count));
  }
  if (!(noise_sigma >= 0.0)) throw SpecError("scene.noise_sigma must be >= 0");
  if (clip_id.empty()) throw SpecError("scene.clip_id must not be empty");
  if (background.intensity < 0 || background.intensity > 255) {
    throw SpecError("background.intensity must lie in [0, 255]");
  }
  if (!(background.amplitude >= 0.0)) throw SpecError("background.amplitude must be >= 0");
  if (background.cell_size < 1) throw SpecError("background.cell_size must be >= 1");

  for (std::size_t i = 0; i < movers.size(); ++i) {
    const Mover& m = movers[i];
    const std::string name = "mover " + std::to_string(i);
    if (m.width < 1 || m.height < 1 || m.width > width || m.height > height) {
      throw SpecError(name + " size " + std::to_string(m.width) + "x" +
                      std::to_string(m.height) + " does not fit the frame");
    }
    if (m.intensity < 0 || m.intensity > 255) {
      throw SpecError(name + " intensity must lie in [0, 255]");
    }
    if (m.x < 0 || m.y < 0 || m.x + m.width > width || m.y + m.height > height) {
      throw SpecError(name + " starts out of bounds");
    }
  }
}

SyntheticClip generate(const SceneSpec& spec) {
  spec.validate();
  const int w = spec.width, h = spec.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const std::vector<double> background = render_background(spec);

  std::vector<Frame> frames(spec.frame_count);
  std::vector<BinaryMask> truth(spec.frame_count);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    std::vector<double> canvas = background;
    BinaryMask gt(w, h);
    for (const Mover& m : spec.movers) {
      const int px = std::clamp(static_cast<int>(std::lround(m.x + m.vx * k)), 0,
                                w - m.width);
      const int py = std::clamp(static_cast<int>(std::lround(m.y + m.vy * k)), 0,
                                h - m.height);
      for (int y = py; y < py + m.height; ++y) {
        for (int x = px; x < px + m.width; ++x) {
          if (!covers(m, px, py, x, y)) continue;
          canvas[static_cast<std::size_t>(y) * w + x] = m.intensity;
          gt.set(x, y, true);
        }
      }
    }

    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                      static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    std::vector<std::uint8_t> gray(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = canvas[i] + (spec.noise_sigma > 0.0 ? noise(rng) : 0.0);
      gray[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
    frames[k] = Frame::from_gray(w, h, std::move(gray),
                                 FrameRef{spec.clip_id, static_cast<int>(k)});
    truth[k] = std::move(gt);
  }

  return SyntheticClip{ClipFrameSet(spec.clip_id, std::move(frames)), std::move(truth)};
}

SceneSpec parse_scene_spec(std::istream& in) {
  using Section = detail::Section<SpecError>;
  const auto tree = detail::read_ini<SpecError>(in, "scene spec");
  SceneSpec spec;
  for (const auto& [name, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw SpecError("key '" + name + "' outside of any section");
    }
    Section sec(name, body);
    if (name == "scene") {
      sec.expect_keys({"clip_id", "width", "height", "frames", "noise_sigma", "seed"});
      sec.read("clip_id", spec.clip_id);
      sec.read("width", spec.width);
      sec.read("height", spec.height);
      sec.read("frames", spec.frame_count);
      sec.read("noise_sigma", spec.noise_sigma);
      sec.read("seed", spec.seed);
    } else if (name == "background") {
      sec.expect_keys({"kind", "intensity", "amplitude", "cell_size"});
      std::string kind = "uniform";
      sec.read("kind", kind);
      if (kind == "uniform") {
        spec.background.kind = BackgroundKind::uniform;
      } else if (kind == "texture") {
        spec.background.kind = BackgroundKind::texture;
      } else {
        throw sec.bad_value("kind", kind);
      }
      sec.read("intensity", spec.background.intensity);
      sec.read("amplitude", spec.background.amplitude);
      sec.read("cell_size", spec.background.cell_size);
    } else if (name.starts_with("mover")) {
      sec.expect_keys({"shape", "width", "height", "intensity", "x", "y", "vx", "vy"});
      Mover m;
      std::string shape = "rectangle";
      sec.read("shape", shape);
      m.shape = parse_shape(shape, sec);
      sec.read("width", m.width);
      sec.read("height", m.height);
      sec.read("intensity", m.intensity);
      sec.read("x", m.x);
      sec.read("y", m.y);
      sec.read("vx", m.vx);
      sec.read("vy", m.vy);
      spec.movers.push_back(m);
    } else {
      throw SpecError("unknown section '" + name + "'");
    }
  }
  spec.validate();
  return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene spec '" + path.string() + "'");
  return parse_scene_spec(in);
}

}  // namespace dynamask
