#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifgi/jones.hpp"

namespace ifgi {

/// Pixel raster of the image plane shared by objects and camera.
struct SceneGrid {
  int width = 128;
  int height = 128;
  double pitch_mm = 0.05;

  void validate() const;
  int npixels() const { return width * height; }
  bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

  bool operator==(const SceneGrid&) const = default;
};

/// Axis-aligned half-open pixel rectangle [x0,x1) x [y0,y1).
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int area() const { return (x1 - x0) * (y1 - y0); }
  bool empty() const { return area() <= 0; }
  bool within(const SceneGrid& grid) const;
  bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
  bool overlaps(const PixelRect& o) const;

  bool operator==(const PixelRect&) const = default;
};

/// Regions used by the metrics module: inside/outside the object plus a
/// signal-free patch for the background noise estimate.
struct RoiPair {
  PixelRect inside;
  PixelRect outside;
  PixelRect background;

  /// Throws ConfigError unless all regions lie within the grid and
  /// inside/outside are non-empty and disjoint.
  void validate(const SceneGrid& grid) const;
};

/// Binary mask on a pixel grid; nonzero = set.
struct Bitmap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> set;

  bool at(int x, int y) const { return set[static_cast<size_t>(y) * width + x] != 0; }
  std::int64_t count_set() const;
};

/// Rastered passive optical element: one Jones matrix per pixel.
/// Immutable after construction.
class SceneObject {
public:
  /// Throws ConfigError if element count mismatches the grid or any
  /// element has a singular value above 1.
  SceneObject(SceneGrid grid, std::vector<ElementMatrix> elements, std::string label);

  const SceneGrid& grid() const { return grid_; }
  const std::string& label() const { return label_; }
  const ElementMatrix& at(int x, int y) const {
    return elements_[static_cast<size_t>(y) * grid_.width + x];
  }
  const std::vector<ElementMatrix>& elements() const { return elements_; }

private:
  SceneGrid grid_;
  std::vector<ElementMatrix> elements_;
  std::string label_;
};

SceneObject make_uniform(const SceneGrid& grid, const ElementMatrix& element,
                         std::string label = "uniform");

/// Opaque (J = 0) where the mask is set, identity elsewhere.
SceneObject make_stencil(const SceneGrid& grid, const Bitmap& bitmap,
                         std::string label = "stencil");

/// e^{i phi} * I inside `region`, identity outside. Lossless everywhere.
SceneObject make_phase_shard(const SceneGrid& grid, const PixelRect& region, double phi,
                             std::string label = "phase_shard");

/// 90-degree polarization rotator inside the pattern, identity outside.
SceneObject make_bomb_pattern(const SceneGrid& grid, const Bitmap& bitmap,
                              std::string label = "bomb_pattern");

/// How the gray levels of a loaded graymap map onto element parameters.
/// The parameter scales linearly with gray/maxval:
///   stencil  -> amplitude transmission 1 - g (opaque at full gray)
///   phase    -> e^{i g*max_param} * I
///   rotator  -> rotation by g*max_param (radians)
struct SceneDescriptor {
  enum class Interpretation { stencil, phase, rotator };
  Interpretation interpretation = Interpretation::stencil;
  double max_param = 0.0;
  std::string label;
};

/// Parses the sidecar key-value descriptor file.
SceneDescriptor read_scene_descriptor(const std::string& path);

/// Loads a P2/P5 graymap (8- or 16-bit) with its sidecar descriptor at
/// `path + ".scene"`. Throws IoError / ConfigError on malformed input.
SceneObject load_scene(const std::string& path);
SceneObject load_scene(const std::string& path, const SceneDescriptor& desc);

// Procedural bitmaps behind the bundled presets.
Bitmap uo_bitmap(const SceneGrid& grid);
Bitmap bomb_bitmap(const SceneGrid& grid);

/// Geometry of the glass-shard preset region on a given grid.
PixelRect shard_region(const SceneGrid& grid);

/// Preset scenes: "uo_stencil", "glass_shard" (phase phi), "bomb_lc",
/// "identity". Throws ConfigError on an unknown name.
SceneObject make_preset(const std::string& name, const SceneGrid& grid,
                        double shard_phi = 1.5707963267948966);

/// Default ROI geometry for each preset; inside and outside are
/// point-symmetric about the grid center so both see the same expected
/// illumination.
RoiPair preset_rois(const std::string& name, const SceneGrid& grid);

} // namespace ifgi
