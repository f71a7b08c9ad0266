#include "ifgi/scene.hpp"

#include <cmath>
#include <utility>

#include "ifgi/errors.hpp"
#include "ifgi/kv.hpp"
#include "ifgi/pgm.hpp"

namespace ifgi {

void SceneGrid::validate() const {
  if (width < 1 || height < 1) throw ConfigError("grid dimensions must be >= 1");
  if (!(pitch_mm > 0.0)) throw ConfigError("grid pitch must be positive");
}

bool PixelRect::within(const SceneGrid& grid) const {
  return x0 >= 0 && y0 >= 0 && x1 <= grid.width && y1 <= grid.height && x0 <= x1 && y0 <= y1;
}

bool PixelRect::overlaps(const PixelRect& o) const {
  return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
}

void RoiPair::validate(const SceneGrid& grid) const {
  grid.validate();
  for (const auto* r : {&inside, &outside, &background})
    if (!r->within(grid)) throw ConfigError("ROI outside the grid");
  if (inside.empty() || outside.empty()) throw ConfigError("inside/outside ROIs must be non-empty");
  if (inside.overlaps(outside)) throw ConfigError("inside/outside ROIs must be disjoint");
}

std::int64_t Bitmap::count_set() const {
  std::int64_t n = 0;
  for (const auto v : set) n += (v != 0);
  return n;
}

SceneObject::SceneObject(SceneGrid grid, std::vector<ElementMatrix> elements, std::string label)
    : grid_(grid), elements_(std::move(elements)), label_(std::move(label)) {
  grid_.validate();
  if (elements_.size() != static_cast<size_t>(grid_.npixels()))
    throw ConfigError("scene element count mismatches grid");
  for (const auto& m : elements_)
    if (!m.is_passive()) throw ConfigError("scene element has gain (singular value > 1)");
}

SceneObject make_uniform(const SceneGrid& grid, const ElementMatrix& element, std::string label) {
  grid.validate();
  return SceneObject(grid, std::vector<ElementMatrix>(grid.npixels(), element), std::move(label));
}

namespace {

void require_bitmap_match(const SceneGrid& grid, const Bitmap& bitmap) {
  if (bitmap.width != grid.width || bitmap.height != grid.height)
    throw ConfigError("bitmap dimensions mismatch grid");
}

} // namespace

SceneObject make_stencil(const SceneGrid& grid, const Bitmap& bitmap, std::string label) {
  grid.validate();
  require_bitmap_match(grid, bitmap);
  std::vector<ElementMatrix> elements(grid.npixels());
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x)
      elements[static_cast<size_t>(y) * grid.width + x] =
          bitmap.at(x, y) ? ElementMatrix::opaque() : ElementMatrix::identity();
  return SceneObject(grid, std::move(elements), std::move(label));
}

SceneObject make_phase_shard(const SceneGrid& grid, const PixelRect& region, double phi,
                             std::string label) {
  grid.validate();
  if (!region.within(grid)) throw ConfigError("phase region outside the grid");
  std::vector<ElementMatrix> elements(grid.npixels(), ElementMatrix::identity());
  const ElementMatrix shifted = ElementMatrix::phase(phi);
  for (int y = region.y0; y < region.y1; ++y)
    for (int x = region.x0; x < region.x1; ++x)
      elements[static_cast<size_t>(y) * grid.width + x] = shifted;
  return SceneObject(grid, std::move(elements), std::move(label));
}

SceneObject make_bomb_pattern(const SceneGrid& grid, const Bitmap& bitmap, std::string label) {
  grid.validate();
  require_bitmap_match(grid, bitmap);
  std::vector<ElementMatrix> elements(grid.npixels());
  const ElementMatrix rot = ElementMatrix::rotator(M_PI / 2.0);
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x)
      elements[static_cast<size_t>(y) * grid.width + x] =
          bitmap.at(x, y) ? rot : ElementMatrix::identity();
  return SceneObject(grid, std::move(elements), std::move(label));
}

SceneDescriptor read_scene_descriptor(const std::string& path) {
  const KeyValueFile kv = KeyValueFile::parse_file(path);
  SceneDescriptor desc;
  const std::string kind = kv.get_string("interpretation");
  if (kind == "stencil") {
    desc.interpretation = SceneDescriptor::Interpretation::stencil;
    desc.max_param = 1.0;
  } else if (kind == "phase") {
    desc.interpretation = SceneDescriptor::Interpretation::phase;
    desc.max_param = kv.get_double("max_param");
  } else if (kind == "rotator") {
    desc.interpretation = SceneDescriptor::Interpretation::rotator;
    desc.max_param = kv.get_double("max_param");
  } else {
    throw ConfigError(path + ": unknown interpretation '" + kind + "'");
  }
  desc.label = kv.get("label").value_or(kind);
  return desc;
}

SceneObject load_scene(const std::string& path) {
  return load_scene(path, read_scene_descriptor(path + ".scene"));
}

SceneObject load_scene(const std::string& path, const SceneDescriptor& desc) {
  const Pgm img = read_pgm(path);
  SceneGrid grid{img.width, img.height, 0.05};
  std::vector<ElementMatrix> elements(grid.npixels());
  for (size_t i = 0; i < elements.size(); ++i) {
    const double g = static_cast<double>(img.pixels[i]) / img.maxval;
    switch (desc.interpretation) {
      case SceneDescriptor::Interpretation::stencil: {
        const double tau = 1.0 - g;
        elements[i] = {Complex{tau, 0}, {0, 0}, {0, 0}, Complex{tau, 0}};
        break;
      }
      case SceneDescriptor::Interpretation::phase:
        elements[i] = ElementMatrix::phase(g * desc.max_param);
        break;
      case SceneDescriptor::Interpretation::rotator:
        elements[i] = ElementMatrix::rotator(g * desc.max_param);
        break;
    }
  }
  return SceneObject(grid, std::move(elements), desc.label);
}

namespace {

// Preset geometry is defined on a 128x128 reference raster and scaled
// linearly to the target grid.
struct Scaler {
  int w, h;
  int x(int v) const { return v * w / 128; }
  int y(int v) const { return v * h / 128; }
};

void fill_rect(Bitmap& b, const Scaler& s, int x0, int y0, int x1, int y1) {
  for (int yy = s.y(y0); yy < s.y(y1); ++yy)
    for (int xx = s.x(x0); xx < s.x(x1); ++xx)
      b.set[static_cast<size_t>(yy) * b.width + xx] = 1;
}

void clear_rect(Bitmap& b, const Scaler& s, int x0, int y0, int x1, int y1) {
  for (int yy = s.y(y0); yy < s.y(y1); ++yy)
    for (int xx = s.x(x0); xx < s.x(x1); ++xx)
      b.set[static_cast<size_t>(yy) * b.width + xx] = 0;
}

} // namespace

Bitmap uo_bitmap(const SceneGrid& grid) {
  grid.validate();
  Bitmap b{grid.width, grid.height, std::vector<std::uint8_t>(grid.npixels(), 0)};
  const Scaler s{grid.width, grid.height};
  // "U": two bars plus base. Strokes are 9 px on the reference raster so
  // an all-opaque ROI fits inside the left bar.
  fill_rect(b, s, 30, 24, 39, 64);
  fill_rect(b, s, 49, 24, 58, 64);
  fill_rect(b, s, 30, 55, 58, 64);
  // "O": ring.
  fill_rect(b, s, 66, 24, 94, 64);
  clear_rect(b, s, 75, 33, 85, 55);
  return b;
}

Bitmap bomb_bitmap(const SceneGrid& grid) {
  grid.validate();
  Bitmap b{grid.width, grid.height, std::vector<std::uint8_t>(grid.npixels(), 0)};
  const Scaler s{grid.width, grid.height};
  // Body: disk of radius 16 centered at (44,72) on the reference raster.
  const double cx = 44.0 * grid.width / 128.0;
  const double cy = 72.0 * grid.height / 128.0;
  const double rx = 16.0 * grid.width / 128.0;
  const double ry = 16.0 * grid.height / 128.0;
  for (int yy = 0; yy < grid.height; ++yy) {
    for (int xx = 0; xx < grid.width; ++xx) {
      const double dx = (xx - cx) / rx;
      const double dy = (yy - cy) / ry;
      if (dx * dx + dy * dy <= 1.0) b.set[static_cast<size_t>(yy) * grid.width + xx] = 1;
    }
  }
  // Fuse stub on top of the body.
  fill_rect(b, s, 47, 46, 55, 60);
  return b;
}

PixelRect shard_region(const SceneGrid& grid) {
  const Scaler s{grid.width, grid.height};
  return {s.x(28), s.y(40), s.x(60), s.y(88)};
}

SceneObject make_preset(const std::string& name, const SceneGrid& grid, double shard_phi) {
  if (name == "uo_stencil") return make_stencil(grid, uo_bitmap(grid), "uo_stencil");
  if (name == "glass_shard")
    return make_phase_shard(grid, shard_region(grid), shard_phi, "glass_shard");
  if (name == "bomb_lc") return make_bomb_pattern(grid, bomb_bitmap(grid), "bomb_lc");
  if (name == "identity") return make_uniform(grid, ElementMatrix::identity(), "identity");
  throw ConfigError("unknown scene preset: " + name);
}

RoiPair preset_rois(const std::string& name, const SceneGrid& grid) {
  const Scaler s{grid.width, grid.height};
  const auto rect = [&](int x0, int y0, int x1, int y1) {
    return PixelRect{s.x(x0), s.y(y0), s.x(x1), s.y(y1)};
  };
  // The outside ROI is always the point reflection of the inside ROI
  // about the grid center, so both see identical expected pair flux.
  RoiPair rois;
  if (name == "uo_stencil") {
    rois.inside = rect(31, 28, 38, 60);      // within the U left bar
    rois.outside = rect(90, 68, 97, 100);
    rois.background = rect(8, 80, 56, 120);
  } else if (name == "glass_shard") {
    rois.inside = rect(32, 48, 56, 80);
    rois.outside = rect(72, 48, 96, 80);
    rois.background = rect(72, 8, 96, 32);
  } else if (name == "bomb_lc") {
    rois.inside = rect(34, 62, 54, 82);      // within the body disk
    rois.outside = rect(74, 46, 94, 66);
    rois.background = rect(74, 96, 94, 120);
  } else if (name == "identity") {
    rois.inside = rect(40, 40, 56, 56);
    rois.outside = rect(72, 72, 88, 88);
    rois.background = rect(8, 88, 40, 120);
  } else {
    throw ConfigError("unknown scene preset: " + name);
  }
  rois.validate(grid);
  return rois;
}

} // namespace ifgi
