#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "ifgi/errors.hpp"
#include "ifgi/scene.hpp"

using namespace ifgi;

namespace {

const SceneGrid kGrid{128, 128, 0.05};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ifgi_scene_" + name)).string();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

// Uniform P2 graymap, written without any library help.
void write_uniform_p2(const std::string& path, int w, int h, int maxval, int value) {
  std::ostringstream body;
  body << "P2\n" << w << " " << h << "\n" << maxval << "\n";
  for (int i = 0; i < w * h; ++i) body << value << ((i + 1) % w == 0 ? "\n" : " ");
  write_text(path, body.str());
}

InterferometerSpec balanced() {
  InterferometerSpec s;
  s.r = s.t = 0.5;
  return s;
}

} // namespace

TEST_CASE("stencil constructor maps mask bits to opaque elements") {
  Bitmap clear{kGrid.width, kGrid.height,
               std::vector<std::uint8_t>(kGrid.npixels(), 0)};
  const SceneObject all_clear = make_stencil(kGrid, clear);
  CHECK(all_clear.at(0, 0) == ElementMatrix::identity());
  CHECK(all_clear.at(127, 127) == ElementMatrix::identity());

  Bitmap full = clear;
  std::fill(full.set.begin(), full.set.end(), 1);
  const SceneObject all_set = make_stencil(kGrid, full);
  CHECK(all_set.at(0, 0) == ElementMatrix::opaque());
  CHECK(all_set.at(64, 64) == ElementMatrix::opaque());

  Bitmap wrong{64, 64, std::vector<std::uint8_t>(64 * 64, 0)};
  CHECK_THROWS_AS(make_stencil(kGrid, wrong), ConfigError);
}

TEST_CASE("bundled UO asset matches the procedural preset") {
  const std::string path = std::string(IFGI_ASSETS_DIR) + "/uo_stencil.pgm";

  // Independent scan of the P2 asset: count full-gray samples directly.
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  REQUIRE(magic == "P2");
  REQUIRE(w == 128);
  REQUIRE(h == 128);
  long set_samples = 0;
  for (int i = 0; i < w * h; ++i) {
    long v = -1;
    in >> v;
    REQUIRE(v >= 0);
    if (v == maxval) ++set_samples;
  }
  // Frozen from the letter geometry: U covers 810 pixels, O covers 900.
  CHECK(set_samples == 1710);

  const Bitmap bits = uo_bitmap(kGrid);
  CHECK(bits.count_set() == set_samples);

  const SceneObject from_file = load_scene(path);
  const SceneObject procedural = make_preset("uo_stencil", kGrid);
  REQUIRE(from_file.grid().width == procedural.grid().width);
  REQUIRE(from_file.grid().height == procedural.grid().height);
  long opaque_count = 0;
  for (int y = 0; y < kGrid.height; ++y) {
    for (int x = 0; x < kGrid.width; ++x) {
      CHECK(from_file.at(x, y) == procedural.at(x, y));
      if (procedural.at(x, y) == ElementMatrix::opaque()) ++opaque_count;
    }
  }
  CHECK(opaque_count == set_samples);
}

TEST_CASE("phase shard: zero phase is the identity, pi swaps ports, pi/2 leaks half") {
  const PixelRect region{20, 30, 60, 70};

  const SceneObject flat = make_phase_shard(kGrid, region, 0.0);
  CHECK(flat.at(30, 40) == ElementMatrix::identity());
  CHECK(flat.at(0, 0) == ElementMatrix::identity());

  const SceneObject pi_shard = make_phase_shard(kGrid, region, M_PI);
  const auto p_pi = port_probabilities(pi_shard.at(30, 40), balanced());
  CHECK(p_pi.d == doctest::Approx(1.0).epsilon(1e-12));

  const SceneObject half = make_phase_shard(kGrid, region, M_PI / 2.0);
  const auto p_half = port_probabilities(half.at(30, 40), balanced());
  CHECK(p_half.d == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(make_phase_shard(kGrid, PixelRect{100, 100, 140, 140}, 1.0), ConfigError);
}

TEST_CASE("phase and rotator objects are lossless under any splitting") {
  std::mt19937_64 gen(551u);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  std::uniform_real_distribution<double> ua(0.0, 2.0 * M_PI);
  for (int i = 0; i < 200; ++i) {
    InterferometerSpec spec;
    spec.r = ur(gen);
    spec.t = 1.0 - spec.r;
    spec.gamma = ur(gen);
    const ElementMatrix m =
        (i % 2 == 0) ? ElementMatrix::phase(ua(gen)) : ElementMatrix::rotator(ua(gen));
    const auto p = port_probabilities(m, spec);
    CHECK(std::abs(p.absorbed) <= 1e-12);
  }
}

TEST_CASE("bomb pattern: rotators inside, identity outside") {
  Bitmap empty{kGrid.width, kGrid.height, std::vector<std::uint8_t>(kGrid.npixels(), 0)};
  const SceneObject none = make_bomb_pattern(kGrid, empty);
  CHECK(none.at(5, 5) == ElementMatrix::identity());

  Bitmap full = empty;
  std::fill(full.set.begin(), full.set.end(), 1);
  const SceneObject rotated = make_bomb_pattern(kGrid, full);

  // Direct probe sees nothing: transmission stays 1 at every pixel.
  for (int y = 0; y < kGrid.height; y += 17)
    for (int x = 0; x < kGrid.width; x += 13)
      CHECK(transmission(rotated.at(x, y), PolarizedAmplitude::horizontal()) ==
            doctest::Approx(1.0).epsilon(1e-12));

  // The interferometer sees it: half the light reaches the dark port.
  const auto p = port_probabilities(rotated.at(64, 64), balanced());
  CHECK(p.d == doctest::Approx(0.5).epsilon(1e-12));

  Bitmap wrong{10, 10, std::vector<std::uint8_t>(100, 1)};
  CHECK_THROWS_AS(make_bomb_pattern(kGrid, wrong), ConfigError);
}

TEST_CASE("loaded graymaps scale parameters linearly with gray level") {
  SUBCASE("all-zero stencil is fully transparent") {
    const std::string pgm = temp_path("zero.pgm");
    write_uniform_p2(pgm, 16, 16, 255, 0);
    write_text(pgm + ".scene", "interpretation = stencil\n");
    const SceneObject scene = load_scene(pgm);
    CHECK(scene.at(3, 3) == ElementMatrix::identity());
  }

  SUBCASE("full-gray phase(pi) map applies e^{i pi} everywhere") {
    const std::string pgm = temp_path("pi.pgm");
    write_uniform_p2(pgm, 16, 16, 65535, 65535);
    write_text(pgm + ".scene",
               "interpretation = phase\nmax_param = 3.141592653589793\n");
    const SceneObject scene = load_scene(pgm);
    CHECK(scene.at(7, 7) == ElementMatrix::phase(M_PI));
  }

  SUBCASE("50% gray of a 90-degree rotator map is a 45-degree rotator") {
    const std::string pgm = temp_path("half.pgm");
    write_uniform_p2(pgm, 16, 16, 100, 50);
    write_text(pgm + ".scene",
               "interpretation = rotator\nmax_param = 1.5707963267948966\n");
    const SceneObject scene = load_scene(pgm);
    CHECK(scene.at(0, 15) == ElementMatrix::rotator(0.5 * 1.5707963267948966));
  }

  SUBCASE("malformed graymap and unknown descriptor fail loudly") {
    const std::string bad = temp_path("bad.pgm");
    write_text(bad, "P9 what\n");
    write_text(bad + ".scene", "interpretation = stencil\n");
    CHECK_THROWS_AS(load_scene(bad), IoError);

    const std::string odd = temp_path("odd.pgm");
    write_uniform_p2(odd, 8, 8, 255, 0);
    write_text(odd + ".scene", "interpretation = hologram\n");
    CHECK_THROWS_AS(load_scene(odd), ConfigError);

    CHECK_THROWS_AS(load_scene(temp_path("missing.pgm")), IoError);
  }
}

TEST_CASE("constructors are deterministic") {
  const SceneObject a = make_preset("bomb_lc", kGrid);
  const SceneObject b = make_preset("bomb_lc", kGrid);
  CHECK(a.elements() == b.elements());

  const SceneObject s1 = make_phase_shard(kGrid, shard_region(kGrid), 1.3);
  const SceneObject s2 = make_phase_shard(kGrid, shard_region(kGrid), 1.3);
  CHECK(s1.elements() == s2.elements());
}

TEST_CASE("random masks and angles always produce passive scenes") {
  std::mt19937_64 gen(8112u);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> ua(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SceneGrid small{16, 16, 0.05};
    Bitmap bits{16, 16, {}};
    bits.set.resize(256);
    for (auto& v : bits.set) v = static_cast<std::uint8_t>(bit(gen));
    const SceneObject stencil = make_stencil(small, bits);
    const SceneObject bomb = make_bomb_pattern(small, bits);
    const SceneObject shard = make_phase_shard(small, PixelRect{2, 2, 12, 12}, ua(gen));
    for (const auto* scene : {&stencil, &bomb, &shard})
      for (const auto& m : scene->elements()) CHECK(m.is_passive());
  }
}

TEST_CASE("preset ROIs are point-symmetric about the grid center") {
  for (const char* name : {"uo_stencil", "glass_shard", "bomb_lc", "identity"}) {
    const RoiPair rois = preset_rois(name, kGrid);
    CHECK(rois.outside.x0 == kGrid.width - rois.inside.x1);
    CHECK(rois.outside.x1 == kGrid.width - rois.inside.x0);
    CHECK(rois.outside.y0 == kGrid.height - rois.inside.y1);
    CHECK(rois.outside.y1 == kGrid.height - rois.inside.y0);
    CHECK_NOTHROW(rois.validate(kGrid));
  }
  CHECK_THROWS_AS(preset_rois("nope", kGrid), ConfigError);
}

TEST_CASE("roi validation rejects overlap and out-of-grid regions") {
  RoiPair rois = preset_rois("identity", kGrid);
  rois.outside = rois.inside;
  CHECK_THROWS_AS(rois.validate(kGrid), ConfigError);

  rois = preset_rois("identity", kGrid);
  rois.background = PixelRect{120, 120, 130, 130};
  CHECK_THROWS_AS(rois.validate(kGrid), ConfigError);

  rois = preset_rois("identity", kGrid);
  rois.inside = PixelRect{10, 10, 10, 20};
  CHECK_THROWS_AS(rois.validate(kGrid), ConfigError);
}
