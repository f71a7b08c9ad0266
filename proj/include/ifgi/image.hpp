#pragma once

#include <cstdint>
#include <vector>

#include "ifgi/scene.hpp"

namespace ifgi {

/// Per-pixel unsigned event counts for one detection channel.
struct CountImage {
  SceneGrid grid;
  std::vector<std::uint32_t> counts;

  explicit CountImage(const SceneGrid& g) : grid(g), counts(g.npixels(), 0) {}

  std::uint32_t at(int x, int y) const { return counts[static_cast<size_t>(y) * grid.width + x]; }
  void increment(int x, int y) { ++counts[static_cast<size_t>(y) * grid.width + x]; }

  /// Pixel-wise merge of a worker-local accumulator.
  void add(const CountImage& other);

  std::uint64_t total() const;
  bool operator==(const CountImage&) const = default;
};

/// Signed per-pixel values for composed results. Negative pixels are
/// kept; clamping happens only at export time.
struct SignedImage {
  SceneGrid grid;
  std::vector<std::int64_t> values;

  explicit SignedImage(const SceneGrid& g) : grid(g), values(g.npixels(), 0) {}

  std::int64_t at(int x, int y) const { return values[static_cast<size_t>(y) * grid.width + x]; }

  bool operator==(const SignedImage&) const = default;
};

SignedImage to_signed(const CountImage& image);

/// Overflow-checked signed addition; throws ContractError on overflow.
std::int64_t checked_add(std::int64_t a, std::int64_t b);

} // namespace ifgi
