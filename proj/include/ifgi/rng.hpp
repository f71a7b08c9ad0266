#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ifgi {

/// splitmix64 output function; also used as the seed mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Channel seeds are derived from the master seed and a tag string, so
/// every named run (port, background, accidental) gets an independent
/// stream under one master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
  for (const char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(master) ^ h);
}

/// Counter-based: the stream for frame k is a pure function of
/// (channel_seed, k), so frames can run on any worker in any order and
/// still reproduce the serial result exactly.
inline std::uint64_t frame_seed(std::uint64_t channel_seed, std::uint64_t frame_index) {
  return splitmix64(channel_seed + frame_index * 0x9e3779b97f4a7c15ULL);
}

/// One random stream. Thin wrapper so sampling call sites stay terse.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return unit_(engine_); }

  bool bernoulli(double p) { return unit_(engine_) < p; }

  double normal(double mu, double sigma) {
    if (sigma <= 0.0) return mu;
    return std::normal_distribution<double>(mu, sigma)(engine_);
  }

  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(engine_);
  }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

} // namespace ifgi
