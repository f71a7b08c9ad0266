#pragma once

#include <cstdint>
#include <optional>

#include "ifgi/image.hpp"
#include "ifgi/jones.hpp"
#include "ifgi/rng.hpp"
#include "ifgi/scene.hpp"

namespace ifgi {

/// Photon-pair source in the image plane. The pump profile is an
/// isotropic Gaussian centered on the grid; signal and idler positions
/// are the shared birth position plus independent Gaussian blur.
struct SourceSpec {
  double pump_sigma_mm = 1.6;
  double corr_sigma_mm = 0.0;
  double pair_rate = 100.0; ///< expected pairs per frame

  void validate() const;
};

enum class GateMode { coincidence, shifted };

struct DetectorSpec {
  double eta_bucket = 1.0;
  double eta_camera = 1.0;
  double dark_rate_bucket = 0.0;        ///< counts per frame
  double accidental_rate_camera = 0.0;  ///< counts per pixel per gated frame
  GateMode gate_mode = GateMode::coincidence;

  void validate() const;
};

enum class BucketPort : std::uint8_t { C, D, none };

/// Pixel positions of one accepted pair.
struct PairSample {
  int birth_x = 0, birth_y = 0;
  int signal_x = 0, signal_y = 0;
  int idler_x = 0, idler_y = 0;
};

/// Outcome of one pair after detection thinning. `bucket_port` is the
/// registered port (none when the photon was absorbed or the detector
/// missed it); `camera_click` tells whether the idler was registered.
struct PairEvent {
  PairSample sample;
  BucketPort bucket_port = BucketPort::none;
  bool camera_click = false;
  bool interacted = false; ///< photon entered the object arm
  bool absorbed = false;
};

/// Draws one pair. Off-grid positions are resampled up to
/// `kOffGridRetries` times; after that the pair is discarded (nullopt)
/// and must be tallied by the caller.
inline constexpr int kOffGridRetries = 16;
std::optional<PairSample> sample_pair(const SourceSpec& source, const SceneGrid& grid,
                                      RngStream& rng);

/// Routes the object-arm photon through the interferometer at the
/// signal pixel. The arm choice is sampled first (probability t of
/// entering the object arm), absorption happens only there, and the
/// exit port of a surviving photon follows the conditional
/// port-probability split, so all marginals match port_probabilities
/// while interaction accounting stays exact.
PairEvent transport_pair(const PairSample& sample, const SceneObject& scene,
                         const InterferometerSpec& spec, const DetectorSpec& det, RngStream& rng);

/// Direct-beam variant: no interferometer, the object sits in the probe
/// beam, the bucket collects the transmitted light. Every transported
/// photon meets the object plane.
PairEvent transport_pair_direct(const PairSample& sample, const SceneObject& scene,
                                const PolarizedAmplitude& input_pol, const DetectorSpec& det,
                                RngStream& rng);

struct RunTallies {
  std::uint64_t pairs = 0;      ///< pairs transported (off-grid discards excluded)
  std::uint64_t interacted = 0;
  std::uint64_t absorbed = 0;
  std::uint64_t discarded = 0;  ///< off-grid after retry cap
  std::uint64_t bucket_c = 0;
  std::uint64_t bucket_d = 0;
  std::uint64_t dark_counts = 0;

  void add(const RunTallies& other);
  bool operator==(const RunTallies&) const = default;
};

enum class PortSelect { C, D, Both };

struct FrameRunResult {
  CountImage image_c;
  CountImage image_d;
  RunTallies tallies;

  FrameRunResult(const SceneGrid& g) : image_c(g), image_d(g) {}
};

/// Runs `n_frames` frames with Poisson(pair_rate) pairs each. In
/// coincidence mode a camera pixel in image_P increments when the
/// bucket registers port P and the camera clicks; in shifted mode the
/// coincidence link is broken and only accidental and dark processes
/// deposit. Every frame owns an independent derived RNG stream, so the
/// result is bit-identical for any `n_threads`.
FrameRunResult run_frames(const SceneObject& scene, const InterferometerSpec& spec,
                          const SourceSpec& source, const DetectorSpec& det,
                          std::uint64_t n_frames, PortSelect port_select, std::uint64_t seed,
                          int n_threads = 1);

/// Direct-beam (single detector) counterpart; the result's image_c is
/// the coincidence image and image_d stays empty.
FrameRunResult run_frames_direct(const SceneObject& scene, const PolarizedAmplitude& input_pol,
                                 const SourceSpec& source, const DetectorSpec& det,
                                 std::uint64_t n_frames, std::uint64_t seed, int n_threads = 1);

} // namespace ifgi
