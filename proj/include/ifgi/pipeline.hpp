#pragma once

#include <span>
#include <string>
#include <vector>

#include "ifgi/image.hpp"
#include "ifgi/transport.hpp"

namespace ifgi {

/// One term of a signed pixel-wise sum.
struct ComposeTerm {
  const CountImage* image = nullptr;
  int coefficient = 1;
};

/// Exact signed pixel-wise arithmetic, no clamping. Throws ConfigError
/// on grid mismatch and ContractError on int64 overflow.
SignedImage compose(std::span<const ComposeTerm> terms);

/// Whether shifted-gate accidental images are acquired and subtracted
/// from every channel before composition.
enum class AccidentalCorrection { per_channel, off };

struct PipelineOptions {
  AccidentalCorrection accidental_correction = AccidentalCorrection::per_channel;
  int n_threads = 1;
};

struct ChannelRun {
  std::string name;
  CountImage image;
  RunTallies tallies;
};

/// Output of one full experiment. `object_tallies` aggregates the
/// coincidence channels that had the object in the beam, which is the
/// basis for interaction accounting.
struct RunReport {
  std::string mode; ///< "cgi" or "ifgi"
  SignedImage composed;
  std::vector<ChannelRun> channels;
  RunTallies object_tallies;

  const ChannelRun& channel(const std::string& name) const;
  bool has_channel(const std::string& name) const;
  /// interacted / pairs over the with-object coincidence channels.
  double interacted_fraction() const;
};

/// Conventional ghost imaging: the object sits directly in the probe
/// beam, one bucket detector collects transmitted light. Channels:
/// "c" plus "acc_c" (shifted gate) when accidental correction is on;
/// composed = c - acc_c.
RunReport run_cgi(const SceneObject& scene, const PolarizedAmplitude& input_pol,
                  const SourceSpec& source, const DetectorSpec& det, std::uint64_t n_frames,
                  std::uint64_t seed, const PipelineOptions& options = {});

/// Interaction-free ghost imaging. Three coincidence acquisitions under
/// one master seed with derived streams: constructive port with object
/// ("c"), destructive port with object ("d"), destructive port with no
/// object ("b", the imperfect-interference background), plus their
/// shifted-gate accidental images. Composed image:
///   (c - acc_c) - (d - acc_d) - (b - acc_b).
RunReport run_ifgi(const SceneObject& scene, const InterferometerSpec& spec,
                   const SourceSpec& source, const DetectorSpec& det, std::uint64_t n_frames,
                   std::uint64_t seed, const PipelineOptions& options = {});

} // namespace ifgi
