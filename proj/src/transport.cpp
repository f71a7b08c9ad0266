#include "ifgi/transport.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "ifgi/errors.hpp"

namespace ifgi {

void SourceSpec::validate() const {
  if (!(pump_sigma_mm > 0.0)) throw ConfigError("pump_sigma must be positive");
  if (!(corr_sigma_mm >= 0.0)) throw ConfigError("corr_sigma must be non-negative");
  if (!(pair_rate >= 0.0)) throw ConfigError("pair_rate must be non-negative");
}

void DetectorSpec::validate() const {
  if (!(eta_bucket >= 0.0 && eta_bucket <= 1.0) || !(eta_camera >= 0.0 && eta_camera <= 1.0))
    throw ConfigError("detector efficiencies must lie in [0,1]");
  if (!(dark_rate_bucket >= 0.0)) throw ConfigError("dark_rate_bucket must be non-negative");
  if (!(accidental_rate_camera >= 0.0))
    throw ConfigError("accidental_rate_camera must be non-negative");
}

void CountImage::add(const CountImage& other) {
  for (size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

std::uint64_t CountImage::total() const {
  std::uint64_t sum = 0;
  for (const auto c : counts) sum += c;
  return sum;
}

SignedImage to_signed(const CountImage& image) {
  SignedImage out(image.grid);
  for (size_t i = 0; i < image.counts.size(); ++i)
    out.values[i] = static_cast<std::int64_t>(image.counts[i]);
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw ContractError("signed image arithmetic overflow");
  return out;
}

void RunTallies::add(const RunTallies& other) {
  pairs += other.pairs;
  interacted += other.interacted;
  absorbed += other.absorbed;
  discarded += other.discarded;
  bucket_c += other.bucket_c;
  bucket_d += other.bucket_d;
  dark_counts += other.dark_counts;
}

std::optional<PairSample> sample_pair(const SourceSpec& source, const SceneGrid& grid,
                                      RngStream& rng) {
  const double sigma_pump = source.pump_sigma_mm / grid.pitch_mm;
  const double sigma_corr = source.corr_sigma_mm / grid.pitch_mm;
  const double cx = 0.5 * grid.width;
  const double cy = 0.5 * grid.height;

  for (int attempt = 0; attempt <= kOffGridRetries; ++attempt) {
    const double bx = rng.normal(cx, sigma_pump);
    const double by = rng.normal(cy, sigma_pump);
    const double sx = bx + rng.normal(0.0, sigma_corr);
    const double sy = by + rng.normal(0.0, sigma_corr);
    const double ix = bx + rng.normal(0.0, sigma_corr);
    const double iy = by + rng.normal(0.0, sigma_corr);

    PairSample s;
    s.birth_x = static_cast<int>(std::floor(bx));
    s.birth_y = static_cast<int>(std::floor(by));
    s.signal_x = static_cast<int>(std::floor(sx));
    s.signal_y = static_cast<int>(std::floor(sy));
    s.idler_x = static_cast<int>(std::floor(ix));
    s.idler_y = static_cast<int>(std::floor(iy));
    if (grid.contains(s.birth_x, s.birth_y) && grid.contains(s.signal_x, s.signal_y) &&
        grid.contains(s.idler_x, s.idler_y))
      return s;
  }
  return std::nullopt;
}

namespace {

// Per-pixel outcome sampler shared by the public transport functions and
// the cached fast path in run_frames. Draw order: arm, absorption, port,
// bucket thinning, camera thinning.
PairEvent sample_outcome(const PairSample& sample, const PortProbabilities& p, double s, double t,
                         const DetectorSpec& det, RngStream& rng) {
  PairEvent ev;
  ev.sample = sample;
  ev.interacted = rng.bernoulli(t);
  if (ev.interacted && rng.bernoulli(1.0 - s)) {
    ev.absorbed = true;
  } else {
    const double denom = p.c + p.d;
    if (denom > 0.0) {
      const BucketPort exit_port = rng.bernoulli(p.c / denom) ? BucketPort::C : BucketPort::D;
      if (rng.bernoulli(det.eta_bucket)) ev.bucket_port = exit_port;
    }
  }
  ev.camera_click = rng.bernoulli(det.eta_camera);
  return ev;
}

PairEvent sample_outcome_direct(const PairSample& sample, double s, const DetectorSpec& det,
                                RngStream& rng) {
  PairEvent ev;
  ev.sample = sample;
  ev.interacted = true;
  if (rng.bernoulli(1.0 - s)) {
    ev.absorbed = true;
  } else if (rng.bernoulli(det.eta_bucket)) {
    ev.bucket_port = BucketPort::C;
  }
  ev.camera_click = rng.bernoulli(det.eta_camera);
  return ev;
}

} // namespace

PairEvent transport_pair(const PairSample& sample, const SceneObject& scene,
                         const InterferometerSpec& spec, const DetectorSpec& det, RngStream& rng) {
  det.validate();
  const ElementMatrix& obj = scene.at(sample.signal_x, sample.signal_y);
  const PortProbabilities p = port_probabilities(obj, spec);
  const double s = std::min(1.0, transmission(obj, spec.input_pol));
  return sample_outcome(sample, p, s, spec.t, det, rng);
}

PairEvent transport_pair_direct(const PairSample& sample, const SceneObject& scene,
                                const PolarizedAmplitude& input_pol, const DetectorSpec& det,
                                RngStream& rng) {
  det.validate();
  const double s = std::min(1.0, transmission(scene.at(sample.signal_x, sample.signal_y), input_pol));
  return sample_outcome_direct(sample, s, det, rng);
}

namespace {

struct PixelProbs {
  PortProbabilities p;
  double s = 1.0;
};

void tally_event(RunTallies& tallies, const PairEvent& ev) {
  ++tallies.pairs;
  tallies.interacted += ev.interacted;
  tallies.absorbed += ev.absorbed;
  tallies.bucket_c += (ev.bucket_port == BucketPort::C);
  tallies.bucket_d += (ev.bucket_port == BucketPort::D);
}

// Uncorrelated per-gate processes: dark bucket counts that open the
// camera on an unrelated idler photon, and the flat accidental field.
// Both deposit in coincidence and shifted mode alike, which is what
// makes the shifted-gate image a valid background estimate.
void deposit_backgrounds(CountImage& image, const SourceSpec& source, const DetectorSpec& det,
                         const SceneGrid& grid, RngStream& rng, RunTallies& tallies) {
  const std::uint64_t n_dark = rng.poisson(det.dark_rate_bucket);
  tallies.dark_counts += n_dark;
  for (std::uint64_t i = 0; i < n_dark; ++i) {
    const auto sample = sample_pair(source, grid, rng);
    if (sample && rng.bernoulli(det.eta_camera)) image.increment(sample->idler_x, sample->idler_y);
  }
  const auto npx = static_cast<std::uint64_t>(grid.npixels());
  const std::uint64_t n_acc = rng.poisson(det.accidental_rate_camera * static_cast<double>(npx));
  for (std::uint64_t i = 0; i < n_acc; ++i) ++image.counts[rng.index(npx)];
}

template <typename PerPair>
FrameRunResult run_frame_range(const SceneGrid& grid, const SourceSpec& source,
                               const DetectorSpec& det, PortSelect port_select, std::uint64_t seed,
                               std::uint64_t first_frame, std::uint64_t last_frame,
                               PerPair&& per_pair) {
  FrameRunResult result(grid);
  for (std::uint64_t f = first_frame; f < last_frame; ++f) {
    RngStream rng(frame_seed(seed, f));
    const std::uint64_t n_pairs = rng.poisson(source.pair_rate);
    for (std::uint64_t i = 0; i < n_pairs; ++i) {
      const auto sample = sample_pair(source, grid, rng);
      if (!sample) {
        ++result.tallies.discarded;
        continue;
      }
      const PairEvent ev = per_pair(*sample, rng);
      tally_event(result.tallies, ev);
      if (det.gate_mode == GateMode::coincidence && ev.camera_click) {
        if (ev.bucket_port == BucketPort::C &&
            (port_select == PortSelect::C || port_select == PortSelect::Both))
          result.image_c.increment(ev.sample.idler_x, ev.sample.idler_y);
        if (ev.bucket_port == BucketPort::D &&
            (port_select == PortSelect::D || port_select == PortSelect::Both))
          result.image_d.increment(ev.sample.idler_x, ev.sample.idler_y);
      }
    }
    if (port_select == PortSelect::C || port_select == PortSelect::Both)
      deposit_backgrounds(result.image_c, source, det, grid, rng, result.tallies);
    if (port_select == PortSelect::D || port_select == PortSelect::Both)
      deposit_backgrounds(result.image_d, source, det, grid, rng, result.tallies);
  }
  return result;
}

template <typename PerPair>
FrameRunResult run_threaded(const SceneGrid& grid, const SourceSpec& source,
                            const DetectorSpec& det, std::uint64_t n_frames,
                            PortSelect port_select, std::uint64_t seed, int n_threads,
                            PerPair&& per_pair) {
  if (n_threads <= 1 || n_frames < 2) {
    return run_frame_range(grid, source, det, port_select, seed, 0, n_frames, per_pair);
  }
  const auto workers = static_cast<std::uint64_t>(n_threads);
  const std::uint64_t chunk = (n_frames + workers - 1) / workers;
  std::vector<FrameRunResult> partials;
  partials.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) partials.emplace_back(grid);

  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t first = std::min(w * chunk, n_frames);
    const std::uint64_t last = std::min(first + chunk, n_frames);
    threads.emplace_back([&, w, first, last] {
      partials[w] = run_frame_range(grid, source, det, port_select, seed, first, last, per_pair);
    });
  }
  for (auto& t : threads) t.join();

  FrameRunResult result(grid);
  for (const auto& part : partials) {
    result.image_c.add(part.image_c);
    result.image_d.add(part.image_d);
    result.tallies.add(part.tallies);
  }
  return result;
}

} // namespace

FrameRunResult run_frames(const SceneObject& scene, const InterferometerSpec& spec,
                          const SourceSpec& source, const DetectorSpec& det,
                          std::uint64_t n_frames, PortSelect port_select, std::uint64_t seed,
                          int n_threads) {
  spec.validate();
  source.validate();
  det.validate();
  const SceneGrid& grid = scene.grid();

  // Per-pixel probabilities are scene/spec constants; cache them once.
  std::vector<PixelProbs> table(grid.npixels());
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      const ElementMatrix& obj = scene.at(x, y);
      auto& cell = table[static_cast<size_t>(y) * grid.width + x];
      cell.p = port_probabilities(obj, spec);
      cell.s = std::min(1.0, transmission(obj, spec.input_pol));
    }
  }

  const double t = spec.t;
  auto per_pair = [&table, &grid, t, &det](const PairSample& sample, RngStream& rng) {
    const auto& cell = table[static_cast<size_t>(sample.signal_y) * grid.width + sample.signal_x];
    return sample_outcome(sample, cell.p, cell.s, t, det, rng);
  };
  return run_threaded(grid, source, det, n_frames, port_select, seed, n_threads, per_pair);
}

FrameRunResult run_frames_direct(const SceneObject& scene, const PolarizedAmplitude& input_pol,
                                 const SourceSpec& source, const DetectorSpec& det,
                                 std::uint64_t n_frames, std::uint64_t seed, int n_threads) {
  source.validate();
  det.validate();
  const SceneGrid& grid = scene.grid();

  std::vector<double> table(grid.npixels());
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x)
      table[static_cast<size_t>(y) * grid.width + x] =
          std::min(1.0, transmission(scene.at(x, y), input_pol));

  auto per_pair = [&table, &grid, &det](const PairSample& sample, RngStream& rng) {
    const double s = table[static_cast<size_t>(sample.signal_y) * grid.width + sample.signal_x];
    return sample_outcome_direct(sample, s, det, rng);
  };
  return run_threaded(grid, source, det, n_frames, PortSelect::C, seed, n_threads, per_pair);
}

} // namespace ifgi
