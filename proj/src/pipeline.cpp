#include "ifgi/pipeline.hpp"

#include <utility>

#include "ifgi/errors.hpp"

namespace ifgi {

SignedImage compose(std::span<const ComposeTerm> terms) {
  if (terms.empty()) throw ConfigError("compose needs at least one term");
  const SceneGrid& grid = terms[0].image->grid;
  for (const auto& term : terms)
    if (!(term.image->grid == grid)) throw ConfigError("compose: image grids mismatch");

  SignedImage out(grid);
  for (const auto& term : terms) {
    for (size_t i = 0; i < out.values.size(); ++i) {
      std::int64_t contribution = 0;
      if (__builtin_mul_overflow(static_cast<std::int64_t>(term.image->counts[i]),
                                 static_cast<std::int64_t>(term.coefficient), &contribution))
        throw ContractError("signed image arithmetic overflow");
      out.values[i] = checked_add(out.values[i], contribution);
    }
  }
  return out;
}

const ChannelRun& RunReport::channel(const std::string& name) const {
  for (const auto& ch : channels)
    if (ch.name == name) return ch;
  throw ConfigError("no such channel: " + name);
}

bool RunReport::has_channel(const std::string& name) const {
  for (const auto& ch : channels)
    if (ch.name == name) return true;
  return false;
}

double RunReport::interacted_fraction() const {
  if (object_tallies.pairs == 0) return 0.0;
  return static_cast<double>(object_tallies.interacted) /
         static_cast<double>(object_tallies.pairs);
}

namespace {

DetectorSpec with_gate(const DetectorSpec& det, GateMode mode) {
  DetectorSpec out = det;
  out.gate_mode = mode;
  return out;
}

} // namespace

RunReport run_cgi(const SceneObject& scene, const PolarizedAmplitude& input_pol,
                  const SourceSpec& source, const DetectorSpec& det, std::uint64_t n_frames,
                  std::uint64_t seed, const PipelineOptions& options) {
  RunReport report{.mode = "cgi", .composed = SignedImage(scene.grid()), .channels = {}, .object_tallies = {}};

  auto signal = run_frames_direct(scene, input_pol, source, with_gate(det, GateMode::coincidence),
                                  n_frames, derive_seed(seed, "cgi.c"), options.n_threads);
  report.object_tallies = signal.tallies;
  report.channels.push_back({"c", std::move(signal.image_c), signal.tallies});

  if (options.accidental_correction == AccidentalCorrection::per_channel) {
    auto acc = run_frames_direct(scene, input_pol, source, with_gate(det, GateMode::shifted),
                                 n_frames, derive_seed(seed, "cgi.acc_c"), options.n_threads);
    report.channels.push_back({"acc_c", std::move(acc.image_c), acc.tallies});
    const ComposeTerm terms[] = {{&report.channel("c").image, 1},
                                 {&report.channel("acc_c").image, -1}};
    report.composed = compose(terms);
  } else {
    const ComposeTerm terms[] = {{&report.channel("c").image, 1}};
    report.composed = compose(terms);
  }
  return report;
}

RunReport run_ifgi(const SceneObject& scene, const InterferometerSpec& spec,
                   const SourceSpec& source, const DetectorSpec& det, std::uint64_t n_frames,
                   std::uint64_t seed, const PipelineOptions& options) {
  spec.validate();
  const SceneObject empty = make_uniform(scene.grid(), ElementMatrix::identity(), "no_object");

  RunReport report{.mode = "ifgi", .composed = SignedImage(scene.grid()), .channels = {}, .object_tallies = {}};

  const auto acquire = [&](const std::string& name, const SceneObject& sc, PortSelect port,
                           GateMode gate) {
    auto run = run_frames(sc, spec, source, with_gate(det, gate), n_frames, port,
                          derive_seed(seed, "ifgi." + name), options.n_threads);
    CountImage image = (port == PortSelect::C) ? std::move(run.image_c) : std::move(run.image_d);
    report.channels.push_back({name, std::move(image), run.tallies});
  };

  acquire("c", scene, PortSelect::C, GateMode::coincidence);
  acquire("d", scene, PortSelect::D, GateMode::coincidence);
  acquire("b", empty, PortSelect::D, GateMode::coincidence);

  report.object_tallies = report.channel("c").tallies;
  report.object_tallies.add(report.channel("d").tallies);

  if (options.accidental_correction == AccidentalCorrection::per_channel) {
    acquire("acc_c", scene, PortSelect::C, GateMode::shifted);
    acquire("acc_d", scene, PortSelect::D, GateMode::shifted);
    acquire("acc_b", empty, PortSelect::D, GateMode::shifted);
    const ComposeTerm terms[] = {
        {&report.channel("c").image, 1},  {&report.channel("acc_c").image, -1},
        {&report.channel("d").image, -1}, {&report.channel("acc_d").image, 1},
        {&report.channel("b").image, -1}, {&report.channel("acc_b").image, 1},
    };
    report.composed = compose(terms);
  } else {
    const ComposeTerm terms[] = {
        {&report.channel("c").image, 1},
        {&report.channel("d").image, -1},
        {&report.channel("b").image, -1},
    };
    report.composed = compose(terms);
  }
  return report;
}

} // namespace ifgi
