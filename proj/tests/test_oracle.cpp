#include <doctest.h>

#include <cmath>
#include <random>

#include "ifgi/errors.hpp"
#include "ifgi/oracle.hpp"
#include "ifgi/transport.hpp"

using namespace ifgi;

namespace {

InterferometerSpec spec_of(double r, double gamma = 1.0) {
  InterferometerSpec s;
  s.r = r;
  s.t = 1.0 - r;
  s.gamma = gamma;
  return s;
}

} // namespace

TEST_CASE("expected counts for the opaque object at 25:75") {
  const ExpectationRecord rec = expected_counts(1000.0, spec_of(0.25), ElementMatrix::opaque());
  CHECK(rec.expected_c == doctest::Approx(62.5).epsilon(1e-12));
  CHECK(rec.expected_d == doctest::Approx(187.5).epsilon(1e-12));
  CHECK(rec.expected_absorbed == doctest::Approx(750.0).epsilon(1e-12));
  CHECK(rec.delta_c == doctest::Approx(1000.0 * (0.0625 - 1.0)).epsilon(1e-12)); // -937.5
  CHECK(rec.delta_d == doctest::Approx(187.5).epsilon(1e-12));
  CHECK(rec.delta_n_ifgi == doctest::Approx(-1125.0).epsilon(1e-12));
  CHECK(rec.delta_n_cgi == doctest::Approx(-1000.0).epsilon(1e-12));
}

TEST_CASE("zero probe photons give an all-zero record") {
  const ExpectationRecord rec = expected_counts(0.0, spec_of(0.5), ElementMatrix::opaque());
  CHECK(rec.expected_c == 0.0);
  CHECK(rec.expected_d == 0.0);
  CHECK(rec.expected_absorbed == 0.0);
  CHECK(rec.delta_n_ifgi == 0.0);
  CHECK(rec.delta_n_cgi == 0.0);
}

TEST_CASE("expected counts agree with n x port probabilities on random draws") {
  std::mt19937_64 gen(2717u);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  std::uniform_real_distribution<double> ua(-M_PI, M_PI);
  for (int i = 0; i < 1000; ++i) {
    const InterferometerSpec spec = spec_of(ur(gen), ur(gen));
    ElementMatrix obj;
    switch (i % 4) {
      case 0: obj = ElementMatrix::opaque(); break;
      case 1: obj = ElementMatrix::phase(ua(gen)); break;
      case 2: obj = ElementMatrix::rotator(ua(gen)); break;
      default: obj = ElementMatrix::linear_polarizer(ua(gen)); break;
    }
    const double n = 1.0 + 1e6 * ur(gen);
    const PortProbabilities p = port_probabilities(obj, spec);
    const ExpectationRecord rec = expected_counts(n, spec, obj);
    CHECK(std::abs(rec.expected_c - n * p.c) <= 1e-9 * std::max(1.0, n));
    CHECK(std::abs(rec.expected_d - n * p.d) <= 1e-9 * std::max(1.0, n));
    CHECK(std::abs(rec.expected_absorbed - n * p.absorbed) <= 1e-9 * std::max(1.0, n));
    CHECK(std::abs(rec.expected_c + rec.expected_d + rec.expected_absorbed - n) <= 1e-9 * n);
  }
}

TEST_CASE("port-difference change formula and its paper anchors") {
  CHECK(delta_n_ifgi(1000.0, 0.5, 0.5) == -1000.0);
  CHECK(delta_n_ifgi(1000.0, 0.25, 0.75) == -1125.0);
  CHECK(delta_n_ifgi(1000.0, 0.0, 1.0) == -1000.0);
  for (const double n : {1.0, 10.0, 31337.0})
    CHECK(delta_n_ifgi(n, 0.5, 0.5) == -n);
  CHECK_THROWS_AS(delta_n_ifgi(10.0, 0.6, 0.6), ConfigError);
  CHECK_THROWS_AS(delta_n_ifgi(10.0, -0.1, 1.1), ConfigError);
}

TEST_CASE("optimal splitting is r=0.25 with gain 9/8") {
  const SplitOptimum best = optimal_splitting();
  CHECK(std::abs(best.r - 0.25) <= 1e-9);
  CHECK(std::abs(best.gain - 1.125) <= 1e-9);
}

TEST_CASE("gain never exceeds 9/8 and the boundaries behave") {
  const auto gain = [](double r) { return std::abs(delta_n_ifgi(1.0, r, 1.0 - r)); };
  double best_r = 0.0, best_gain = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double r = i / 10000.0;
    const double g = gain(r);
    CHECK(g <= 1.125 + 1e-12);
    if (g > best_gain) {
      best_gain = g;
      best_r = r;
    }
  }
  CHECK(best_r == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(gain(0.0) == doctest::Approx(1.0));  // direct-probe equivalent
  CHECK(gain(1.0) == doctest::Approx(0.0));
  CHECK(gain(0.5) == doctest::Approx(1.0));
}

TEST_CASE("phase signal follows 2 n r t (1 - cos phi)") {
  CHECK(phase_signal(1000.0, 0.5, 0.5, 0.0) == 0.0);
  CHECK(phase_signal(1000.0, 0.5, 0.5, M_PI) == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(phase_signal(1000.0, 0.5, 0.5, M_PI / 2.0) == doctest::Approx(500.0).epsilon(1e-12));
  CHECK_THROWS_AS(phase_signal(10.0, 0.3, 0.4, 1.0), ConfigError);
}

TEST_CASE("transport frequencies land inside 3-sigma bands of the expectations") {
  const SceneGrid grid{8, 8, 0.05};
  const SceneObject scene = make_uniform(grid, ElementMatrix::opaque());
  const InterferometerSpec spec = spec_of(0.5);
  const DetectorSpec det{1.0, 1.0, 0.0, 0.0, GateMode::coincidence};
  const SourceSpec source{2.0, 0.0, 100.0};

  const auto run = run_frames(scene, spec, source, det, 2000, PortSelect::Both, 6021u);
  const double n = static_cast<double>(run.tallies.pairs);
  const ExpectationRecord rec = expected_counts(n, spec, ElementMatrix::opaque());
  CHECK(std::abs(static_cast<double>(run.tallies.bucket_c) - rec.expected_c) <
        3.0 * std::sqrt(rec.expected_c));
  CHECK(std::abs(static_cast<double>(run.tallies.bucket_d) - rec.expected_d) <
        3.0 * std::sqrt(rec.expected_d));
  CHECK(std::abs(static_cast<double>(run.tallies.absorbed) - rec.expected_absorbed) <
        3.0 * std::sqrt(rec.expected_absorbed));
}
