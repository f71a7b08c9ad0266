#include <doctest.h>

#include <cmath>

#include "ifgi/errors.hpp"
#include "ifgi/metrics.hpp"
#include "ifgi/pipeline.hpp"
#include "ifgi/rng.hpp"

using namespace ifgi;

namespace {

const SceneGrid kGrid{96, 96, 0.05};
const RoiPair kRois{{8, 8, 24, 40}, {40, 8, 56, 40}, {8, 56, 72, 88}};

SignedImage filled(std::int64_t value) {
  SignedImage img(kGrid);
  std::fill(img.values.begin(), img.values.end(), value);
  return img;
}

void fill_rect(SignedImage& img, const PixelRect& r, std::int64_t value) {
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) img.values[static_cast<size_t>(y) * img.grid.width + x] = value;
}

} // namespace

TEST_CASE("delta_n is the out-minus-in ROI mean difference") {
  CHECK(delta_n(filled(7), kRois) == 0.0);

  SignedImage img = filled(0);
  fill_rect(img, kRois.outside, 10);
  fill_rect(img, kRois.inside, 4);
  CHECK(delta_n(img, kRois) == 6.0);

  RoiPair bad = kRois;
  bad.inside = PixelRect{5, 5, 5, 9};
  CHECK_THROWS_AS(delta_n(img, bad), ConfigError);
}

TEST_CASE("visibility normalizes the contrast") {
  SignedImage img = filled(0);
  fill_rect(img, kRois.outside, 12);
  CHECK(visibility(img, kRois) == 1.0);

  fill_rect(img, kRois.inside, 12);
  CHECK(visibility(img, kRois) == 0.0);

  const SignedImage zeros = filled(0);
  CHECK_THROWS_AS(visibility(zeros, kRois), ConfigError);
}

TEST_CASE("scaling counts leaves V unchanged while delta_n and sigma scale") {
  CountImage base(kGrid);
  RngStream rng(31u);
  for (auto& c : base.counts) c = static_cast<std::uint32_t>(rng.poisson(40.0));

  const ComposeTerm one[] = {{&base, 1}};
  const ComposeTerm three[] = {{&base, 3}};
  const SignedImage a = compose(one);
  const SignedImage b = compose(three);

  CHECK(delta_n(b, kRois) == doctest::Approx(3.0 * delta_n(a, kRois)).epsilon(1e-12));
  CHECK(background_sigma(b, kRois.background) ==
        doctest::Approx(3.0 * background_sigma(a, kRois.background)).epsilon(1e-12));
  if (delta_n(a, kRois) != 0.0)
    CHECK(visibility(b, kRois) == doctest::Approx(visibility(a, kRois)).epsilon(1e-12));
}

TEST_CASE("background sigma estimates Poisson noise") {
  CHECK(background_sigma(filled(123), kRois.background) == 0.0);

  // Poisson pixels with mean 4096 have sigma 64.
  SignedImage img = filled(0);
  RngStream rng(64u);
  for (int y = kRois.background.y0; y < kRois.background.y1; ++y)
    for (int x = kRois.background.x0; x < kRois.background.x1; ++x)
      img.values[static_cast<size_t>(y) * kGrid.width + x] =
          static_cast<std::int64_t>(rng.poisson(4096.0));
  const double sigma = background_sigma(img, kRois.background);
  const double n = kRois.background.area();
  const double se = 64.0 / std::sqrt(2.0 * (n - 1.0));
  CHECK(std::abs(sigma - 64.0) < 3.0 * se);

  CHECK_THROWS_AS(background_sigma(img, PixelRect{0, 0, 1, 1}), ConfigError);
}

TEST_CASE("combining independent channels raises noise by sqrt(n)") {
  CHECK(noise_prediction(64.0, 3) == doctest::Approx(110.85).epsilon(1e-4));
  CHECK(std::abs(noise_prediction(64.0, 3) - 110.85) < 0.01);
  CHECK(noise_prediction(7.5, 1) == 7.5);
  CHECK(noise_prediction(0.0, 5) == 0.0);
  CHECK_THROWS_AS(noise_prediction(-1.0, 2), ConfigError);
  CHECK_THROWS_AS(noise_prediction(1.0, 0), ConfigError);
}

TEST_CASE("delta_n is additive under image composition") {
  CountImage a(kGrid), b(kGrid);
  RngStream rng(99u);
  for (auto& c : a.counts) c = static_cast<std::uint32_t>(rng.poisson(30.0));
  for (auto& c : b.counts) c = static_cast<std::uint32_t>(rng.poisson(12.0));

  const ComposeTerm ta[] = {{&a, 1}};
  const ComposeTerm tb[] = {{&b, 1}};
  const ComposeTerm tdiff[] = {{&a, 1}, {&b, -1}};
  const double lhs = delta_n(compose(tdiff), kRois);
  const double rhs = delta_n(compose(ta), kRois) - delta_n(compose(tb), kRois);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("sigma estimator converges to sqrt(mean) as the ROI grows") {
  const double lambda = 100.0;
  RngStream rng(123u);
  SignedImage img(SceneGrid{128, 128, 0.05});
  for (auto& v : img.values) v = static_cast<std::int64_t>(rng.poisson(lambda));

  for (const int side : {8, 16, 32, 64, 128}) {
    const PixelRect roi{0, 0, side, side};
    const double sigma = background_sigma(img, roi);
    const double n = static_cast<double>(side) * side;
    const double se = std::sqrt(lambda) / std::sqrt(2.0 * (n - 1.0));
    // Poisson kurtosis inflates the variance of the estimator slightly.
    CHECK(std::abs(sigma - std::sqrt(lambda)) < 4.0 * se + 0.5);
  }
}

TEST_CASE("compute_metrics bundles the record invariants") {
  SignedImage img = filled(0);
  fill_rect(img, kRois.outside, 9);
  fill_rect(img, kRois.inside, 3);
  const MetricsRecord rec = compute_metrics(img, kRois);
  CHECK(rec.delta_n == rec.n_out_mean - rec.n_in_mean);
  CHECK(rec.n_out_mean == 9.0);
  CHECK(rec.n_in_mean == 3.0);
  REQUIRE(rec.visibility.has_value());
  CHECK(*rec.visibility == doctest::Approx(0.5));
  CHECK(rec.sigma_bg == 0.0);

  const MetricsRecord empty = compute_metrics(filled(0), kRois);
  CHECK_FALSE(empty.visibility.has_value());
  CHECK(empty.delta_n == 0.0);
}
