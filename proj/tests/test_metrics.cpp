#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "spmk/metrics.hpp"
#include "oracles.hpp"

using spmk::AudioClip;

namespace {

AudioClip clip_of(std::vector<double> samples, int rate = 8000) {
  AudioClip clip;
  clip.samples = std::move(samples);
  clip.sample_rate = rate;
  return clip;
}

} // namespace

TEST_CASE("snr closed forms") {
  auto ref = clip_of({0.5, -0.25, 0.125, 0.75});

  auto same = spmk::snr(ref, ref);
  CHECK(same.infinite);
  CHECK(same.to_string() == "inf");

  auto half = ref;
  for (double& v : half.samples)
    v *= 0.5;
  auto result = spmk::snr(ref, half);
  CHECK(!result.infinite);
  CHECK(result.db == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-9));
}

TEST_CASE("snr degenerate inputs") {
  auto zero = clip_of({0.0, 0.0, 0.0});
  auto other = clip_of({0.1, 0.2, 0.3});
  try {
    spmk::snr(zero, other);
    FAIL("expected InvalidReference");
  } catch (const spmk::Error& e) {
    CHECK(e.code() == spmk::Err::InvalidReference);
  }

  auto longer = clip_of({0.1, 0.2, 0.3, 0.4});
  try {
    spmk::snr(other, longer);
    FAIL("expected LengthMismatch");
  } catch (const spmk::Error& e) {
    CHECK(e.code() == spmk::Err::LengthMismatch);
  }
}

TEST_CASE("snr strictly decreases as independent noise grows") {
  oracle::TestRng rng(50);
  auto ref = clip_of(oracle::sine(300.0, 0.5, 8000, 4000));
  std::vector<double> noise(ref.samples.size());
  for (double& v : noise)
    v = rng.signed_unit();

  double prev = 1e300;
  for (double amp : {0.001, 0.01, 0.1, 0.5}) {
    auto noisy = ref;
    for (size_t i = 0; i < noise.size(); i++)
      noisy.samples[i] += amp * noise[i];
    const double db = spmk::snr(ref, noisy).db;
    CHECK(db < prev);
    prev = db;
  }
}

TEST_CASE("bit error ratio") {
  CHECK(spmk::ber({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(spmk::ber({0x00}, {0xFF}) == 1.0);
  CHECK(spmk::ber({0x0F}, {0x00}) == 0.5);
  CHECK(spmk::ber({0x0F, 0xAA}, {0x00, 0xAA}) == 0.25);

  // symmetry
  oracle::TestRng rng(51);
  std::vector<uint8_t> a(64), b(64);
  for (size_t i = 0; i < 64; i++) {
    a[i] = uint8_t(rng.next() & 0xff);
    b[i] = uint8_t(rng.next() & 0xff);
  }
  CHECK(spmk::ber(a, b) == spmk::ber(b, a));

  CHECK_THROWS_AS(spmk::ber({1, 2}, {1}), spmk::Error);
}

TEST_CASE("max abs diff") {
  auto a = clip_of({0.1, -0.2, 0.3});
  auto b = clip_of({0.1, -0.25, 0.35});
  CHECK(spmk::max_abs_diff(a, b) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(spmk::max_abs_diff(a, a) == 0.0);
}
