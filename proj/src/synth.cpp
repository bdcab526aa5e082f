#include "spmk/synth.hpp"

#include <algorithm>
#include <cmath>

namespace spmk {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
const FrameSpec kTruthSpec{}; // truth arrays follow the default framing

// Zero-phase harmonic train with 1/k amplitudes, peak-normalized.
std::vector<double> harmonic_train(double f0, int n_harmonics, int sample_rate,
                                   size_t n_samples, double peak) {
  std::vector<double> x(n_samples, 0.0);
  for (int k = 1; k <= n_harmonics; k++) {
    const double w = kTwoPi * f0 * double(k) / double(sample_rate);
    const double a = 1.0 / double(k);
    for (size_t n = 0; n < n_samples; n++)
      x[n] += a * std::cos(w * double(n));
  }
  double max_abs = 0.0;
  for (double v : x)
    max_abs = std::max(max_abs, std::fabs(v));
  if (max_abs > 0.0)
    for (double& v : x)
      v *= peak / max_abs;
  return x;
}

size_t truth_frame_count(size_t n_samples) {
  return n_samples >= kTruthSpec.frame_len
             ? (n_samples - kTruthSpec.frame_len) / kTruthSpec.hop + 1
             : 0;
}

} // namespace

CorpusItem make_voiced(double f0, double duration, int sample_rate, int n_harmonics,
                       uint64_t seed) {
  if (f0 <= 0.0 || duration <= 0.0 || sample_rate <= 0 || n_harmonics < 1)
    throw Error(Err::InvalidArgument, "bad voiced-clip parameters");
  if (f0 * double(n_harmonics) >= double(sample_rate) / 2.0)
    throw Error(Err::AliasedHarmonics,
                std::to_string(n_harmonics) + " harmonics of " + std::to_string(f0) +
                    " Hz exceed Nyquist at " + std::to_string(sample_rate) + " Hz");

  const size_t n_samples = size_t(std::llround(duration * sample_rate));
  CorpusItem item;
  item.seed = seed; // deterministic signal; kept for corpus bookkeeping
  item.clip.sample_rate = sample_rate;
  item.clip.samples = harmonic_train(f0, n_harmonics, sample_rate, n_samples, 0.8);
  const size_t frames = truth_frame_count(n_samples);
  item.frame_truth.assign(frames, VadLabel::Voiced);
  item.f0_truth.assign(frames, f0);
  return item;
}

CorpusItem make_segmented(const std::vector<std::pair<VadLabel, double>>& pattern,
                          int sample_rate, uint64_t seed) {
  if (sample_rate <= 0)
    throw Error(Err::InvalidArgument, "sample rate must be positive");
  for (const auto& [label, duration] : pattern)
    if (duration <= 0.0)
      throw Error(Err::InvalidArgument, "segment durations must be positive");

  SplitMix64 rng(seed);
  CorpusItem item;
  item.seed = seed;
  item.clip.sample_rate = sample_rate;

  std::vector<VadLabel> sample_label;
  std::vector<double> sample_f0;
  for (const auto& [label, duration] : pattern) {
    const size_t n = size_t(std::llround(duration * sample_rate));
    std::vector<double> seg;
    double f0 = 0.0;
    switch (label) {
      case VadLabel::Silence:
        seg.assign(n, 0.0);
        break;
      case VadLabel::Unvoiced:
        seg.resize(n);
        for (double& v : seg)
          v = 0.1 * rng.next_signed();
        break;
      case VadLabel::Voiced: {
        f0 = 120.0 + 140.0 * rng.next_unit();
        int harmonics = 3 + int(rng.next() % 3);
        while (harmonics > 1 && f0 * harmonics >= double(sample_rate) / 2.0)
          harmonics--;
        seg = harmonic_train(f0, harmonics, sample_rate, n, 0.8);
        break;
      }
    }
    item.clip.samples.insert(item.clip.samples.end(), seg.begin(), seg.end());
    sample_label.insert(sample_label.end(), n, label);
    sample_f0.insert(sample_f0.end(), n, f0);
  }

  const size_t frames = truth_frame_count(item.clip.samples.size());
  item.frame_truth.reserve(frames);
  item.f0_truth.reserve(frames);
  for (size_t i = 0; i < frames; i++) {
    const size_t start = i * kTruthSpec.hop;
    size_t counts[3] = {0, 0, 0};
    for (size_t n = start; n < start + kTruthSpec.frame_len; n++)
      counts[size_t(sample_label[n])]++;
    // Majority; ties prefer Voiced, then Unvoiced.
    VadLabel winner = VadLabel::Voiced;
    if (counts[size_t(VadLabel::Unvoiced)] > counts[size_t(winner)])
      winner = VadLabel::Unvoiced;
    if (counts[size_t(VadLabel::Silence)] > counts[size_t(winner)])
      winner = VadLabel::Silence;
    item.frame_truth.push_back(winner);
    if (winner == VadLabel::Voiced) {
      double f0 = 0.0;
      for (size_t n = start; n < start + kTruthSpec.frame_len; n++)
        if (sample_label[n] == VadLabel::Voiced) {
          f0 = sample_f0[n];
          break;
        }
      item.f0_truth.push_back(f0);
    } else {
      item.f0_truth.push_back(std::nullopt);
    }
  }
  return item;
}

AudioClip make_cover(double duration, int sample_rate, uint64_t seed) {
  if (duration <= 0.0 || sample_rate <= 0)
    throw Error(Err::InvalidArgument, "bad cover parameters");

  // Tones as fractions of the rate: all below half of Nyquist.
  static constexpr double kToneFrac[] = {0.010, 0.01225, 0.015, 0.020, 0.0245, 0.030};
  static constexpr double kToneAmp[] = {1.0, 0.6, 0.8, 0.5, 0.4, 0.3};

  const size_t n_samples = size_t(std::llround(duration * sample_rate));
  std::vector<double> x(n_samples, 0.0);
  for (size_t t = 0; t < std::size(kToneFrac); t++) {
    const double w = kTwoPi * kToneFrac[t];
    for (size_t n = 0; n < n_samples; n++)
      x[n] += kToneAmp[t] * std::sin(w * double(n));
  }
  double peak = 0.0;
  for (double v : x)
    peak = std::max(peak, std::fabs(v));

  SplitMix64 rng(seed);
  const double noise_amp = 0.01 * peak; // 40 dB below the tone peak
  for (double& v : x)
    v += noise_amp * rng.next_signed();
  peak = 0.0;
  for (double v : x)
    peak = std::max(peak, std::fabs(v));
  for (double& v : x)
    v *= 0.6 / peak;

  AudioClip cover;
  cover.sample_rate = sample_rate;
  cover.samples = std::move(x);
  return cover;
}

} // namespace spmk
