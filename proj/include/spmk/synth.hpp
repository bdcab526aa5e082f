#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "spmk/vad.hpp"

namespace spmk {

// SplitMix64: state advances by the golden-ratio increment, output is the
// mixed state. Fixed algorithm so clips reproduce bit-identically everywhere.
class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [-1, 1).
  double next_signed() { return double(next() >> 11) * (2.0 / 9007199254740992.0) - 1.0; }

  // Uniform in [0, 1).
  double next_unit() { return double(next() >> 11) * (1.0 / 9007199254740992.0); }

private:
  uint64_t state_;
};

// A generated clip with frame-level ground truth under the default FrameSpec.
struct CorpusItem {
  AudioClip clip;
  std::vector<VadLabel> frame_truth;
  std::vector<std::optional<double>> f0_truth;
  uint64_t seed = 0;
};

// Harmonic train: n_harmonics cosines at k*f0 with 1/k amplitudes, zero
// phases, peak-normalized to 0.8. All harmonics must stay below Nyquist.
CorpusItem make_voiced(double f0, double duration, int sample_rate, int n_harmonics,
                       uint64_t seed);

// Concatenation of labeled segments: silence = zeros, unvoiced = white noise
// at amplitude 0.1, voiced = harmonic train at amplitude 0.8 with a seeded
// f0 in 120..260 Hz. Frames straddling a boundary take the majority label
// (ties prefer Voiced, then Unvoiced).
CorpusItem make_segmented(const std::vector<std::pair<VadLabel, double>>& pattern,
                          int sample_rate, uint64_t seed);

// Chord-like sum of low/mid tones (all below half of Nyquist) plus noise 40 dB
// down, peak-normalized to 0.6. Energy sits far below the embedding subband.
AudioClip make_cover(double duration, int sample_rate, uint64_t seed);

} // namespace spmk
