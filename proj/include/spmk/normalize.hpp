#pragma once

#include <optional>
#include <vector>

#include "spmk/dsp.hpp"

namespace spmk {

// Log-compressed non-negative samples plus the two values needed to invert:
// ratio_n = 1/log(1+peak_y), peak_y = max|x| of the source clip.
struct NormalizedSpeech {
  std::vector<double> samples; // in [0, 1], max = 1 for nonzero input
  double ratio_n = 0.0;
  double peak_y = 0.0;
  int sample_rate = 0;
};

struct CmvnStats {
  std::vector<double> mean;
  std::vector<double> std;
};

// Per-frame spectral Wiener gain max(0, 1 - P_noise/P), phases preserved,
// overlap-add resynthesis with a Hamming analysis window at hop frame_len/2.
// The noise spectrum comes from noise_clip when given, otherwise from the 10%
// lowest-energy frames of the clip itself. Samples not covered by any full
// frame (the tail shorter than one hop) pass through unchanged.
AudioClip wiener_denoise(const AudioClip& clip, const std::optional<AudioClip>& noise_clip,
                         const FrameSpec& spec);

// y_i = N * log(1 + |x_i|) with N = 1/log(1 + max|x|). Peak maps to exactly 1.
NormalizedSpeech log_normalize(const AudioClip& clip);

// |x_i| = exp(y_i / N) - 1, clamped to [0, peak_y]. Sign is not recoverable;
// the output is the magnitude signal.
AudioClip log_denormalize(const NormalizedSpeech& ns);

// Per-coefficient standardization to mean 0, variance 1 (population 1/N
// convention). Matrix is frames x coefficients.
std::pair<std::vector<std::vector<double>>, CmvnStats>
cmvn(const std::vector<std::vector<double>>& features);

} // namespace spmk
