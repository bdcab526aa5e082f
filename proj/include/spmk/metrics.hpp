#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spmk/audio_io.hpp"

namespace spmk {

// SNR in dB, with an explicit flag instead of a float infinity so reports
// stay portable as text.
struct SnrResult {
  bool infinite = false;
  double db = 0.0;

  std::string to_string() const;
};

struct QualityReport {
  SnrResult snr;
  double ber = 0.0;
  double max_abs_diff = 0.0;
};

// 10*log10(sum ref^2 / sum (ref-test)^2). Zero residual yields the infinite
// marker; an all-zero reference is an InvalidReference error.
SnrResult snr(const AudioClip& reference, const AudioClip& test);

// Differing-bit count over 8 * length.
double ber(const std::vector<uint8_t>& sent, const std::vector<uint8_t>& received);

double max_abs_diff(const AudioClip& a, const AudioClip& b);

} // namespace spmk
