#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spmk/audio_io.hpp"
#include "spmk/error.hpp"

namespace spmk {

enum class Window { Rectangular, Hamming };

// Short-time analysis geometry. 256/128 is 32 ms / 16 ms at 8 kHz.
struct FrameSpec {
  size_t frame_len = 256; // power of two
  size_t hop = 128;       // 0 < hop <= frame_len
  Window window = Window::Hamming;
};

struct FrameSequence {
  std::vector<std::vector<double>> frames;
  std::vector<size_t> starts;
  FrameSpec spec;

  size_t count() const { return frames.size(); }
};

// Non-negative frequencies of a real input: frame_len/2 + 1 bins.
struct Spectrum {
  std::vector<std::complex<double>> bins;
  size_t frame_len = 0;
  int sample_rate = 0;
};

bool is_power_of_two(size_t n);

// Cuts the clip into frames of frame_len every hop samples. Trailing samples
// that do not fill a whole frame are dropped; the window is not applied here.
FrameSequence frame_signal(const AudioClip& clip, const FrameSpec& spec);

// Rectangular returns the frame unchanged; Hamming multiplies by
// 0.54 - 0.46*cos(2*pi*n/(L-1)).
std::vector<double> apply_window(const std::vector<double>& frame, Window window);

// Forward transform of a real power-of-two frame, bins k = 0..L/2.
Spectrum dft(const std::vector<double>& frame, int sample_rate = 0);

// Inverse transform assuming conjugate-symmetric extension; returns
// frame_len real samples.
std::vector<double> idft(const Spectrum& spec);

// Real cepstrum: idft of log(max(|bins|^2, eps)) with
// eps = 10^(floor_db/10) * max(|bins|^2). The floor keeps the log finite on
// near-silent bins; an identically zero frame yields a flat all-zero cepstrum.
// Output has frame_len entries indexed by quefrency in samples.
std::vector<double> real_cepstrum(const std::vector<double>& frame, double floor_db = -120.0);

} // namespace spmk
