#include "spmk/dsp.hpp"

#include <algorithm>
#include <cmath>

namespace spmk {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Iterative radix-2 Cooley-Tukey, in place. inverse=true omits the 1/N scale
// (callers scale once at the end).
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; i++) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1)
      j ^= bit;
    j ^= bit;
    if (i < j)
      std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / double(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; k++) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

} // namespace

bool is_power_of_two(size_t n) {
  return n > 0 && (n & (n - 1)) == 0;
}

FrameSequence frame_signal(const AudioClip& clip, const FrameSpec& spec) {
  if (!is_power_of_two(spec.frame_len))
    throw Error(Err::InvalidArgument, "frame_len must be a power of two");
  if (spec.hop == 0 || spec.hop > spec.frame_len)
    throw Error(Err::InvalidArgument, "hop must satisfy 0 < hop <= frame_len");

  FrameSequence seq;
  seq.spec = spec;
  const size_t len = clip.samples.size();
  if (len < spec.frame_len)
    return seq;
  const size_t n_frames = (len - spec.frame_len) / spec.hop + 1;
  seq.frames.reserve(n_frames);
  seq.starts.reserve(n_frames);
  for (size_t i = 0; i < n_frames; i++) {
    const size_t start = i * spec.hop;
    seq.starts.push_back(start);
    seq.frames.emplace_back(clip.samples.begin() + long(start),
                            clip.samples.begin() + long(start + spec.frame_len));
  }
  return seq;
}

std::vector<double> apply_window(const std::vector<double>& frame, Window window) {
  if (window == Window::Rectangular)
    return frame;
  const size_t len = frame.size();
  std::vector<double> out(len);
  if (len == 1) {
    out[0] = frame[0] * 0.08;
    return out;
  }
  for (size_t n = 0; n < len; n++)
    out[n] = frame[n] * (0.54 - 0.46 * std::cos(2.0 * kPi * double(n) / double(len - 1)));
  return out;
}

Spectrum dft(const std::vector<double>& frame, int sample_rate) {
  const size_t len = frame.size();
  if (!is_power_of_two(len))
    throw Error(Err::NonPowerOfTwoLength, "frame length " + std::to_string(len));

  std::vector<std::complex<double>> a(len);
  for (size_t i = 0; i < len; i++)
    a[i] = std::complex<double>(frame[i], 0.0);
  fft_inplace(a, false);

  Spectrum spec;
  spec.frame_len = len;
  spec.sample_rate = sample_rate;
  spec.bins.assign(a.begin(), a.begin() + long(len / 2 + 1));
  return spec;
}

std::vector<double> idft(const Spectrum& spec) {
  const size_t len = spec.frame_len;
  if (!is_power_of_two(len) || spec.bins.size() != len / 2 + 1)
    throw Error(Err::InvalidArgument, "spectrum with " + std::to_string(spec.bins.size()) +
                                          " bins does not match frame_len " + std::to_string(len));

  std::vector<std::complex<double>> a(len);
  for (size_t k = 0; k <= len / 2; k++)
    a[k] = spec.bins[k];
  for (size_t k = len / 2 + 1; k < len; k++)
    a[k] = std::conj(spec.bins[len - k]);
  fft_inplace(a, true);

  std::vector<double> out(len);
  for (size_t i = 0; i < len; i++)
    out[i] = a[i].real() / double(len);
  return out;
}

std::vector<double> real_cepstrum(const std::vector<double>& frame, double floor_db) {
  Spectrum spec = dft(frame);
  const size_t n_bins = spec.bins.size();

  double max_power = 0.0;
  std::vector<double> power(n_bins);
  for (size_t k = 0; k < n_bins; k++) {
    power[k] = std::norm(spec.bins[k]);
    max_power = std::max(max_power, power[k]);
  }
  if (max_power == 0.0)
    return std::vector<double>(frame.size(), 0.0); // flat cepstrum for a silent frame

  const double eps = std::pow(10.0, floor_db / 10.0) * max_power;
  Spectrum log_spec;
  log_spec.frame_len = spec.frame_len;
  log_spec.sample_rate = spec.sample_rate;
  log_spec.bins.resize(n_bins);
  for (size_t k = 0; k < n_bins; k++)
    log_spec.bins[k] = std::complex<double>(std::log(std::max(power[k], eps)), 0.0);
  return idft(log_spec);
}

} // namespace spmk
