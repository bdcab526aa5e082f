#include "spmk/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spmk {

namespace {

// Mean periodogram of Hamming-windowed frames.
std::vector<double> mean_power_spectrum(const std::vector<const std::vector<double>*>& frames) {
  std::vector<double> acc;
  for (const auto* frame : frames) {
    Spectrum spec = dft(apply_window(*frame, Window::Hamming));
    if (acc.empty())
      acc.assign(spec.bins.size(), 0.0);
    for (size_t k = 0; k < spec.bins.size(); k++)
      acc[k] += std::norm(spec.bins[k]);
  }
  for (double& v : acc)
    v /= double(frames.size());
  return acc;
}

} // namespace

AudioClip wiener_denoise(const AudioClip& clip, const std::optional<AudioClip>& noise_clip,
                         const FrameSpec& spec) {
  FrameSpec wspec;
  wspec.frame_len = spec.frame_len;
  wspec.hop = spec.frame_len / 2;
  wspec.window = Window::Hamming;

  FrameSequence seq = frame_signal(clip, wspec);
  if (seq.count() == 0)
    throw Error(Err::NoFrames, "clip shorter than one frame");

  std::vector<double> noise_power;
  if (noise_clip) {
    FrameSequence noise_seq = frame_signal(*noise_clip, wspec);
    if (noise_seq.count() == 0)
      throw Error(Err::NoFrames, "noise clip shorter than one frame");
    std::vector<const std::vector<double>*> refs;
    for (const auto& f : noise_seq.frames)
      refs.push_back(&f);
    noise_power = mean_power_spectrum(refs);
  } else {
    // Self estimate: the 10% lowest-energy frames, at least one.
    std::vector<size_t> order(seq.count());
    std::iota(order.begin(), order.end(), size_t(0));
    std::vector<double> energies(seq.count());
    for (size_t i = 0; i < seq.count(); i++) {
      double e = 0.0;
      for (double v : seq.frames[i])
        e += v * v;
      energies[i] = e;
    }
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return energies[a] < energies[b]; });
    const size_t take = std::max<size_t>(1, seq.count() / 10);
    std::vector<const std::vector<double>*> refs;
    for (size_t i = 0; i < take; i++)
      refs.push_back(&seq.frames[order[i]]);
    noise_power = mean_power_spectrum(refs);
  }

  const size_t len = spec.frame_len;
  const std::vector<double> window = apply_window(std::vector<double>(len, 1.0), Window::Hamming);

  std::vector<double> acc(clip.samples.size(), 0.0);
  std::vector<double> wsum(clip.samples.size(), 0.0);
  for (size_t i = 0; i < seq.count(); i++) {
    Spectrum spec_i = dft(apply_window(seq.frames[i], Window::Hamming));
    for (size_t k = 0; k < spec_i.bins.size(); k++) {
      const double p = std::norm(spec_i.bins[k]);
      double gain;
      if (noise_power[k] <= 0.0)
        gain = 1.0;
      else if (p <= 0.0)
        gain = 0.0;
      else
        gain = std::max(0.0, 1.0 - noise_power[k] / p);
      spec_i.bins[k] *= gain;
    }
    std::vector<double> frame = idft(spec_i);
    const size_t start = seq.starts[i];
    for (size_t n = 0; n < len; n++) {
      acc[start + n] += frame[n];
      wsum[start + n] += window[n];
    }
  }

  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.source_bit_depth = clip.source_bit_depth;
  out.samples.resize(clip.samples.size());
  for (size_t n = 0; n < clip.samples.size(); n++)
    out.samples[n] = wsum[n] > 1e-12 ? acc[n] / wsum[n] : clip.samples[n];
  return out;
}

NormalizedSpeech log_normalize(const AudioClip& clip) {
  double peak = 0.0;
  for (double s : clip.samples)
    peak = std::max(peak, std::fabs(s));
  if (peak == 0.0)
    throw Error(Err::SilentInput, "all-zero clip has no peak to normalize by");

  NormalizedSpeech ns;
  ns.peak_y = peak;
  ns.ratio_n = 1.0 / std::log1p(peak);
  ns.sample_rate = clip.sample_rate;
  ns.samples.resize(clip.samples.size());
  for (size_t i = 0; i < clip.samples.size(); i++)
    ns.samples[i] = ns.ratio_n * std::log1p(std::fabs(clip.samples[i]));
  return ns;
}

AudioClip log_denormalize(const NormalizedSpeech& ns) {
  AudioClip clip;
  clip.sample_rate = ns.sample_rate;
  clip.samples.resize(ns.samples.size());
  for (size_t i = 0; i < ns.samples.size(); i++) {
    double v = std::expm1(ns.samples[i] / ns.ratio_n);
    clip.samples[i] = std::clamp(v, 0.0, ns.peak_y);
  }
  return clip;
}

std::pair<std::vector<std::vector<double>>, CmvnStats>
cmvn(const std::vector<std::vector<double>>& features) {
  const size_t n_frames = features.size();
  if (n_frames < 2)
    throw Error(Err::DegenerateCoefficient, "need at least 2 frames");
  const size_t n_coeffs = features[0].size();
  for (const auto& row : features)
    if (row.size() != n_coeffs)
      throw Error(Err::InvalidArgument, "ragged feature matrix");

  CmvnStats stats;
  stats.mean.assign(n_coeffs, 0.0);
  stats.std.assign(n_coeffs, 0.0);
  for (const auto& row : features)
    for (size_t c = 0; c < n_coeffs; c++)
      stats.mean[c] += row[c];
  for (double& m : stats.mean)
    m /= double(n_frames);
  for (const auto& row : features)
    for (size_t c = 0; c < n_coeffs; c++) {
      const double d = row[c] - stats.mean[c];
      stats.std[c] += d * d;
    }
  for (size_t c = 0; c < n_coeffs; c++) {
    stats.std[c] = std::sqrt(stats.std[c] / double(n_frames));
    // A relative floor: exact-constant columns land here after rounding.
    if (stats.std[c] <= 1e-12 * std::max(1.0, std::fabs(stats.mean[c])))
      throw Error(Err::DegenerateCoefficient,
                  "coefficient " + std::to_string(c) + " has zero variance");
  }

  std::vector<std::vector<double>> out(n_frames, std::vector<double>(n_coeffs));
  for (size_t r = 0; r < n_frames; r++)
    for (size_t c = 0; c < n_coeffs; c++)
      out[r][c] = (features[r][c] - stats.mean[c]) / stats.std[c];
  return {std::move(out), std::move(stats)};
}

} // namespace spmk
