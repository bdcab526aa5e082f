#include "spmk/vad.hpp"

#include <algorithm>
#include <cmath>

namespace spmk {

const char* vad_label_name(VadLabel label) {
  switch (label) {
    case VadLabel::Voiced:   return "voiced";
    case VadLabel::Unvoiced: return "unvoiced";
    case VadLabel::Silence:  return "silence";
  }
  return "?";
}

size_t VadResult::count_of(VadLabel label) const {
  return size_t(std::count(labels.begin(), labels.end(), label));
}

double short_time_energy(const std::vector<double>& frame, Window window) {
  if (frame.empty())
    return 0.0;
  std::vector<double> w = apply_window(frame, window);
  double sum = 0.0;
  for (double v : w)
    sum += v * v;
  return sum / double(frame.size());
}

double zero_crossing_rate(const std::vector<double>& frame) {
  const size_t len = frame.size();
  if (len < 2)
    throw Error(Err::FrameTooShort, "zero crossing rate needs at least 2 samples");
  auto sgn = [](double v) { return v >= 0.0 ? 1 : -1; };
  int flips = 0;
  int prev = sgn(frame[0]);
  for (size_t m = 1; m < len; m++) {
    int cur = sgn(frame[m]);
    flips += std::abs(cur - prev); // 0 or 2 per step
    prev = cur;
  }
  return double(flips) / (2.0 * double(len));
}

VadResult classify(const AudioClip& clip, const FrameSpec& spec,
                   const VadOverrides& overrides) {
  FrameSequence seq = frame_signal(clip, spec);
  if (seq.count() == 0)
    throw Error(Err::NoFrames, "clip of " + std::to_string(clip.samples.size()) +
                                   " samples yields no frame of " + std::to_string(spec.frame_len));

  VadResult result;
  result.energies.reserve(seq.count());
  result.zcrs.reserve(seq.count());
  double max_energy = 0.0;
  for (const auto& frame : seq.frames) {
    double e = short_time_energy(frame, spec.window);
    result.energies.push_back(e);
    result.zcrs.push_back(zero_crossing_rate(frame));
    max_energy = std::max(max_energy, e);
  }

  result.silence_threshold =
      overrides.silence_threshold.value_or(std::max(1e-6, 3e-4 * max_energy));
  result.energy_threshold =
      overrides.energy_threshold.value_or(std::max(1e-5, 3e-3 * max_energy));
  result.zcr_threshold = overrides.zcr_threshold.value_or(0.25);

  result.labels.reserve(seq.count());
  for (size_t i = 0; i < seq.count(); i++) {
    const double e = result.energies[i];
    const double z = result.zcrs[i];
    VadLabel label;
    if (e < result.silence_threshold)
      label = VadLabel::Silence;
    else if (e >= result.energy_threshold && z <= result.zcr_threshold)
      label = VadLabel::Voiced;
    else
      label = VadLabel::Unvoiced;
    result.labels.push_back(label);
  }
  return result;
}

AudioClip longest_voiced_segment(const VadResult& result, const AudioClip& clip,
                                 const FrameSpec& spec) {
  FrameSequence seq = frame_signal(clip, spec);
  if (seq.count() != result.labels.size())
    throw Error(Err::InvalidArgument, "VAD result does not match clip framing");

  size_t best_first = 0, best_len = 0;
  size_t run_first = 0, run_len = 0;
  for (size_t i = 0; i < result.labels.size(); i++) {
    if (result.labels[i] == VadLabel::Voiced) {
      if (run_len == 0)
        run_first = i;
      run_len++;
      if (run_len > best_len) {
        best_len = run_len;
        best_first = run_first;
      }
    } else {
      run_len = 0;
    }
  }
  if (best_len == 0)
    throw Error(Err::NoVoicedSpeech, "no frame classified as voiced");

  const size_t begin = seq.starts[best_first];
  const size_t end = seq.starts[best_first + best_len - 1] + spec.frame_len;
  AudioClip segment;
  segment.sample_rate = clip.sample_rate;
  segment.source_bit_depth = clip.source_bit_depth;
  segment.samples.assign(clip.samples.begin() + long(begin), clip.samples.begin() + long(end));
  return segment;
}

} // namespace spmk
