#include "spmk/pitch.hpp"

#include <algorithm>
#include <cmath>

namespace spmk {

PitchEstimate estimate_pitch(const std::vector<double>& frame, int sample_rate,
                             double f_min, double f_max) {
  if (sample_rate <= 0 || f_min <= 0.0 || f_min >= f_max || f_max >= sample_rate / 2.0)
    throw Error(Err::InvalidArgument, "need 0 < f_min < f_max < sample_rate/2");

  const size_t q_lo = size_t(std::ceil(double(sample_rate) / f_max));
  const size_t q_hi = size_t(std::floor(double(sample_rate) / f_min));
  if (q_lo > q_hi)
    throw Error(Err::BandEmpty, "no integer quefrency between " + std::to_string(f_min) +
                                    " and " + std::to_string(f_max) + " Hz");
  if (q_hi > frame.size() / 2)
    throw Error(Err::FrameTooShort, "quefrency band up to " + std::to_string(q_hi) +
                                        " exceeds half of frame length " +
                                        std::to_string(frame.size()));

  const std::vector<double> ceps = real_cepstrum(frame);

  size_t best_q = q_lo;
  double best_v = ceps[q_lo];
  for (size_t q = q_lo + 1; q <= q_hi; q++) {
    if (ceps[q] > best_v) { // strict: ties keep the smaller quefrency
      best_v = ceps[q];
      best_q = q;
    }
  }

  std::vector<double> band_abs;
  band_abs.reserve(q_hi - q_lo + 1);
  for (size_t q = q_lo; q <= q_hi; q++)
    band_abs.push_back(std::fabs(ceps[q]));
  const size_t mid = band_abs.size() / 2;
  std::nth_element(band_abs.begin(), band_abs.begin() + long(mid), band_abs.end());
  const double median_abs = band_abs[mid];

  PitchEstimate est;
  est.quefrency = best_q;
  est.f0 = double(sample_rate) / double(best_q);
  est.peak_value = best_v;
  est.confidence = median_abs > 0.0 ? std::max(0.0, best_v / median_abs) : 0.0;
  return est;
}

std::vector<std::optional<PitchEstimate>> pitch_track(const AudioClip& clip,
                                                      const VadResult& vad,
                                                      const FrameSpec& spec,
                                                      double f_min, double f_max,
                                                      size_t pitch_frame_len) {
  FrameSequence seq = frame_signal(clip, spec);
  if (seq.count() != vad.labels.size())
    throw Error(Err::InvalidArgument, "VAD result does not match clip framing");

  std::vector<std::optional<PitchEstimate>> track(seq.count());
  if (clip.samples.size() < pitch_frame_len)
    return track;

  std::vector<double> frame(pitch_frame_len);
  for (size_t i = 0; i < seq.count(); i++) {
    if (vad.labels[i] != VadLabel::Voiced)
      continue;
    const size_t offset = std::min(seq.starts[i], clip.samples.size() - pitch_frame_len);
    std::copy(clip.samples.begin() + long(offset),
              clip.samples.begin() + long(offset + pitch_frame_len), frame.begin());
    // Tapering the pitch frame keeps spectral leakage from biasing the
    // cepstral peak off the true period.
    track[i] = estimate_pitch(apply_window(frame, Window::Hamming), clip.sample_rate,
                              f_min, f_max);
  }
  return track;
}

} // namespace spmk
