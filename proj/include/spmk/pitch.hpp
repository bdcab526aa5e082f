#pragma once

#include <optional>
#include <vector>

#include "spmk/vad.hpp"

namespace spmk {

// Estimates below this peak/median ratio carry little evidence of periodicity.
constexpr double kMinPitchConfidence = 2.0;

// Pitch frames are longer than VAD frames so the low end of the search band
// still sees several periods.
constexpr size_t kPitchFrameLen = 1024;

struct PitchEstimate {
  double f0 = 0.0;        // sample_rate / quefrency
  size_t quefrency = 0;   // cepstral peak position, samples
  double peak_value = 0.0;
  double confidence = 0.0; // peak over median |cepstrum| in the band

  bool reliable() const { return confidence >= kMinPitchConfidence; }
};

// Cepstral peak picking over quefrencies [ceil(fs/f_max), floor(fs/f_min)].
// Ties break toward the smaller quefrency (higher f0). The band must fit in
// the unique half of the cepstrum (quefrency <= frame_len/2). The frame is
// analyzed as given; taper it first if leakage is a concern (pitch_track
// does).
PitchEstimate estimate_pitch(const std::vector<double>& frame, int sample_rate,
                             double f_min, double f_max);

// One entry per VAD frame; absent for frames not labeled Voiced. Pitch frames
// of pitch_frame_len samples are taken from the clip at each voiced frame's
// start offset (shifted left at the clip tail so they stay in range) and
// Hamming-tapered; clips shorter than pitch_frame_len yield no estimates.
std::vector<std::optional<PitchEstimate>> pitch_track(const AudioClip& clip,
                                                      const VadResult& vad,
                                                      const FrameSpec& spec,
                                                      double f_min, double f_max,
                                                      size_t pitch_frame_len = kPitchFrameLen);

} // namespace spmk
