#pragma once

#include <optional>
#include <vector>

#include "spmk/dsp.hpp"

namespace spmk {

enum class VadLabel { Voiced, Unvoiced, Silence };

const char* vad_label_name(VadLabel label);

// Per-threshold overrides; unset fields keep the defaults computed from the
// clip itself.
struct VadOverrides {
  std::optional<double> silence_threshold;
  std::optional<double> energy_threshold;
  std::optional<double> zcr_threshold;
};

struct VadResult {
  std::vector<VadLabel> labels;
  std::vector<double> energies;
  std::vector<double> zcrs;
  double silence_threshold = 0.0;
  double energy_threshold = 0.0;
  double zcr_threshold = 0.0;

  size_t count_of(VadLabel label) const;
};

// Mean of squared windowed samples, (1/L) * sum((x[m] * w[m])^2).
double short_time_energy(const std::vector<double>& frame, Window window);

// (1/(2L)) * sum |sgn(x[m]) - sgn(x[m-1])| over m = 1..L-1, with sgn(v) = 1
// for v >= 0 and -1 otherwise. Result in [0, 1).
double zero_crossing_rate(const std::vector<double>& frame);

// Frame-level Voiced/Unvoiced/Silence decision:
//   Silence  if E < silence_threshold
//   Voiced   if E >= energy_threshold and Z <= zcr_threshold
//   Unvoiced otherwise.
// Default thresholds anchor to the loudest frame (silence = 3e-4 * max E,
// energy gate = 3e-3 * max E, both floored) so a homogeneous clip classifies
// consistently; the ZCR gate is absolute (0.25) since ZCR is already
// length-normalized and voiced speech sits well below white noise (~0.5).
VadResult classify(const AudioClip& clip, const FrameSpec& spec,
                   const VadOverrides& overrides = {});

// Longest contiguous run of Voiced frames, as samples from the first frame's
// start through the end of the last frame in the run. Ties keep the earliest
// run.
AudioClip longest_voiced_segment(const VadResult& result, const AudioClip& clip,
                                 const FrameSpec& spec);

} // namespace spmk
