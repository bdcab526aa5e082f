#pragma once

#include <string>
#include <vector>

#include "spmk/error.hpp"

namespace spmk {

// Mono sampled signal. Samples from a successful load are within [-1, 1];
// intermediate processing stages may exceed that range until written out.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;
  int source_bit_depth = 16;

  size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return sample_rate > 0 ? double(samples.size()) / sample_rate : 0.0;
  }
};

// Reads a RIFF/WAVE file: PCM format tag 1, 16-bit, mono or stereo.
// Stereo is downmixed by per-sample mean. Unknown chunks are skipped.
// Integer samples map to [-1, 1] by division by 32768.
AudioClip load_wav(const std::string& path);

// Writes PCM16 mono little-endian. Float s maps to
// clamp(round(s * 32768), -32768, 32767), the inverse of the load scaling,
// so a save/load roundtrip moves any sample by at most 1/32768.
void save_wav(const AudioClip& clip, const std::string& path);

} // namespace spmk
