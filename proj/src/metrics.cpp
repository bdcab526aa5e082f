#include "spmk/metrics.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "spmk/error.hpp"

namespace spmk {

std::string SnrResult::to_string() const {
  if (infinite)
    return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", db);
  return buf;
}

SnrResult snr(const AudioClip& reference, const AudioClip& test) {
  if (reference.samples.size() != test.samples.size() ||
      reference.sample_rate != test.sample_rate)
    throw Error(Err::LengthMismatch, "signals differ in length or sample rate");

  double ref_energy = 0.0, residual = 0.0;
  for (size_t i = 0; i < reference.samples.size(); i++) {
    ref_energy += reference.samples[i] * reference.samples[i];
    const double d = reference.samples[i] - test.samples[i];
    residual += d * d;
  }
  if (ref_energy == 0.0)
    throw Error(Err::InvalidReference, "all-zero reference signal");

  SnrResult result;
  if (residual == 0.0) {
    result.infinite = true;
    return result;
  }
  result.db = 10.0 * std::log10(ref_energy / residual);
  return result;
}

double ber(const std::vector<uint8_t>& sent, const std::vector<uint8_t>& received) {
  if (sent.size() != received.size())
    throw Error(Err::LengthMismatch, "byte sequences differ in length");
  if (sent.empty())
    return 0.0;
  size_t bits = 0;
  for (size_t i = 0; i < sent.size(); i++)
    bits += size_t(std::popcount(uint8_t(sent[i] ^ received[i])));
  return double(bits) / (8.0 * double(sent.size()));
}

double max_abs_diff(const AudioClip& a, const AudioClip& b) {
  if (a.samples.size() != b.samples.size())
    throw Error(Err::LengthMismatch, "signals differ in length");
  double worst = 0.0;
  for (size_t i = 0; i < a.samples.size(); i++)
    worst = std::max(worst, std::fabs(a.samples[i] - b.samples[i]));
  return worst;
}

} // namespace spmk
