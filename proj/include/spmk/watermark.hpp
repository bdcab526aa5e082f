#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spmk/audio_io.hpp"
#include "spmk/normalize.hpp"

namespace spmk {

// CRC-32 (reflected polynomial 0xEDB88320, init and final xor 0xFFFFFFFF).
uint32_t crc32(const uint8_t* data, size_t length);
uint32_t crc32(const std::vector<uint8_t>& data);

constexpr uint32_t kPayloadMagic = 0x53504D4B; // "SPMK"
constexpr uint8_t kPayloadVersion = 1;
constexpr size_t kPayloadHeaderBytes = 17; // magic + version + rate + count + crc

// Serialized secret: 8-bit quantized normalized samples plus framing.
struct WatermarkPayload {
  uint32_t sample_rate = 0;
  std::vector<uint8_t> sample_bytes; // round(sample * 255) each
  uint32_t crc = 0;                  // over sample_bytes

  uint32_t count() const { return uint32_t(sample_bytes.size()); }
  bool operator==(const WatermarkPayload&) const = default;
};

// Embedding geometry and strength. The subband defaults cover the center of
// the top quarter of the spectrum, stopping short of Nyquist where PCM
// rounding noise concentrates. delta is the quantization step on spectral
// magnitudes; the default is tuned so PCM16 save/load perturbs any in-band
// magnitude by well under delta/2 (see README for the measurement).
struct EmbedParams {
  size_t block_len = 1024;        // power of two
  double subband_lo_frac = 0.75;  // fraction of Nyquist
  double subband_hi_frac = 0.9375;
  double delta = 2.0e-3;
  int levels = 256; // one byte per bin
};

struct Capacity {
  size_t slots = 0; // total embeddable bytes
  size_t blocks = 0;
  size_t slots_per_block = 0;
};

// Quantizes samples to bytes and computes the checksum.
WatermarkPayload serialize(const NormalizedSpeech& ns);

// Inverse of serialize up to 8-bit quantization. The payload does not carry
// the normalization peak; pass it when known, otherwise the neutral
// peak = e-1 (ratio 1) convention is used.
NormalizedSpeech deserialize(const WatermarkPayload& payload,
                             std::optional<double> peak_y = std::nullopt);

// Wire form, one byte per slot: magic u32 BE, version u8, sample_rate u32 BE,
// count u32 BE, crc32 u32 BE, then count sample bytes.
std::vector<uint8_t> to_wire(const WatermarkPayload& payload);

// Payload over raw bytes, checksum filled in. Mostly for capacity probing and
// tests; serialize() is the normal constructor.
WatermarkPayload make_payload(uint32_t sample_rate, std::vector<uint8_t> bytes);

// blocks = floor(len/block_len); slots per block = integer bins k with
// lo*(block_len/2) <= k <= hi*(block_len/2), excluding the Nyquist bin.
Capacity capacity(const AudioClip& cover, const EmbedParams& params);

// Multi-level QIM on spectral magnitudes: each payload byte v moves its bin's
// magnitude to the nearest non-negative point of the coset
// { L*delta*q + (v + 0.5)*delta : q integer }, L = levels. Phase is kept.
// Slots run row-major (block order, then ascending bin); slots in a used
// block past the payload carry byte 0, blocks past the last used slot are
// left untouched. Output is clamped to [-1, 1]; embed re-extracts to verify
// the clamp did not corrupt recovery.
AudioClip embed(const AudioClip& cover, const WatermarkPayload& payload,
                const EmbedParams& params);

// Blind recovery from the stego signal alone: v = floor(m/delta) mod levels
// per assigned bin, header first, then count bytes, checksum verified.
WatermarkPayload extract(const AudioClip& stego, const EmbedParams& params);

} // namespace spmk
