#include "spmk/watermark.hpp"

#include <algorithm>
#include <cmath>

#include "spmk/dsp.hpp"

namespace spmk {

uint32_t crc32(const uint8_t* data, size_t length) {
  uint32_t crc = 0xFFFFFFFFu;
  for (size_t i = 0; i < length; i++) {
    crc ^= uint32_t(data[i]);
    for (int bit = 0; bit < 8; bit++)
      crc = (crc & 1u) ? (crc >> 1) ^ 0xEDB88320u : crc >> 1;
  }
  return crc ^ 0xFFFFFFFFu;
}

uint32_t crc32(const std::vector<uint8_t>& data) {
  return crc32(data.data(), data.size());
}

namespace {

void wr_u32be(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(uint8_t(v >> 24));
  out.push_back(uint8_t((v >> 16) & 0xff));
  out.push_back(uint8_t((v >> 8) & 0xff));
  out.push_back(uint8_t(v & 0xff));
}

uint32_t rd_u32be(const uint8_t* p) {
  return uint32_t(p[0]) << 24 | uint32_t(p[1]) << 16 | uint32_t(p[2]) << 8 | uint32_t(p[3]);
}

void validate_params(const EmbedParams& params) {
  if (!is_power_of_two(params.block_len))
    throw Error(Err::InvalidArgument, "block_len must be a power of two");
  if (!(params.subband_lo_frac >= 0.5 && params.subband_lo_frac < params.subband_hi_frac &&
        params.subband_hi_frac <= 1.0))
    throw Error(Err::InvalidArgument, "subband fractions must satisfy 0.5 <= lo < hi <= 1.0");
  if (!(params.delta > 0.0))
    throw Error(Err::InvalidArgument, "delta must be positive");
  if (params.levels != 256)
    throw Error(Err::InvalidArgument, "only 256 levels (one byte per bin) are supported");
}

// First and last usable bin of the subband; Nyquist excluded.
struct BinRange {
  size_t lo = 0;
  size_t hi = 0; // inclusive; lo > hi means empty
  size_t count() const { return hi >= lo ? hi - lo + 1 : 0; }
};

BinRange band_bins(const EmbedParams& params) {
  const size_t half = params.block_len / 2;
  BinRange range;
  range.lo = size_t(std::ceil(params.subband_lo_frac * double(half)));
  size_t hi = size_t(std::floor(params.subband_hi_frac * double(half)));
  range.hi = std::min(hi, half - 1);
  if (range.lo > range.hi) {
    range.lo = 1;
    range.hi = 0;
  }
  return range;
}

// Nearest non-negative point of coset v: { levels*delta*q + (v+0.5)*delta }.
double qim_quantize(double magnitude, uint8_t value, double delta, int levels) {
  const double cell = double(levels) * delta;
  const double offset = (double(value) + 0.5) * delta;
  const double base = cell * std::floor(magnitude / cell);
  double best = base + offset;
  for (double cand : {base - cell + offset, base + cell + offset}) {
    if (cand >= 0.0 && std::fabs(cand - magnitude) < std::fabs(best - magnitude))
      best = cand;
  }
  if (best < 0.0)
    best = base + offset; // in-cell point is always >= 0
  return best;
}

uint8_t qim_read(double magnitude, double delta, int levels) {
  const long long raw = (long long)std::floor(magnitude / delta);
  return uint8_t(((raw % levels) + levels) % levels);
}

} // namespace

WatermarkPayload serialize(const NormalizedSpeech& ns) {
  WatermarkPayload payload;
  payload.sample_rate = uint32_t(ns.sample_rate);
  payload.sample_bytes.resize(ns.samples.size());
  for (size_t i = 0; i < ns.samples.size(); i++) {
    const double v = std::round(ns.samples[i] * 255.0);
    payload.sample_bytes[i] = uint8_t(std::clamp(v, 0.0, 255.0));
  }
  payload.crc = crc32(payload.sample_bytes);
  return payload;
}

NormalizedSpeech deserialize(const WatermarkPayload& payload, std::optional<double> peak_y) {
  NormalizedSpeech ns;
  ns.sample_rate = int(payload.sample_rate);
  ns.peak_y = peak_y.value_or(std::exp(1.0) - 1.0);
  ns.ratio_n = 1.0 / std::log1p(ns.peak_y);
  ns.samples.resize(payload.sample_bytes.size());
  for (size_t i = 0; i < payload.sample_bytes.size(); i++)
    ns.samples[i] = double(payload.sample_bytes[i]) / 255.0;
  return ns;
}

std::vector<uint8_t> to_wire(const WatermarkPayload& payload) {
  std::vector<uint8_t> out;
  out.reserve(kPayloadHeaderBytes + payload.sample_bytes.size());
  wr_u32be(out, kPayloadMagic);
  out.push_back(kPayloadVersion);
  wr_u32be(out, payload.sample_rate);
  wr_u32be(out, payload.count());
  wr_u32be(out, payload.crc);
  out.insert(out.end(), payload.sample_bytes.begin(), payload.sample_bytes.end());
  return out;
}

WatermarkPayload make_payload(uint32_t sample_rate, std::vector<uint8_t> bytes) {
  WatermarkPayload payload;
  payload.sample_rate = sample_rate;
  payload.sample_bytes = std::move(bytes);
  payload.crc = crc32(payload.sample_bytes);
  return payload;
}

Capacity capacity(const AudioClip& cover, const EmbedParams& params) {
  validate_params(params);
  Capacity cap;
  cap.blocks = cover.samples.size() / params.block_len;
  cap.slots_per_block = band_bins(params).count();
  cap.slots = cap.blocks * cap.slots_per_block;
  return cap;
}

AudioClip embed(const AudioClip& cover, const WatermarkPayload& payload,
                const EmbedParams& params) {
  validate_params(params);
  const std::vector<uint8_t> wire = to_wire(payload);
  const Capacity cap = capacity(cover, params);
  if (wire.size() > cap.slots)
    throw Error(Err::PayloadTooLarge, std::to_string(wire.size()) + " slots needed, " +
                                          std::to_string(cap.slots) + " available");

  const BinRange band = band_bins(params);
  const size_t spb = cap.slots_per_block;
  const size_t used_blocks = (wire.size() + spb - 1) / spb;

  AudioClip out = cover;
  std::vector<double> frame(params.block_len);
  for (size_t b = 0; b < used_blocks; b++) {
    const size_t start = b * params.block_len;
    std::copy(cover.samples.begin() + long(start),
              cover.samples.begin() + long(start + params.block_len), frame.begin());
    Spectrum spec = dft(frame, cover.sample_rate);
    for (size_t j = 0; j < spb; j++) {
      const size_t slot = b * spb + j;
      const uint8_t value = slot < wire.size() ? wire[slot] : 0;
      const size_t k = band.lo + j;
      const double m = std::abs(spec.bins[k]);
      const double m_new = qim_quantize(m, value, params.delta, params.levels);
      spec.bins[k] = m > 0.0 ? spec.bins[k] * (m_new / m)
                             : std::complex<double>(m_new, 0.0);
    }
    std::vector<double> rebuilt = idft(spec);
    std::copy(rebuilt.begin(), rebuilt.end(), out.samples.begin() + long(start));
  }
  for (double& s : out.samples)
    s = std::clamp(s, -1.0, 1.0);

  // The clamp can in principle disturb an embedded magnitude; verify.
  bool recovered = false;
  try {
    recovered = (extract(out, params) == payload);
  } catch (const Error&) {
    recovered = false;
  }
  if (!recovered)
    throw Error(Err::ClampViolation,
                "clamping corrupted the embedding; lower delta or the cover amplitude");
  return out;
}

WatermarkPayload extract(const AudioClip& stego, const EmbedParams& params) {
  validate_params(params);
  const Capacity cap = capacity(stego, params);
  if (cap.slots < kPayloadHeaderBytes)
    throw Error(Err::TruncatedStego, "stego too short for a payload header");

  const BinRange band = band_bins(params);
  const size_t spb = cap.slots_per_block;

  std::vector<uint8_t> bytes;
  bytes.reserve(kPayloadHeaderBytes + spb);
  size_t need = kPayloadHeaderBytes;
  std::optional<WatermarkPayload> header;
  std::vector<double> frame(params.block_len);
  for (size_t b = 0; b < cap.blocks && bytes.size() < need; b++) {
    const size_t start = b * params.block_len;
    std::copy(stego.samples.begin() + long(start),
              stego.samples.begin() + long(start + params.block_len), frame.begin());
    Spectrum spec = dft(frame, stego.sample_rate);
    for (size_t j = 0; j < spb; j++)
      bytes.push_back(qim_read(std::abs(spec.bins[band.lo + j]), params.delta, params.levels));

    if (!header && bytes.size() >= kPayloadHeaderBytes) {
      if (rd_u32be(bytes.data()) != kPayloadMagic)
        throw Error(Err::BadMagic, "payload magic not found");
      if (bytes[4] != kPayloadVersion)
        throw Error(Err::BadMagic, "unsupported payload version " + std::to_string(bytes[4]));
      WatermarkPayload p;
      p.sample_rate = rd_u32be(bytes.data() + 5);
      const uint32_t count = rd_u32be(bytes.data() + 9);
      p.crc = rd_u32be(bytes.data() + 13);
      need = kPayloadHeaderBytes + count;
      if (need > cap.slots)
        throw Error(Err::TruncatedStego, "payload of " + std::to_string(count) +
                                             " bytes exceeds remaining slots");
      header = std::move(p);
    }
  }

  WatermarkPayload payload = std::move(*header);
  payload.sample_bytes.assign(bytes.begin() + long(kPayloadHeaderBytes),
                              bytes.begin() + long(need));
  if (crc32(payload.sample_bytes) != payload.crc)
    throw Error(Err::CrcMismatch, "payload checksum mismatch");
  return payload;
}

} // namespace spmk
