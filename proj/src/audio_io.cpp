#include "spmk/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

namespace spmk {

namespace {

uint32_t rd_u32le(const uint8_t* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}

uint16_t rd_u16le(const uint8_t* p) {
  return uint16_t(p[0]) | uint16_t(p[1]) << 8;
}

void wr_u32le(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(uint8_t(v & 0xff));
  out.push_back(uint8_t((v >> 8) & 0xff));
  out.push_back(uint8_t((v >> 16) & 0xff));
  out.push_back(uint8_t((v >> 24) & 0xff));
}

void wr_u16le(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(uint8_t(v & 0xff));
  out.push_back(uint8_t((v >> 8) & 0xff));
}

bool tag_is(const uint8_t* p, const char* tag) {
  return p[0] == uint8_t(tag[0]) && p[1] == uint8_t(tag[1]) &&
         p[2] == uint8_t(tag[2]) && p[3] == uint8_t(tag[3]);
}

} // namespace

AudioClip load_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw Error(Err::IoFailure, "cannot open '" + path + "'");

  std::vector<uint8_t> data((std::istreambuf_iterator<char>(f)),
                            std::istreambuf_iterator<char>());
  if (f.bad())
    throw Error(Err::IoFailure, "read error on '" + path + "'");

  if (data.size() < 12)
    throw Error(Err::MalformedContainer, "file too small for a RIFF header");
  if (!tag_is(data.data(), "RIFF"))
    throw Error(Err::MalformedContainer, "missing RIFF magic");
  if (!tag_is(data.data() + 8, "WAVE"))
    throw Error(Err::MalformedContainer, "missing WAVE form type");

  // Walk chunks: fmt must appear before data, anything else is skipped.
  bool have_fmt = false;
  uint16_t format_tag = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const uint8_t* hdr = data.data() + pos;
    uint32_t chunk_size = rd_u32le(hdr + 4);
    size_t body = pos + 8;
    if (body + chunk_size > data.size())
      throw Error(Err::MalformedContainer, "chunk length exceeds file size");

    if (tag_is(hdr, "fmt ")) {
      if (chunk_size < 16)
        throw Error(Err::MalformedContainer, "fmt chunk truncated");
      format_tag = rd_u16le(data.data() + body);
      channels = rd_u16le(data.data() + body + 2);
      rate = rd_u32le(data.data() + body + 4);
      bits = rd_u16le(data.data() + body + 14);
      have_fmt = true;
    } else if (tag_is(hdr, "data")) {
      if (!have_fmt)
        throw Error(Err::MalformedContainer, "data chunk before fmt chunk");
      if (format_tag != 1)
        throw Error(Err::UnsupportedFormat, "PCM format tag expected, got " + std::to_string(format_tag));
      if (bits != 16)
        throw Error(Err::UnsupportedFormat, "16-bit samples expected, got " + std::to_string(bits));
      if (channels != 1 && channels != 2)
        throw Error(Err::UnsupportedFormat, "mono or stereo expected, got " + std::to_string(channels) + " channels");
      if (rate == 0)
        throw Error(Err::MalformedContainer, "zero sample rate");
      size_t bytes_per_frame = size_t(channels) * 2;
      size_t n_frames = chunk_size / bytes_per_frame;
      if (n_frames == 0)
        throw Error(Err::MalformedContainer, "empty data chunk");

      AudioClip clip;
      clip.sample_rate = int(rate);
      clip.source_bit_depth = 16;
      clip.samples.resize(n_frames);
      const uint8_t* s = data.data() + body;
      for (size_t i = 0; i < n_frames; i++) {
        int32_t acc = 0;
        for (uint16_t c = 0; c < channels; c++) {
          int16_t v = int16_t(rd_u16le(s + i * bytes_per_frame + c * 2));
          acc += v;
        }
        clip.samples[i] = (double(acc) / channels) / 32768.0;
      }
      return clip;
    }
    pos = body + chunk_size + (chunk_size & 1); // chunks are word-aligned
  }
  throw Error(Err::MalformedContainer, have_fmt ? "no data chunk" : "no fmt chunk");
}

void save_wav(const AudioClip& clip, const std::string& path) {
  if (clip.sample_rate <= 0)
    throw Error(Err::InvalidArgument, "sample rate must be positive");

  const uint32_t n = uint32_t(clip.samples.size());
  const uint32_t data_bytes = n * 2;

  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  for (char c : {'R', 'I', 'F', 'F'}) out.push_back(uint8_t(c));
  wr_u32le(out, 36 + data_bytes);
  for (char c : {'W', 'A', 'V', 'E'}) out.push_back(uint8_t(c));
  for (char c : {'f', 'm', 't', ' '}) out.push_back(uint8_t(c));
  wr_u32le(out, 16);
  wr_u16le(out, 1);                              // PCM
  wr_u16le(out, 1);                              // mono
  wr_u32le(out, uint32_t(clip.sample_rate));
  wr_u32le(out, uint32_t(clip.sample_rate) * 2); // byte rate
  wr_u16le(out, 2);                              // block align
  wr_u16le(out, 16);                             // bits per sample
  for (char c : {'d', 'a', 't', 'a'}) out.push_back(uint8_t(c));
  wr_u32le(out, data_bytes);
  for (double s : clip.samples) {
    double scaled = std::round(s * 32768.0);
    int32_t v = int32_t(std::clamp(scaled, -32768.0, 32767.0));
    wr_u16le(out, uint16_t(int16_t(v)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw Error(Err::IoFailure, "cannot create '" + path + "'");
  f.write(reinterpret_cast<const char*>(out.data()), std::streamsize(out.size()));
  if (!f)
    throw Error(Err::IoFailure, "write error on '" + path + "'");
}

} // namespace spmk
