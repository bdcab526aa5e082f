// speechmark: hides a short spoken secret inside a cover audio signal.
//
// The pipeline classifies the secret into voiced/unvoiced/silence frames,
// keeps the longest voiced stretch, denoises it, log-normalizes its
// amplitude to mask who spoke it, serializes the result and embeds it in the
// high-frequency subband of the cover via multi-level QIM. Recovery is
// blind: the stego file plus the embedding parameters suffice.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spmk/audio_io.hpp"
#include "spmk/metrics.hpp"
#include "spmk/normalize.hpp"
#include "spmk/pitch.hpp"
#include "spmk/synth.hpp"
#include "spmk/vad.hpp"
#include "spmk/watermark.hpp"

namespace {

struct Options {
  size_t frame_len = 256;
  size_t hop = 128;
  std::string window = "hamming";
  double f_min = 50.0;
  double f_max = 400.0;
  std::optional<double> silence_threshold;
  std::optional<double> energy_threshold;
  std::optional<double> zcr_threshold;
  size_t block_len = 1024;
  double subband_lo = 0.75;
  double subband_hi = 0.9375;
  double delta = spmk::EmbedParams{}.delta;
  uint64_t seed = 1;
  bool denormalize = false;
  std::optional<double> peak;

  spmk::FrameSpec frame_spec() const {
    spmk::FrameSpec spec;
    spec.frame_len = frame_len;
    spec.hop = hop;
    spec.window = window == "rectangular" ? spmk::Window::Rectangular : spmk::Window::Hamming;
    return spec;
  }

  spmk::VadOverrides vad_overrides() const {
    spmk::VadOverrides o;
    o.silence_threshold = silence_threshold;
    o.energy_threshold = energy_threshold;
    o.zcr_threshold = zcr_threshold;
    return o;
  }

  spmk::EmbedParams embed_params() const {
    spmk::EmbedParams p;
    p.block_len = block_len;
    p.subband_lo_frac = subband_lo;
    p.subband_hi_frac = subband_hi;
    p.delta = delta;
    return p;
  }
};

int exit_code_for(spmk::Err code) {
  switch (code) {
    case spmk::Err::NoVoicedSpeech: return 2;
    case spmk::Err::PayloadTooLarge: return 3;
    case spmk::Err::SilentInput: return 4;
    case spmk::Err::BadMagic: return 5;
    case spmk::Err::CrcMismatch: return 6;
    default: return 1;
  }
}

void print_kv(const char* key, const std::string& value) {
  std::printf("%s: %s\n", key, value.c_str());
}

void print_kv(const char* key, double value) {
  std::printf("%s: %.6g\n", key, value);
}

void print_kv(const char* key, size_t value) {
  std::printf("%s: %zu\n", key, value);
}

int cmd_hide(const Options& opt, const std::string& secret_path,
             const std::string& cover_path, const std::string& out_path) {
  const spmk::AudioClip secret = spmk::load_wav(secret_path);
  const spmk::AudioClip cover = spmk::load_wav(cover_path);
  const spmk::FrameSpec spec = opt.frame_spec();

  const spmk::VadResult vad = spmk::classify(secret, spec, opt.vad_overrides());
  const spmk::AudioClip segment = spmk::longest_voiced_segment(vad, secret, spec);

  // Noise reference for the denoiser: the recording's own silence-labeled
  // regions. Without any, the filter falls back to its low-energy-frame
  // self-estimate.
  std::optional<spmk::AudioClip> noise_ref;
  {
    spmk::AudioClip silence_clip;
    silence_clip.sample_rate = secret.sample_rate;
    for (size_t i = 0; i < vad.labels.size(); i++)
      if (vad.labels[i] == spmk::VadLabel::Silence) {
        const size_t start = i * spec.hop;
        silence_clip.samples.insert(silence_clip.samples.end(),
                                    secret.samples.begin() + long(start),
                                    secret.samples.begin() + long(start + spec.hop));
      }
    if (silence_clip.samples.size() >= spec.frame_len)
      noise_ref = std::move(silence_clip);
  }
  const spmk::AudioClip denoised = spmk::wiener_denoise(segment, noise_ref, spec);

  // Pitch of the voiced material is informational: normalization does not
  // consume it, so it is reported rather than silently skipped.
  size_t pitch_frames = 0;
  double f0_mean = 0.0;
  std::vector<double> f0_values;
  {
    const spmk::VadResult seg_vad = spmk::classify(denoised, spec, opt.vad_overrides());
    const auto track = spmk::pitch_track(denoised, seg_vad, spec, opt.f_min, opt.f_max);
    for (const auto& est : track)
      if (est && est->reliable()) {
        f0_values.push_back(est->f0);
        f0_mean += est->f0;
      }
    pitch_frames = f0_values.size();
    if (pitch_frames > 0)
      f0_mean /= double(pitch_frames);
  }

  const spmk::NormalizedSpeech ns = spmk::log_normalize(denoised);
  const spmk::WatermarkPayload payload = spmk::serialize(ns);
  const spmk::EmbedParams params = opt.embed_params();
  const spmk::Capacity cap = spmk::capacity(cover, params);
  const spmk::AudioClip stego = spmk::embed(cover, payload, params);
  spmk::save_wav(stego, out_path);

  print_kv("secret_samples", secret.samples.size());
  print_kv("frames_total", vad.labels.size());
  print_kv("frames_voiced", vad.count_of(spmk::VadLabel::Voiced));
  print_kv("frames_unvoiced", vad.count_of(spmk::VadLabel::Unvoiced));
  print_kv("frames_silence", vad.count_of(spmk::VadLabel::Silence));
  print_kv("voiced_segment_samples", segment.samples.size());
  print_kv("pitch_frames_reliable", pitch_frames);
  if (pitch_frames > 0) {
    std::sort(f0_values.begin(), f0_values.end());
    print_kv("pitch_f0_mean_hz", f0_mean);
    print_kv("pitch_f0_median_hz", f0_values[f0_values.size() / 2]);
  } else {
    print_kv("pitch_f0_mean_hz", std::string("n/a"));
    print_kv("pitch_f0_median_hz", std::string("n/a"));
  }
  print_kv("peak_y", ns.peak_y);
  print_kv("ratio_n", ns.ratio_n);
  print_kv("payload_samples", size_t(payload.count()));
  print_kv("payload_bytes_total", spmk::kPayloadHeaderBytes + payload.sample_bytes.size());
  print_kv("capacity_slots", cap.slots);
  print_kv("stego_snr_db", spmk::snr(cover, stego).to_string());
  return 0;
}

int cmd_reveal(const Options& opt, const std::string& stego_path,
               const std::string& out_path) {
  const spmk::AudioClip stego = spmk::load_wav(stego_path);
  const spmk::WatermarkPayload payload = spmk::extract(stego, opt.embed_params());

  spmk::AudioClip out;
  if (opt.denormalize) {
    const spmk::NormalizedSpeech ns = spmk::deserialize(payload, *opt.peak);
    out = spmk::log_denormalize(ns);
  } else {
    out.samples = spmk::deserialize(payload).samples;
  }
  out.sample_rate = int(payload.sample_rate);
  spmk::save_wav(out, out_path);

  char crc_hex[16];
  std::snprintf(crc_hex, sizeof crc_hex, "0x%08X", payload.crc);
  print_kv("payload_samples", size_t(payload.count()));
  print_kv("payload_rate", size_t(payload.sample_rate));
  print_kv("payload_crc32", std::string(crc_hex));
  return 0;
}

int cmd_vad(const Options& opt, const std::string& in_path) {
  const spmk::AudioClip clip = spmk::load_wav(in_path);
  const spmk::FrameSpec spec = opt.frame_spec();
  const spmk::VadResult vad = spmk::classify(clip, spec, opt.vad_overrides());
  std::printf("index,start,energy,zcr,label\n");
  for (size_t i = 0; i < vad.labels.size(); i++)
    std::printf("%zu,%zu,%.9g,%.9g,%s\n", i, i * spec.hop, vad.energies[i], vad.zcrs[i],
                spmk::vad_label_name(vad.labels[i]));
  return 0;
}

int cmd_pitch(const Options& opt, const std::string& in_path) {
  const spmk::AudioClip clip = spmk::load_wav(in_path);
  const spmk::FrameSpec spec = opt.frame_spec();
  const spmk::VadResult vad = spmk::classify(clip, spec, opt.vad_overrides());
  const auto track = spmk::pitch_track(clip, vad, spec, opt.f_min, opt.f_max);
  std::printf("index,f0,quefrency,confidence\n");
  for (size_t i = 0; i < track.size(); i++) {
    if (track[i])
      std::printf("%zu,%.6g,%zu,%.6g\n", i, track[i]->f0, track[i]->quefrency,
                  track[i]->confidence);
    else
      std::printf("%zu,,,\n", i);
  }
  return 0;
}

int cmd_normalize(const Options&, const std::string& in_path, const std::string& out_path) {
  const spmk::AudioClip clip = spmk::load_wav(in_path);
  const spmk::NormalizedSpeech ns = spmk::log_normalize(clip);
  spmk::AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = ns.samples;
  spmk::save_wav(out, out_path);
  print_kv("peak_y", ns.peak_y);
  print_kv("ratio_n", ns.ratio_n);
  return 0;
}

int cmd_evaluate(const Options&, const std::string& a_path, const std::string& b_path,
                 bool as_bytes) {
  if (as_bytes) {
    auto read_bytes = [](const std::string& path) {
      std::ifstream f(path, std::ios::binary);
      if (!f)
        throw spmk::Error(spmk::Err::IoFailure, "cannot open '" + path + "'");
      return std::vector<uint8_t>((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
    };
    print_kv("BER", spmk::ber(read_bytes(a_path), read_bytes(b_path)));
    return 0;
  }

  const spmk::AudioClip a = spmk::load_wav(a_path);
  const spmk::AudioClip b = spmk::load_wav(b_path);
  // Bit errors over the PCM16 words both signals quantize to.
  auto pcm_bytes = [](const spmk::AudioClip& clip) {
    std::vector<uint8_t> bytes;
    bytes.reserve(clip.samples.size() * 2);
    for (double s : clip.samples) {
      const int32_t v = int32_t(std::clamp(std::round(s * 32768.0), -32768.0, 32767.0));
      bytes.push_back(uint8_t(v & 0xff));
      bytes.push_back(uint8_t((v >> 8) & 0xff));
    }
    return bytes;
  };
  spmk::QualityReport report;
  report.snr = spmk::snr(a, b);
  report.max_abs_diff = spmk::max_abs_diff(a, b);
  report.ber = spmk::ber(pcm_bytes(a), pcm_bytes(b));
  print_kv("SNR", report.snr.to_string());
  print_kv("max_abs_diff", report.max_abs_diff);
  print_kv("BER", report.ber);
  return 0;
}

void write_truth(const spmk::CorpusItem& item, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f)
    throw spmk::Error(spmk::Err::IoFailure, "cannot create '" + path + "'");
  f << "index,label,f0\n";
  for (size_t i = 0; i < item.frame_truth.size(); i++) {
    f << i << ',' << spmk::vad_label_name(item.frame_truth[i]) << ',';
    if (item.f0_truth[i])
      f << *item.f0_truth[i];
    f << '\n';
  }
}

int cmd_corpus(const Options& opt, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto emit = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  const spmk::AudioClip cover = spmk::make_cover(3.2, 22050, opt.seed);
  spmk::save_wav(cover, emit("cover.wav"));
  std::printf("wrote: %s\n", emit("cover.wav").c_str());

  for (double f0 : {100.0, 150.0, 200.0, 250.0}) {
    spmk::CorpusItem item = spmk::make_voiced(f0, 1.5, 8000, 5, opt.seed);
    const std::string stem = "voiced_f0" + std::to_string(int(f0));
    spmk::save_wav(item.clip, emit(stem + ".wav"));
    write_truth(item, emit(stem + ".truth.csv"));
    std::printf("wrote: %s\n", emit(stem + ".wav").c_str());
  }

  using Seg = std::pair<spmk::VadLabel, double>;
  const std::vector<std::vector<Seg>> patterns = {
      {{spmk::VadLabel::Silence, 0.5}, {spmk::VadLabel::Voiced, 1.0}, {spmk::VadLabel::Silence, 0.5}},
      {{spmk::VadLabel::Silence, 0.3}, {spmk::VadLabel::Unvoiced, 0.5}, {spmk::VadLabel::Voiced, 0.8}},
      {{spmk::VadLabel::Voiced, 0.6}, {spmk::VadLabel::Unvoiced, 0.4}, {spmk::VadLabel::Voiced, 0.6}},
  };
  for (size_t i = 0; i < patterns.size(); i++) {
    spmk::CorpusItem item = spmk::make_segmented(patterns[i], 8000, opt.seed + i);
    const std::string stem = "segmented_" + std::to_string(i + 1);
    spmk::save_wav(item.clip, emit(stem + ".wav"));
    write_truth(item, emit(stem + ".truth.csv"));
    std::printf("wrote: %s\n", emit(stem + ".wav").c_str());
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"speechmark: blind speech watermarking with speaker-masking normalization"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file (key=value lines, # comments)");

  Options opt;
  app.add_option("--frame-len", opt.frame_len, "analysis frame length, power of two")
      ->capture_default_str();
  app.add_option("--hop", opt.hop, "frame hop in samples")->capture_default_str();
  app.add_option("--window", opt.window, "analysis window")
      ->check(CLI::IsMember({"hamming", "rectangular"}))
      ->capture_default_str();
  app.add_option("--fmin", opt.f_min, "pitch search lower bound, Hz")->capture_default_str();
  app.add_option("--fmax", opt.f_max, "pitch search upper bound, Hz")->capture_default_str();
  app.add_option("--silence-threshold", opt.silence_threshold, "energy below this is silence");
  app.add_option("--energy-threshold", opt.energy_threshold, "voiced energy gate");
  app.add_option("--zcr-threshold", opt.zcr_threshold, "voiced ZCR gate");
  app.add_option("--block-len", opt.block_len, "embedding block length, power of two")
      ->capture_default_str();
  app.add_option("--subband-lo", opt.subband_lo, "embedding subband low edge, fraction of Nyquist")
      ->capture_default_str();
  app.add_option("--subband-hi", opt.subband_hi, "embedding subband high edge, fraction of Nyquist")
      ->capture_default_str();
  app.add_option("--delta", opt.delta, "QIM magnitude quantization step")->capture_default_str();
  app.add_option("--seed", opt.seed, "generator seed")->capture_default_str();

  std::string secret_path, cover_path, stego_path, in_path, out_path, a_path, b_path, out_dir;
  bool eval_bytes = false;

  CLI::App* hide = app.add_subcommand("hide", "embed a spoken secret into a cover signal");
  hide->add_option("secret", secret_path, "WAV with the spoken secret")->required();
  hide->add_option("cover", cover_path, "cover WAV")->required();
  hide->add_option("out", out_path, "stego WAV to write")->required();

  CLI::App* reveal = app.add_subcommand("reveal", "recover the hidden secret from a stego file");
  reveal->add_option("stego", stego_path, "stego WAV")->required();
  reveal->add_option("out", out_path, "recovered WAV to write")->required();
  auto* denorm_flag =
      reveal->add_flag("--denormalize", opt.denormalize, "undo the log amplitude normalization");
  reveal->add_option("--peak", opt.peak, "original peak amplitude Y used for denormalization");
  denorm_flag->needs(reveal->get_option("--peak"));

  CLI::App* vad = app.add_subcommand("vad", "per-frame energy/ZCR/label CSV");
  vad->add_option("input", in_path, "WAV to analyze")->required();

  CLI::App* pitch = app.add_subcommand("pitch", "per-frame pitch track CSV");
  pitch->add_option("input", in_path, "WAV to analyze")->required();

  CLI::App* normalize = app.add_subcommand("normalize", "log-normalize a clip's amplitude");
  normalize->add_option("input", in_path, "WAV to normalize")->required();
  normalize->add_option("out", out_path, "normalized WAV to write")->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "SNR / max diff / BER between two files");
  evaluate->add_option("a", a_path, "reference file")->required();
  evaluate->add_option("b", b_path, "test file")->required();
  evaluate->add_flag("--bytes", eval_bytes, "compare raw bytes instead of WAV samples");

  CLI::App* corpus = app.add_subcommand("corpus", "generate the synthetic test corpus");
  corpus->add_option("--out-dir", out_dir, "directory for WAV + truth files")->required();

  for (CLI::App* sub : {hide, reveal, vad, pitch, normalize, evaluate, corpus})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (hide->parsed())
      return cmd_hide(opt, secret_path, cover_path, out_path);
    if (reveal->parsed())
      return cmd_reveal(opt, stego_path, out_path);
    if (vad->parsed())
      return cmd_vad(opt, in_path);
    if (pitch->parsed())
      return cmd_pitch(opt, in_path);
    if (normalize->parsed())
      return cmd_normalize(opt, in_path, out_path);
    if (evaluate->parsed())
      return cmd_evaluate(opt, a_path, b_path, eval_bytes);
    if (corpus->parsed())
      return cmd_corpus(opt, out_dir);
  } catch (const spmk::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
