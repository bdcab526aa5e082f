// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerance in code.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "spmk/audio_io.hpp"
#include "spmk/dsp.hpp"
#include "spmk/metrics.hpp"
#include "spmk/normalize.hpp"
#include "spmk/pitch.hpp"
#include "spmk/synth.hpp"
#include "spmk/vad.hpp"
#include "spmk/watermark.hpp"
#include "oracles.hpp"

using namespace spmk;

namespace {

struct Criterion {
  const char* name;
  std::function<bool(std::string&)> run;
};

bool approx_zero(double v, double tol) { return std::fabs(v) <= tol; }

// ---------------------------------------------------------------- 1
bool dft_oracle(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_vs_oracle = 0.0;
  for (size_t len : {64u, 128u, 256u}) {
    oracle::TestRng rng(len);
    std::vector<double> x(len);
    for (double& v : x)
      v = rng.signed_unit();
    auto fast = dft(x);
    auto slow = oracle::direct_dft(x);
    for (size_t k = 0; k < slow.size(); k++)
      worst_vs_oracle = std::max(worst_vs_oracle, std::abs(fast.bins[k] - slow[k]));
  }

  double worst_roundtrip = 0.0;
  for (size_t len = 64; len <= 4096; len *= 2) {
    oracle::TestRng rng(len + 1);
    std::vector<double> x(len);
    for (double& v : x)
      v = rng.signed_unit();
    auto back = idft(dft(x));
    for (size_t i = 0; i < len; i++)
      worst_roundtrip = std::max(worst_roundtrip, std::fabs(back[i] - x[i]));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "oracle err %.2e (<1e-7), roundtrip %.2e (<1e-9), %.2f s (<5)",
                worst_vs_oracle, worst_roundtrip, secs);
  detail = buf;
  return worst_vs_oracle < 1e-7 && worst_roundtrip < 1e-9 && secs < 5.0;
}

// ---------------------------------------------------------------- 2
bool vad_accuracy(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  size_t correct = 0, total = 0;
  for (uint64_t seed = 1; seed <= 100; seed++) {
    SplitMix64 rng(seed * 0x9E3779B9ull);
    const size_t n_segments = 2 + rng.next() % 4;
    std::vector<std::pair<VadLabel, double>> pattern;
    for (size_t s = 0; s < n_segments; s++) {
      const VadLabel label = static_cast<VadLabel>(rng.next() % 3);
      const double duration = 0.25 + 0.45 * rng.next_unit();
      pattern.push_back({label, duration});
    }
    CorpusItem item = make_segmented(pattern, 8000, seed);
    VadResult vad = classify(item.clip, FrameSpec{});
    for (size_t i = 0; i < vad.labels.size(); i++) {
      total++;
      if (vad.labels[i] == item.frame_truth[i])
        correct++;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double accuracy = double(correct) / double(total);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu frames, accuracy %.4f (>=0.95), %.2f s (<10)",
                correct, total, accuracy, secs);
  detail = buf;
  return accuracy >= 0.95 && secs < 10.0;
}

// ---------------------------------------------------------------- 3
bool zcr_law(std::string& detail) {
  const FrameSpec spec;
  const double slack = 2.0 / double(spec.frame_len);
  double worst = 0.0;
  for (int f = 100; f <= 1000; f += 100) {
    AudioClip clip;
    clip.sample_rate = 8000;
    clip.samples = oracle::sine(double(f), 0.5, 8000, 8192);
    auto seq = frame_signal(clip, spec);
    const double expected = 2.0 * double(f) / 8000.0;
    for (const auto& frame : seq.frames)
      worst = std::max(worst, std::fabs(zero_crossing_rate(frame) - expected));
    if (worst > slack)
      break;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max |zcr - 2f/fs| = %.6f (<= %.6f)", worst, slack);
  detail = buf;
  return worst <= slack;
}

// ---------------------------------------------------------------- 4
bool pitch_accuracy(std::string& detail) {
  // 16 kHz: every target f0 has an integer quefrency within 1.2 Hz, so the
  // +-3 Hz tolerance measures the estimator rather than lag quantization.
  const auto t0 = std::chrono::steady_clock::now();
  const int fs = 16000;
  size_t present = 0, within = 0, agree = 0;
  for (int f0 = 80; f0 <= 320; f0 += 40) {
    CorpusItem item = make_voiced(double(f0), 1.5, fs, 8, uint64_t(f0));
    FrameSpec spec;
    VadResult vad = classify(item.clip, spec);
    auto track = pitch_track(item.clip, vad, spec, 50.0, 400.0);
    auto seq = frame_signal(item.clip, spec);
    for (size_t i = 0; i < track.size(); i++) {
      if (!track[i])
        continue;
      present++;
      if (std::fabs(track[i]->f0 - double(f0)) <= 3.0)
        within++;
      const size_t offset = std::min(seq.starts[i], item.clip.samples.size() - kPitchFrameLen);
      std::vector<double> frame(item.clip.samples.begin() + long(offset),
                                item.clip.samples.begin() + long(offset + kPitchFrameLen));
      const size_t lag = oracle::autocorr_peak_lag(frame, 40, 320);
      if (std::llabs(int64_t(track[i]->quefrency) - int64_t(lag)) <= 1)
        agree++;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double within_rate = double(within) / double(present);
  const double agree_rate = double(agree) / double(present);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu voiced frames: +-3 Hz on %.4f (>=0.95), oracle +-1 on %.4f (>=0.95), %.2f s (<10)",
                present, within_rate, agree_rate, secs);
  detail = buf;
  return present > 0 && within_rate >= 0.95 && agree_rate >= 0.95 && secs < 10.0;
}

// ---------------------------------------------------------------- 5
bool normalization(std::string& detail) {
  double worst_peak = 0.0, worst_roundtrip = 0.0;
  for (uint64_t seed = 1; seed <= 1000; seed++) {
    oracle::TestRng rng(seed);
    AudioClip clip;
    clip.sample_rate = 8000;
    clip.samples.resize(64 + seed % 256);
    for (double& v : clip.samples)
      v = rng.signed_unit() * (0.05 + rng.uniform());
    if (std::all_of(clip.samples.begin(), clip.samples.end(),
                    [](double v) { return v == 0.0; }))
      clip.samples[0] = 0.25;

    NormalizedSpeech ns = log_normalize(clip);
    const double peak = *std::max_element(ns.samples.begin(), ns.samples.end());
    worst_peak = std::max(worst_peak, std::fabs(peak - 1.0));

    AudioClip back = log_denormalize(ns);
    for (size_t i = 0; i < clip.samples.size(); i++)
      worst_roundtrip =
          std::max(worst_roundtrip, std::fabs(back.samples[i] - std::fabs(clip.samples[i])));
  }

  bool silent_raises = false;
  try {
    AudioClip silent;
    silent.sample_rate = 8000;
    silent.samples.assign(100, 0.0);
    log_normalize(silent);
  } catch (const Error& e) {
    silent_raises = e.code() == Err::SilentInput;
  }

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "peak err %.2e (<=1e-9), roundtrip err %.2e (<=1e-6), SilentInput %s",
                worst_peak, worst_roundtrip, silent_raises ? "raised" : "MISSING");
  detail = buf;
  return worst_peak <= 1e-9 && worst_roundtrip <= 1e-6 && silent_raises;
}

// ---------------------------------------------------------------- 6
bool cmvn_invariance(std::string& detail) {
  oracle::TestRng rng(606);
  std::vector<std::vector<double>> x(30, std::vector<double>(12));
  for (auto& row : x)
    for (double& v : row)
      v = 2.0 * rng.signed_unit();
  auto [x_hat, xs] = cmvn(x);

  double worst = 0.0;
  for (double alpha : {0.1, 2.5, 10.0})
    for (double shift : {-3.0, 0.7}) {
      auto y = x;
      for (auto& row : y)
        for (double& v : row)
          v = alpha * v + shift;
      auto [y_hat, ys] = cmvn(y);
      for (size_t r = 0; r < x.size(); r++)
        for (size_t c = 0; c < x[0].size(); c++)
          worst = std::max(worst, std::fabs(y_hat[r][c] - x_hat[r][c]));
    }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max |y_hat - x_hat| = %.2e (<=1e-9)", worst);
  detail = buf;
  return worst <= 1e-9;
}

// ---------------------------------------------------------------- 7
bool capacity_fit(std::string& detail) {
  AudioClip cover = make_cover(70641.0 / 22050.0, 22050, 1);
  if (cover.samples.size() != 70641) {
    detail = "cover is not 70641 samples";
    return false;
  }
  const Capacity cap = capacity(cover, EmbedParams{});
  const bool geometry_ok = cap.blocks == 68 && cap.slots_per_block == 97 && cap.slots == 6596;

  WatermarkPayload payload = make_payload(8000, std::vector<uint8_t>(2126, 0x5A));
  const size_t need = kPayloadHeaderBytes + payload.count(); // 2143

  bool full_fits = false;
  try {
    embed(cover, payload, EmbedParams{});
    full_fits = true;
  } catch (const Error&) {
  }

  AudioClip cover23 = cover;
  cover23.samples.resize(23 * 1024);
  bool fits23 = false;
  try {
    embed(cover23, payload, EmbedParams{});
    fits23 = true;
  } catch (const Error&) {
  }

  AudioClip cover22 = cover;
  cover22.samples.resize(23 * 1024 - 1);
  bool rejected22 = false;
  try {
    embed(cover22, payload, EmbedParams{});
  } catch (const Error& e) {
    rejected22 = e.code() == Err::PayloadTooLarge;
  }

  char buf[220];
  std::snprintf(buf, sizeof buf,
                "slots 6596>=%zu %s; 23 blocks (2231) %s; 22 blocks (2134) %s",
                need, geometry_ok && full_fits ? "fit" : "FAIL",
                fits23 ? "fit" : "FAIL", rejected22 ? "rejected" : "NOT REJECTED");
  detail = buf;
  return geometry_ok && full_fits && fits23 && rejected22;
}

// ---------------------------------------------------------------- 8
bool end_to_end(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  AudioClip cover = make_cover(70641.0 / 22050.0, 22050, 1);
  const FrameSpec spec;
  const EmbedParams params;
  const auto tmp = std::filesystem::temp_directory_path() / "speechmark_accept.wav";

  double min_snr = 1e300;
  size_t cases = 0;
  std::vector<CorpusItem> secrets;
  for (double f0 : {150.0, 200.0, 250.0})
    secrets.push_back(make_voiced(f0, 0.6, 8000, 12, uint64_t(f0)));
  secrets.push_back(make_segmented({{VadLabel::Silence, 0.3},
                                    {VadLabel::Voiced, 0.6},
                                    {VadLabel::Unvoiced, 0.3}},
                                   8000, 77));

  for (const auto& item : secrets) {
    VadResult vad = classify(item.clip, spec);
    AudioClip segment = longest_voiced_segment(vad, item.clip, spec);
    // Same noise policy as the CLI: silence regions when present.
    std::optional<AudioClip> noise_ref;
    AudioClip silence_clip;
    silence_clip.sample_rate = item.clip.sample_rate;
    for (size_t i = 0; i < vad.labels.size(); i++)
      if (vad.labels[i] == VadLabel::Silence) {
        const size_t start = i * spec.hop;
        silence_clip.samples.insert(silence_clip.samples.end(),
                                    item.clip.samples.begin() + long(start),
                                    item.clip.samples.begin() + long(start + spec.hop));
      }
    if (silence_clip.samples.size() >= spec.frame_len)
      noise_ref = std::move(silence_clip);
    AudioClip denoised = wiener_denoise(segment, noise_ref, spec);
    WatermarkPayload payload = serialize(log_normalize(denoised));

    AudioClip stego = embed(cover, payload, params);
    min_snr = std::min(min_snr, snr(cover, stego).db);

    WatermarkPayload in_memory = extract(stego, params);
    if (ber(in_memory.sample_bytes, payload.sample_bytes) != 0.0 ||
        !(in_memory == payload)) {
      detail = "in-memory roundtrip not bit-exact";
      return false;
    }

    save_wav(stego, tmp.string());
    WatermarkPayload from_pcm = extract(load_wav(tmp.string()), params);
    if (ber(from_pcm.sample_bytes, payload.sample_bytes) != 0.0 || !(from_pcm == payload)) {
      detail = "PCM16 roundtrip not bit-exact";
      return false;
    }
    cases++;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu secrets, BER 0 both paths, min SNR %.1f dB (>=30), %.2f s (<30)",
                cases, min_snr, secs);
  detail = buf;
  return min_snr >= 30.0 && secs < 30.0;
}

// ---------------------------------------------------------------- 9
AudioClip perturb_band(const AudioClip& stego, const EmbedParams& params, double amplitude,
                       uint64_t seed) {
  oracle::TestRng rng(seed);
  AudioClip out = stego;
  const size_t half = params.block_len / 2;
  const size_t lo = size_t(std::ceil(params.subband_lo_frac * double(half)));
  const size_t hi = std::min(size_t(std::floor(params.subband_hi_frac * double(half))), half - 1);
  for (size_t start = 0; start + params.block_len <= out.samples.size();
       start += params.block_len) {
    std::vector<double> frame(out.samples.begin() + long(start),
                              out.samples.begin() + long(start + params.block_len));
    auto spectrum = dft(frame);
    for (size_t k = lo; k <= hi; k++) {
      const double m = std::abs(spectrum.bins[k]);
      const double m_new = std::max(0.0, m + amplitude * rng.signed_unit());
      spectrum.bins[k] = m > 0.0 ? spectrum.bins[k] * (m_new / m)
                                 : std::complex<double>(m_new, 0.0);
    }
    auto rebuilt = idft(spectrum);
    std::copy(rebuilt.begin(), rebuilt.end(), out.samples.begin() + long(start));
  }
  return out;
}

bool qim_robustness(std::string& detail) {
  AudioClip cover = make_cover(70641.0 / 22050.0, 22050, 1);
  EmbedParams params;
  std::vector<uint8_t> bytes(1500);
  for (size_t i = 0; i < bytes.size(); i++)
    bytes[i] = uint8_t((i * 73 + 29) & 0xff);
  WatermarkPayload payload = make_payload(8000, bytes);
  AudioClip stego = embed(cover, payload, params);

  for (uint64_t seed : {1u, 2u, 3u}) {
    AudioClip below = perturb_band(stego, params, 0.45 * params.delta, seed);
    try {
      if (!(extract(below, params) == payload)) {
        detail = "0.45*delta noise corrupted the payload";
        return false;
      }
    } catch (const Error&) {
      detail = "0.45*delta noise broke extraction entirely";
      return false;
    }
  }

  size_t detected = 0, silent_wrong = 0;
  for (uint64_t seed : {11u, 12u, 13u}) {
    AudioClip above = perturb_band(stego, params, 0.60 * params.delta, seed);
    try {
      WatermarkPayload decoded = extract(above, params);
      if (!(decoded == payload))
        silent_wrong++;
    } catch (const Error&) {
      detected++;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "0.45d bit-exact on 3 seeds; 0.60d detected %zu/3, silently wrong %zu (must be 0)",
                detected, silent_wrong);
  detail = buf;
  return silent_wrong == 0 && detected >= 1;
}

// ---------------------------------------------------------------- 10
bool wiener_gain(std::string& detail) {
  const size_t n = 16384;
  AudioClip clean;
  clean.sample_rate = 8000;
  clean.samples = oracle::sine(400.0, 0.3, 8000, n);

  oracle::TestRng rng(1010);
  AudioClip noise;
  noise.sample_rate = 8000;
  noise.samples.resize(n);
  const double noise_amp = 0.3 * std::sqrt(1.5); // variance matches the sine power
  for (double& v : noise.samples)
    v = noise_amp * rng.signed_unit();

  AudioClip noisy = clean;
  for (size_t i = 0; i < n; i++)
    noisy.samples[i] += noise.samples[i];

  const double in_snr = snr(clean, noisy).db;
  AudioClip denoised = wiener_denoise(noisy, noise, FrameSpec{});
  const double out_snr = snr(clean, denoised).db;

  AudioClip silence;
  silence.sample_rate = 8000;
  silence.samples.assign(2048, 0.0);
  AudioClip same = wiener_denoise(noisy, silence, FrameSpec{});
  double worst = 0.0;
  for (size_t i = 0; i < n; i++)
    worst = std::max(worst, std::fabs(same.samples[i] - noisy.samples[i]));

  char buf[160];
  std::snprintf(buf, sizeof buf, "SNR %.2f -> %.2f dB (gain %.2f >= 6), identity err %.2e (<=1e-6)",
                in_snr, out_snr, out_snr - in_snr, worst);
  detail = buf;
  return (out_snr - in_snr >= 6.0) && approx_zero(in_snr, 1.0) && worst <= 1e-6;
}

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"dft-oracle-equivalence", dft_oracle},
      {"vad-corpus-accuracy", vad_accuracy},
      {"zcr-law", zcr_law},
      {"pitch-accuracy", pitch_accuracy},
      {"log-normalization", normalization},
      {"cmvn-affine-invariance", cmvn_invariance},
      {"capacity-fit", capacity_fit},
      {"end-to-end-roundtrip", end_to_end},
      {"qim-robustness-floor", qim_robustness},
      {"wiener-gain", wiener_gain},
  };

  size_t failed = 0;
  for (size_t i = 0; i < criteria.size(); i++) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2zu %-24s %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                detail.c_str());
    if (!ok)
      failed++;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
