#pragma once

#include <stdexcept>
#include <string>

namespace spmk {

enum class Err {
  // audio i/o
  MalformedContainer,
  UnsupportedFormat,
  IoFailure,
  // dsp
  NonPowerOfTwoLength,
  // vad
  FrameTooShort,
  NoFrames,
  NoVoicedSpeech,
  // pitch
  BandEmpty,
  // normalize
  SilentInput,
  DegenerateCoefficient,
  // watermark
  PayloadTooLarge,
  BadMagic,
  CrcMismatch,
  TruncatedStego,
  ClampViolation,
  // metrics
  LengthMismatch,
  InvalidReference,
  // synth
  AliasedHarmonics,
  // bad parameter values anywhere
  InvalidArgument,
};

const char* err_name(Err code);

class Error : public std::runtime_error {
public:
  Error(Err code, const std::string& message)
      : std::runtime_error(std::string(err_name(code)) + ": " + message), code_(code) {}

  Err code() const { return code_; }

private:
  Err code_;
};

inline const char* err_name(Err code) {
  switch (code) {
    case Err::MalformedContainer:    return "MalformedContainer";
    case Err::UnsupportedFormat:     return "UnsupportedFormat";
    case Err::IoFailure:             return "IoFailure";
    case Err::NonPowerOfTwoLength:   return "NonPowerOfTwoLength";
    case Err::FrameTooShort:         return "FrameTooShort";
    case Err::NoFrames:              return "NoFrames";
    case Err::NoVoicedSpeech:        return "NoVoicedSpeech";
    case Err::BandEmpty:             return "BandEmpty";
    case Err::SilentInput:           return "SilentInput";
    case Err::DegenerateCoefficient: return "DegenerateCoefficient";
    case Err::PayloadTooLarge:       return "PayloadTooLarge";
    case Err::BadMagic:              return "BadMagic";
    case Err::CrcMismatch:           return "CrcMismatch";
    case Err::TruncatedStego:        return "TruncatedStego";
    case Err::ClampViolation:        return "ClampViolation";
    case Err::LengthMismatch:        return "LengthMismatch";
    case Err::InvalidReference:      return "InvalidReference";
    case Err::AliasedHarmonics:      return "AliasedHarmonics";
    case Err::InvalidArgument:       return "InvalidArgument";
  }
  return "UnknownError";
}

} // namespace spmk
