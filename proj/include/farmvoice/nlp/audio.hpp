#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace fv::nlp {

enum class AudioContainer { Wav, Ogg, Unknown };

/// Sniffs the container from its magic bytes ("RIFF....WAVE", "OggS").
AudioContainer detect_container(std::span<const std::uint8_t> bytes) noexcept;

struct WavInfo {
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  bool floating_point = false;
  std::size_t frames = 0;
};

struct Loudness {
  WavInfo info;
  double rms = 0.0;  // over all samples, full scale = 1.0
};

/// RMS of a little-endian RIFF/WAVE file holding integer PCM (8, 16, 24 or
/// 32 bit) or IEEE float (32 bit) samples, including WAVE_FORMAT_EXTENSIBLE.
/// Throws Error{ParseError} for anything else.
Loudness wav_loudness(std::span<const std::uint8_t> bytes);

/// Builds a 16-bit PCM WAV file; used by tests and fixture generation.
std::vector<std::uint8_t> make_wav_pcm16(std::span<const std::int16_t> samples,
                                         std::uint32_t sample_rate, std::uint16_t channels = 1);

}  // namespace fv::nlp
