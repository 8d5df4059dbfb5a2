#include "farmvoice/nlp/audio.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "farmvoice/core/error.hpp"

namespace fv::nlp {

namespace {

std::uint32_t u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag(std::span<const std::uint8_t> b, std::size_t at, const char* four) {
  return at + 4 <= b.size() && std::memcmp(b.data() + at, four, 4) == 0;
}

[[noreturn]] void bad(const std::string& why) {
  throw Error(ErrorCode::ParseError, "invalid WAV: " + why);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

AudioContainer detect_container(std::span<const std::uint8_t> bytes) noexcept {
  if (tag(bytes, 0, "RIFF") && tag(bytes, 8, "WAVE")) return AudioContainer::Wav;
  if (tag(bytes, 0, "OggS")) return AudioContainer::Ogg;
  return AudioContainer::Unknown;
}

Loudness wav_loudness(std::span<const std::uint8_t> b) {
  if (detect_container(b) != AudioContainer::Wav) bad("missing RIFF/WAVE header");

  std::uint16_t format = 0;
  WavInfo info;
  std::span<const std::uint8_t> data;
  bool have_fmt = false;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::uint32_t size = u32(b, pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = b.size() - body;
    if (tag(b, pos, "fmt ")) {
      if (size < 16 || size > available) bad("truncated fmt chunk");
      format = u16(b, body);
      info.channels = u16(b, body + 2);
      info.sample_rate = u32(b, body + 4);
      info.bits_per_sample = u16(b, body + 14);
      if (format == kFormatExtensible) {
        if (size < 40) bad("truncated extensible fmt chunk");
        format = u16(b, body + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (tag(b, pos, "data")) {
      // Streaming writers sometimes leave the size unset; take what exists.
      data = b.subspan(body, std::min<std::size_t>(size, available));
      have_data = true;
      break;
    }
    if (size > available) bad("chunk overruns file");
    pos = body + size + (size & 1);
  }
  if (!have_fmt) bad("no fmt chunk");
  if (!have_data) bad("no data chunk");
  if (info.channels == 0) bad("zero channels");

  info.floating_point = format == kFormatFloat;
  if (format != kFormatPcm && format != kFormatFloat) bad("unsupported sample format " + std::to_string(format));
  if (info.floating_point && info.bits_per_sample != 32) bad("only 32-bit float supported");
  if (!info.floating_point && info.bits_per_sample != 8 && info.bits_per_sample != 16 &&
      info.bits_per_sample != 24 && info.bits_per_sample != 32) {
    bad("unsupported bit depth " + std::to_string(info.bits_per_sample));
  }

  const std::size_t width = info.bits_per_sample / 8;
  const std::size_t samples = data.size() / width;
  info.frames = samples / info.channels;

  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t at = i * width;
    double v = 0.0;
    if (info.floating_point) {
      float f;
      const std::uint32_t raw = u32(data, at);
      std::memcpy(&f, &raw, sizeof f);
      v = std::isfinite(f) ? std::fmax(-1.0, std::fmin(1.0, f)) : 0.0;
    } else if (width == 1) {
      v = (static_cast<int>(data[at]) - 128) / 128.0;  // 8-bit PCM is unsigned
    } else if (width == 2) {
      v = static_cast<std::int16_t>(u16(data, at)) / 32768.0;
    } else if (width == 3) {
      std::int32_t s = data[at] | (data[at + 1] << 8) | (data[at + 2] << 16);
      if (s & 0x800000) s -= 0x1000000;
      v = s / 8388608.0;
    } else {
      v = static_cast<std::int32_t>(u32(data, at)) / 2147483648.0;
    }
    sum += v * v;
  }
  Loudness out;
  out.info = info;
  out.rms = samples ? std::sqrt(sum / static_cast<double>(samples)) : 0.0;
  return out;
}

std::vector<std::uint8_t> make_wav_pcm16(std::span<const std::int16_t> samples,
                                         std::uint32_t sample_rate, std::uint16_t channels) {
  std::vector<std::uint8_t> out;
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  auto put16 = [&](std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  };
  auto put_tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  const std::uint32_t data_size = static_cast<std::uint32_t>(samples.size() * 2);
  put_tag("RIFF");
  put32(36 + data_size);
  put_tag("WAVE");
  put_tag("fmt ");
  put32(16);
  put16(kFormatPcm);
  put16(channels);
  put32(sample_rate);
  put32(sample_rate * channels * 2);
  put16(static_cast<std::uint16_t>(channels * 2));
  put16(16);
  put_tag("data");
  put32(data_size);
  for (std::int16_t s : samples) put16(static_cast<std::uint16_t>(s));
  return out;
}

}  // namespace fv::nlp
