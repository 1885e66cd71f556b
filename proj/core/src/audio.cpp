#include "lcc/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "lcc/error.hpp"

namespace lcc {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

[[noreturn]] void malformed(const std::string& why) {
  throw Error(Errc::malformed, "malformed WAV: " + why);
}

}  // namespace

void AudioBuffer::validate() const {
  if (sample_rate == 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  for (double s : samples) {
    if (!std::isfinite(s)) throw Error(Errc::invalid_argument, "non-finite sample");
  }
}

std::int16_t double_to_pcm16(double v) {
  const double scaled = std::round(v * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io, "short write to " + path.string());
}

AudioBuffer parse_wav(const std::vector<std::uint8_t>& bytes, WavReadInfo* info) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    malformed("missing RIFF/WAVE header");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) malformed("short fmt chunk");
      format = get_u16(chunk + 8);
      channels = get_u16(chunk + 10);
      rate = get_u32(chunk + 12);
      bits = get_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) malformed("short extensible fmt chunk");
        format = get_u16(chunk + 8 + 24);  // first two bytes of the subformat GUID
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      // Streams written before the length was known often carry a bogus size.
      data_size = std::min<std::size_t>(size, available);
      break;
    }
    pos = body + size + (size & 1);
  }

  if (channels == 0 || rate == 0) malformed("missing fmt chunk");
  if (data == nullptr) malformed("missing data chunk");

  SampleFormat sf;
  if (format == kFormatPcm && bits == 16) {
    sf = SampleFormat::pcm16;
  } else if (format == kFormatFloat && bits == 32) {
    sf = SampleFormat::float32;
  } else {
    throw Error(Errc::malformed, "unsupported WAV encoding (format " + std::to_string(format) +
                                     ", " + std::to_string(bits) + " bits)");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = data_size / frame_bytes;

  AudioBuffer audio;
  audio.sample_rate = rate;
  audio.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + i * frame_bytes + c * bytes_per_sample;
      if (sf == SampleFormat::pcm16) {
        acc += pcm16_to_double(static_cast<std::int16_t>(get_u16(p)));
      } else {
        const std::uint32_t raw = get_u32(p);
        float f;
        std::memcpy(&f, &raw, sizeof f);
        acc += f;
      }
    }
    audio.samples[i] = acc / channels;
  }

  if (info) {
    info->channels = channels;
    info->format = sf;
    info->mixed_down = channels > 1;
  }
  audio.validate();
  return audio;
}

AudioBuffer read_wav(const std::filesystem::path& path, WavReadInfo* info) {
  return parse_wav(read_file_bytes(path), info);
}

std::vector<std::uint8_t> serialize_wav(const AudioBuffer& audio, SampleFormat format) {
  const std::uint16_t bits = format == SampleFormat::pcm16 ? 16 : 32;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(audio.samples.size() * (bits / 8));

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, format == SampleFormat::pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, audio.sample_rate);
  put_u32(out, audio.sample_rate * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : audio.samples) {
    if (format == SampleFormat::pcm16) {
      put_u16(out, static_cast<std::uint16_t>(double_to_pcm16(s)));
    } else {
      const float f = static_cast<float>(s);
      std::uint32_t raw;
      std::memcpy(&raw, &f, sizeof raw);
      put_u32(out, raw);
    }
  }
  return out;
}

void write_wav(const AudioBuffer& audio, const std::filesystem::path& path, SampleFormat format) {
  write_file_bytes(path, serialize_wav(audio, format));
}

}  // namespace lcc
