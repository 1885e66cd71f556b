#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lcc {

/// Mono PCM signal, full scale = [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  std::uint32_t sample_rate = 44100;

  /// Throws Errc::invalid_argument on a zero rate or non-finite samples.
  void validate() const;
  double duration_seconds() const {
    return sample_rate ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

enum class SampleFormat { pcm16, float32 };

struct WavReadInfo {
  std::uint16_t channels = 1;
  SampleFormat format = SampleFormat::pcm16;
  bool mixed_down = false;
};

// RIFF/WAVE reader for 16-bit integer and 32-bit float PCM (including
// WAVE_FORMAT_EXTENSIBLE). Multichannel input is averaged to mono and
// `info->mixed_down` is set.
AudioBuffer read_wav(const std::filesystem::path& path, WavReadInfo* info = nullptr);
AudioBuffer parse_wav(const std::vector<std::uint8_t>& bytes, WavReadInfo* info = nullptr);

std::vector<std::uint8_t> serialize_wav(const AudioBuffer& audio,
                                        SampleFormat format = SampleFormat::float32);
void write_wav(const AudioBuffer& audio, const std::filesystem::path& path,
               SampleFormat format = SampleFormat::float32);

/// s16 conversion used by the WAV reader and the stream service.
inline double pcm16_to_double(std::int16_t v) { return static_cast<double>(v) / 32768.0; }
std::int16_t double_to_pcm16(double v);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace lcc
