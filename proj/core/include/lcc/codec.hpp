#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lcc/dsp.hpp"
#include "lcc/image.hpp"
#include "lcc/log_warp.hpp"

namespace lcc {

// CSPEC container, little-endian, packed:
//   "CSPC" | version u16 | sample_rate u32 | fft_size u32 | hop u32 | window u8 |
//   original_length u64 | a_ref f32 | frame_count u32 |
//   frame_count * (N/2+1) * (re f32, im f32)
struct CspecFile {
  static constexpr std::uint16_t kVersion = 1;
  static constexpr std::size_t kHeaderSize = 35;

  std::uint16_t version = kVersion;
  std::uint32_t sample_rate = 44100;
  std::uint32_t fft_size = 2048;
  std::uint32_t hop = 2048;
  Window window = Window::rectangular;
  std::uint64_t original_length = 0;
  float a_ref = 1.0f;
  std::uint32_t frame_count = 0;
  std::vector<std::complex<float>> payload;  // frame-major, bins ascending

  FrameSpec frame_spec() const;
  void validate() const;
};

std::vector<std::uint8_t> serialize_cspec(const CspecFile& file);
CspecFile parse_cspec(std::span<const std::uint8_t> bytes);
void write_cspec(const CspecFile& file, const std::filesystem::path& path);
CspecFile read_cspec(const std::filesystem::path& path);

CspecFile to_cspec(const ComplexSpectrogram& spec);
ComplexSpectrogram from_cspec(const CspecFile& file);

struct EncodeResult {
  ComplexSpectrogram spectrogram;
  CspecFile file;
};

/// a_ref is rounded to f32 first so the container reproduces the spectrogram.
EncodeResult encode(const AudioBuffer& audio, const FrameSpec& spec, double a_ref = 1.0);

/// Refuses anything but a rectangular window with hop == N.
AudioBuffer decode(const CspecFile& file);

enum class AxisKind { linear, log };

struct RenderOptions {
  AxisKind axis = AxisKind::linear;
  InterpolationMode mode = InterpolationMode::rectangular;
  double f_min = 27.5;
  double f_max = 4186.0;
  std::size_t rows = 512;
};

// Renders one column (time-referenced, optionally log-warped) bottom-to-top.
// `axis` must be non-null for a log render.
std::vector<Rgb8> render_spectrogram_column(std::span<const Complex> column, std::size_t index,
                                            const FrameSpec& spec, const RenderOptions& opts,
                                            const LogAxisSpec* axis);

/// Width = frame count; height = N/2+1 (linear) or rows (log). Metadata carries
/// everything needed to decode a linear image.
ColorImage render_image(const ComplexSpectrogram& spec, const RenderOptions& opts);

struct ImageDecodeResult {
  AudioBuffer audio;
  double estimated_snr_db = 0.0;    // from the 8-bit quantization model
  std::size_t unreachable_pixels = 0;  // snapped to saturation 1
};

// Lossy inverse of render_image for linear-axis images with invertible framing.
// Throws Errc::not_invertible for unknown provenance, log axes or overlapped frames.
ImageDecodeResult decode_image(const ColorImage& img);

}  // namespace lcc
