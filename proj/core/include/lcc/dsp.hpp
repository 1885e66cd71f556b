#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lcc/audio.hpp"

namespace lcc {

using Complex = std::complex<double>;
using ComplexColumn = std::vector<Complex>;

enum class Window : std::uint8_t {
  rectangular = 0,
  hann = 1,  // periodic, scaled by 2 so a bin-centered sine keeps A = 1
};

const char* window_name(Window w);
Window parse_window(const std::string& name);

struct FrameSpec {
  std::size_t fft_size = 2048;
  std::size_t hop = 2048;
  Window window = Window::rectangular;

  void validate() const;
  std::size_t bins() const { return fft_size / 2 + 1; }
  bool invertible() const { return window == Window::rectangular && hop == fft_size; }
};

bool is_power_of_two(std::size_t n);

/// Spacing between coefficient centers, fs / N.
double bin_spacing(const FrameSpec& spec, std::uint32_t sample_rate);
double bin_center(std::size_t bin, const FrameSpec& spec, std::uint32_t sample_rate);

/// ceil(length / hop)
std::size_t frame_count(std::size_t length, const FrameSpec& spec);

/// Frame k covers samples [k*hop, k*hop + N); the tail is zero-padded and the
/// window is applied.
std::vector<std::vector<double>> frame_signal(const AudioBuffer& audio, const FrameSpec& spec);

/// Frame k only; `frame_signal` is this applied for every k.
std::vector<double> extract_frame(std::span<const double> samples, std::size_t index,
                                  const FrameSpec& spec);

void apply_window(std::span<double> frame, Window window);

// Real-input DFT with the amplitude convention used throughout the library:
// interior bins are scaled by 2 / (N * a_ref), DC and Nyquist by 1 / (N * a_ref),
// so a full-scale sine at a bin center has magnitude 1.
ComplexColumn forward_transform(std::span<const double> frame, double a_ref);

// Left inverse of forward_transform. DC and Nyquist must be real to within 1e-6.
std::vector<double> inverse_transform(std::span<const Complex> coeffs, double a_ref);

/// Single-frequency projection (Goertzel), scaled like an interior bin.
Complex project_frequency(std::span<const double> frame, double freq_hz,
                          std::uint32_t sample_rate, double a_ref);

/// Rotates column `index` so that its phases are referenced to t = 0 instead of
/// the frame start. Identity whenever hop == N.
ComplexColumn time_referenced(std::span<const Complex> column, std::size_t index,
                              const FrameSpec& spec);

struct ComplexSpectrogram {
  std::vector<ComplexColumn> columns;
  FrameSpec frame_spec;
  std::uint32_t sample_rate = 44100;
  double a_ref = 1.0;
  std::uint64_t original_length = 0;

  void validate() const;
  std::size_t bins() const { return frame_spec.bins(); }
  /// Columns whose frame lies entirely inside the original signal.
  std::size_t full_columns() const;
  double slice_seconds() const {
    return static_cast<double>(frame_spec.hop) / sample_rate;
  }
};

ComplexSpectrogram analyze(const AudioBuffer& audio, const FrameSpec& spec, double a_ref);

}  // namespace lcc
