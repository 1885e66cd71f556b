#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace lcc {

/// Hue in phase cycles, saturation and brightness in [0, 1].
struct Hsb {
  double hue = 0.0;
  double saturation = 1.0;
  double brightness = 0.0;
};

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

// Log complex color. The amplitude A = |c| is expected to be normalized so
// that A = 1 is full scale:
//   hue        = arg(c) / 2pi,               arg in [0, 2pi)
//   saturation = 1 for A <= 1, 1 / (1 + ln A) above
//   brightness = 1 / (1 - ln A) for A <= 1, 1 above
// c = 0 maps to black with hue 0.
Hsb complex_to_hsb(std::complex<double> c);

/// Exact inverse of complex_to_hsb. Throws for saturation < 1 and brightness < 1
/// together ("unreachable color").
std::complex<double> hsb_to_complex(const Hsb& p);

/// Hexagonal HSV -> RGB; hue 0 red, 1/3 green, 2/3 blue. Out-of-range inputs
/// are clamped (hue wrapped) and `clamped` is set.
Rgb8 hsb_to_rgb(const Hsb& p, bool& clamped);
Rgb8 hsb_to_rgb(const Hsb& p);
Hsb rgb_to_hsb(Rgb8 q);

/// One pixel per coefficient, index 0 = lowest frequency (drawn at the bottom).
std::vector<Rgb8> render_column(std::span<const std::complex<double>> coeffs);

}  // namespace lcc
