#include "lcc/color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lcc/error.hpp"

namespace lcc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

Hsb complex_to_hsb(std::complex<double> c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    throw Error(Errc::invalid_argument, "non-finite coefficient");
  }
  const double amplitude = std::abs(c);
  if (amplitude == 0.0) return {0.0, 1.0, 0.0};

  double phi = std::atan2(c.imag(), c.real());
  if (phi < 0.0) phi += kTwoPi;
  double hue = phi / kTwoPi;
  if (hue >= 1.0) hue = 0.0;

  const double log_a = std::log(amplitude);
  if (amplitude <= 1.0) return {hue, 1.0, 1.0 / (1.0 - log_a)};
  return {hue, 1.0 / (1.0 + log_a), 1.0};
}

std::complex<double> hsb_to_complex(const Hsb& p) {
  if (!(p.hue >= 0.0 && p.hue < 1.0) || !(p.saturation >= 0.0 && p.saturation <= 1.0) ||
      !(p.brightness >= 0.0 && p.brightness <= 1.0)) {
    throw Error(Errc::invalid_argument, "color components out of range");
  }
  if (p.saturation < 1.0 && p.brightness < 1.0) {
    throw Error(Errc::invalid_argument, "unreachable color");
  }
  if (p.brightness == 0.0) return {0.0, 0.0};
  if (p.saturation == 0.0) throw Error(Errc::invalid_argument, "unreachable color");

  double amplitude = 1.0;
  if (p.brightness < 1.0) {
    amplitude = std::exp(1.0 - 1.0 / p.brightness);
  } else if (p.saturation < 1.0) {
    amplitude = std::exp(1.0 / p.saturation - 1.0);
  }
  return std::polar(amplitude, kTwoPi * p.hue);
}

Rgb8 hsb_to_rgb(const Hsb& in, bool& clamped) {
  Hsb p = in;
  clamped = false;
  if (!(p.hue >= 0.0 && p.hue < 1.0)) {
    p.hue = std::isfinite(p.hue) ? p.hue - std::floor(p.hue) : 0.0;
    if (p.hue >= 1.0) p.hue = 0.0;
    clamped = true;
  }
  const double s = std::clamp(std::isfinite(p.saturation) ? p.saturation : 0.0, 0.0, 1.0);
  const double v = std::clamp(std::isfinite(p.brightness) ? p.brightness : 0.0, 0.0, 1.0);
  if (s != p.saturation || v != p.brightness) clamped = true;

  const double h6 = p.hue * 6.0;
  const double sector = std::floor(h6);
  const double f = h6 - sector;
  const double lo = v * (1.0 - s);
  const double falling = v * (1.0 - s * f);
  const double rising = v * (1.0 - s * (1.0 - f));

  double r, g, b;
  switch (static_cast<int>(sector) % 6) {
    case 0: r = v; g = rising; b = lo; break;
    case 1: r = falling; g = v; b = lo; break;
    case 2: r = lo; g = v; b = rising; break;
    case 3: r = lo; g = falling; b = v; break;
    case 4: r = rising; g = lo; b = v; break;
    default: r = v; g = lo; b = falling; break;
  }
  return {quantize(r), quantize(g), quantize(b)};
}

Rgb8 hsb_to_rgb(const Hsb& p) {
  bool clamped;
  return hsb_to_rgb(p, clamped);
}

Hsb rgb_to_hsb(Rgb8 q) {
  const int r = q.r, g = q.g, b = q.b;
  const int hi = std::max({r, g, b});
  const int lo = std::min({r, g, b});
  if (hi == 0) return {0.0, 1.0, 0.0};

  const double chroma = hi - lo;
  Hsb out;
  out.brightness = hi / 255.0;
  out.saturation = chroma / hi;
  if (chroma == 0.0) return out;

  double h;
  if (hi == r) {
    h = (g - b) / chroma;
    if (h < 0.0) h += 6.0;
  } else if (hi == g) {
    h = (b - r) / chroma + 2.0;
  } else {
    h = (r - g) / chroma + 4.0;
  }
  out.hue = h / 6.0;
  if (out.hue >= 1.0) out.hue -= 1.0;
  return out;
}

std::vector<Rgb8> render_column(std::span<const std::complex<double>> coeffs) {
  std::vector<Rgb8> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) out.push_back(hsb_to_rgb(complex_to_hsb(c)));
  return out;
}

}  // namespace lcc
