#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>

#include "lcc/codec.hpp"
#include "lcc/color.hpp"
#include "lcc/error.hpp"
#include "lcc/synth.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using lcc::Hsb;
using lcc::Rgb8;
using Cx = std::complex<double>;
namespace oracle = lcc::oracle;

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

void expect_hsb(const Hsb& got, double h, double s, double b, double tol = 1e-15) {
  EXPECT_NEAR(got.hue, h, tol);
  EXPECT_NEAR(got.saturation, s, tol);
  EXPECT_NEAR(got.brightness, b, tol);
}

TEST(ComplexToHsb, BreakpointIsFullWhite) { expect_hsb(lcc::complex_to_hsb({1.0, 0.0}), 0, 1, 1); }

TEST(ComplexToHsb, BelowUnitAmplitudeDimsBrightness) {
  expect_hsb(lcc::complex_to_hsb(std::polar(1.0 / kE, kPi)), 0.5, 1.0, 0.5);
}

TEST(ComplexToHsb, AboveUnitAmplitudeDesaturates) {
  expect_hsb(lcc::complex_to_hsb(std::polar(kE, kPi / 2)), 0.25, 0.5, 1.0);
}

TEST(ComplexToHsb, ZeroIsBlackWithHueZero) { expect_hsb(lcc::complex_to_hsb({0.0, 0.0}), 0, 1, 0); }

TEST(ComplexToHsb, NegativeAnglesWrapIntoUnitInterval) {
  const Hsb p = lcc::complex_to_hsb(std::polar(1.0, -kPi / 2));
  EXPECT_NEAR(p.hue, 0.75, 1e-15);
  // Smallest negative angle must not produce hue == 1.
  const Hsb q = lcc::complex_to_hsb({1.0, -1e-300});
  EXPECT_GE(q.hue, 0.0);
  EXPECT_LT(q.hue, 1.0);
}

TEST(ComplexToHsb, NonFiniteInputIsAnError) {
  EXPECT_THROW(lcc::complex_to_hsb({NAN, 0.0}), lcc::Error);
  EXPECT_THROW(lcc::complex_to_hsb({0.0, INFINITY}), lcc::Error);
}

TEST(HsbToComplex, InvertsTheExamples) {
  EXPECT_EQ(lcc::hsb_to_complex({0.0, 1.0, 1.0}), Cx(1.0, 0.0));
  const Cx c = lcc::hsb_to_complex({0.5, 1.0, 0.5});
  EXPECT_NEAR(c.real(), -1.0 / kE, 1e-15);
  EXPECT_NEAR(c.imag(), 0.0, 1e-15);
  EXPECT_EQ(lcc::hsb_to_complex({0.3, 1.0, 0.0}), Cx(0.0, 0.0));
}

TEST(HsbToComplex, RejectsUnreachableColors) {
  try {
    lcc::hsb_to_complex({0.1, 0.9, 0.9});
    FAIL();
  } catch (const lcc::Error& e) {
    EXPECT_STREQ(e.what(), "unreachable color");
  }
  // Zero saturation would need infinite amplitude.
  EXPECT_THROW(lcc::hsb_to_complex({0.0, 0.0, 1.0}), lcc::Error);
  EXPECT_THROW(lcc::hsb_to_complex({1.0, 1.0, 1.0}), lcc::Error);
}

TEST(ColorMap, RoundTripsRandomValuesToMachinePrecision) {
  std::mt19937_64 gen(29);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    // Log-uniform amplitude across 24 decades so both branches are exercised.
    const double amp = std::pow(10.0, oracle::uniform(gen, -12.0, 12.0));
    const Cx c = std::polar(amp, oracle::uniform(gen, -kPi, kPi));
    const Cx back = lcc::hsb_to_complex(lcc::complex_to_hsb(c));
    worst = std::max(worst, std::abs(back - c) / std::abs(c));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(ColorMap, ContinuousAtTheBreakpoint) {
  for (double eps : {1e-3, 1e-6, 1e-9, 1e-12}) {
    const Hsb below = lcc::complex_to_hsb({1.0 - eps, 0.0});
    const Hsb above = lcc::complex_to_hsb({1.0 + eps, 0.0});
    EXPECT_EQ(below.saturation, 1.0);
    EXPECT_EQ(above.brightness, 1.0);
    EXPECT_NEAR(below.brightness, 1.0, 2 * eps);
    EXPECT_NEAR(above.saturation, 1.0, 2 * eps);
  }
  const Hsb at = lcc::complex_to_hsb({1.0, 0.0});
  EXPECT_EQ(at.saturation, 1.0);
  EXPECT_EQ(at.brightness, 1.0);
}

TEST(ColorMap, BrightnessIncreasesAndSaturationDecreasesWithAmplitude) {
  double prev_b = 0.0;
  for (int i = 1; i <= 2000; ++i) {
    const double a = static_cast<double>(i) / 2000.0;
    const double b = lcc::complex_to_hsb({a, 0.0}).brightness;
    EXPECT_GT(b, prev_b);
    prev_b = b;
  }
  double prev_s = 1.0 + 1e-9;
  for (int i = 0; i <= 2000; ++i) {
    const double a = 1.0 + i * 0.05;
    const double s = lcc::complex_to_hsb({a, 0.0}).saturation;
    EXPECT_LT(s, prev_s);
    prev_s = s;
  }
}

TEST(ColorMap, HueIsEquivariantUnderRotation) {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 10000; ++i) {
    const Cx c = std::polar(std::pow(10.0, oracle::uniform(gen, -4, 4)),
                            oracle::uniform(gen, -kPi, kPi));
    const double theta = oracle::uniform(gen, -10.0, 10.0);
    const Hsb p = lcc::complex_to_hsb(c);
    const Hsb q = lcc::complex_to_hsb(c * std::polar(1.0, theta));
    EXPECT_NEAR(oracle::hue_step(p.hue + theta / (2 * kPi), q.hue), 0.0, 1e-12);
    EXPECT_NEAR(q.saturation, p.saturation, 1e-12);
    EXPECT_NEAR(q.brightness, p.brightness, 1e-12);
  }
}

TEST(HsbToRgb, HexagonAnchors) {
  EXPECT_EQ(lcc::hsb_to_rgb({0.0, 1.0, 1.0}), (Rgb8{255, 0, 0}));
  EXPECT_EQ(lcc::hsb_to_rgb({1.0 / 3.0, 1.0, 1.0}), (Rgb8{0, 255, 0}));
  EXPECT_EQ(lcc::hsb_to_rgb({2.0 / 3.0, 1.0, 1.0}), (Rgb8{0, 0, 255}));
  EXPECT_EQ(lcc::hsb_to_rgb({0.5, 1.0, 0.5}), (Rgb8{0, 128, 128}));
  EXPECT_EQ(lcc::hsb_to_rgb({0.0, 0.0, 1.0}), (Rgb8{255, 255, 255}));
}

TEST(HsbToRgb, ClampsOutOfRangeAndReportsIt) {
  bool clamped = false;
  EXPECT_EQ(lcc::hsb_to_rgb({1.25, 1.0, 1.0}, clamped), (Rgb8{128, 255, 0}));
  EXPECT_TRUE(clamped);
  EXPECT_EQ(lcc::hsb_to_rgb({0.0, 1.0, 2.0}, clamped), (Rgb8{255, 0, 0}));
  EXPECT_TRUE(clamped);
  lcc::hsb_to_rgb({0.5, 0.5, 0.5}, clamped);
  EXPECT_FALSE(clamped);
}

TEST(RgbToHsb, QuantizationRoundTripStaysWithinOneStep) {
  std::mt19937_64 gen(37);
  for (int i = 0; i < 20000; ++i) {
    // Only colors the forward map can reach: s == 1 or b == 1.
    Hsb p{oracle::uniform(gen, 0.0, 1.0), 1.0, 1.0};
    if (gen() & 1) {
      p.brightness = oracle::uniform(gen, 0.05, 1.0);
    } else {
      p.saturation = oracle::uniform(gen, 0.05, 1.0);
    }
    const Rgb8 q = lcc::hsb_to_rgb(p);
    const Hsb back = lcc::rgb_to_hsb(q);
    EXPECT_LE(std::abs(back.brightness - p.brightness), 0.5 / 255 + 1e-12);
    EXPECT_LE(std::abs(back.saturation - p.saturation), 1.0 / 255 + 1e-12);
    // Hue resolution is one code step over the six sectors of the chroma range.
    const int chroma = std::max({q.r, q.g, q.b}) - std::min({q.r, q.g, q.b});
    ASSERT_GT(chroma, 0);
    EXPECT_LE(std::abs(oracle::hue_step(p.hue, back.hue)), 1.0 / (6.0 * chroma) + 1e-12);
    if (chroma == 255) {
      EXPECT_LE(std::abs(oracle::hue_step(p.hue, back.hue)), 1.0 / 255);
    }
  }
}

TEST(RgbToHsb, BlackAndGrays) {
  const Hsb black = lcc::rgb_to_hsb({0, 0, 0});
  EXPECT_EQ(black.brightness, 0.0);
  EXPECT_EQ(black.saturation, 1.0);
  const Hsb gray = lcc::rgb_to_hsb({100, 100, 100});
  EXPECT_EQ(gray.saturation, 0.0);
  EXPECT_NEAR(gray.brightness, 100.0 / 255.0, 1e-15);
}

TEST(RenderColumn, ZerosAreBlack) {
  const std::vector<Cx> zeros(1025);
  for (const Rgb8& px : lcc::render_column(zeros)) EXPECT_EQ(px, (Rgb8{0, 0, 0}));
}

TEST(RenderColumn, BinCenteredToneLightsOnePixel) {
  const auto x = oracle::cosine(2048, 12.0, 2048.0);
  const auto col = lcc::render_column(lcc::forward_transform(x, 1.0));
  ASSERT_EQ(col.size(), 1025u);
  for (std::size_t k = 0; k < col.size(); ++k) {
    const int hi = std::max({col[k].r, col[k].g, col[k].b});
    const int lo = std::min({col[k].r, col[k].g, col[k].b});
    if (k == 12) {
      EXPECT_EQ(hi, 255);
      EXPECT_EQ(lo, 0);
    } else {
      // Below 1e-9 the log brightness is under 1/21.7.
      EXPECT_LE(hi, 12) << "k=" << k;
    }
  }
}

std::vector<std::uint8_t> fm_first_column_bytes() {
  const auto audio = lcc::fm_tone(256.0, 0.10, 2.0, 2.0, 44100);
  const auto spec = lcc::encode(audio, lcc::FrameSpec{}, 1.0).spectrogram;
  std::vector<std::uint8_t> bytes;
  for (const Rgb8& px : lcc::render_column(spec.columns.front())) {
    bytes.insert(bytes.end(), {px.r, px.g, px.b});
  }
  return bytes;
}

TEST(RenderColumn, FmToneFirstColumnMatchesGolden) {
  const auto path = lcc::testing::fixture_path("fm_tone_first_column.rgb");
  const auto bytes = fm_first_column_bytes();
  if (lcc::testing::regenerate_fixtures()) lcc::write_file_bytes(path, bytes);
  ASSERT_TRUE(std::filesystem::exists(path)) << "missing golden " << path;
  EXPECT_EQ(lcc::read_file_bytes(path), bytes);
}

}  // namespace
