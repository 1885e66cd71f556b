#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lcc/dsp.hpp"
#include "lcc/error.hpp"
#include "lcc/phase.hpp"
#include "lcc/synth.hpp"
#include "oracles.hpp"

namespace {

using lcc::BeatDirection;
using lcc::FrameSpec;
namespace oracle = lcc::oracle;

constexpr double kSpacing = 44100.0 / 2048.0;
constexpr double kPi = std::numbers::pi;

lcc::BeatMeasurement measure(double freq, std::size_t bin, double seconds = 1.0,
                             double phase = 0.0, const FrameSpec& spec = FrameSpec{}) {
  const auto audio = lcc::tone(freq, seconds, 44100, 0.8, phase);
  return lcc::estimate_offset(lcc::analyze(audio, spec, 1.0), bin);
}

TEST(EstimateOffset, ToneOnCenterHoldsHueConstant) {
  const auto m = measure(12 * kSpacing, 12);
  EXPECT_NEAR(m.offset_hz, 0.0, 0.05);
  EXPECT_EQ(m.direction, BeatDirection::constant);
  EXPECT_EQ(m.bin, 12u);
}

TEST(EstimateOffset, ToneAboveCenterRotatesRgb) {
  const auto m = measure(12 * kSpacing + 2.0, 12);
  EXPECT_NEAR(m.offset_hz, 2.0, 0.1);
  EXPECT_NEAR(m.cycles_per_second, 2.0, 0.1);
  EXPECT_EQ(m.direction, BeatDirection::rgb);
}

TEST(EstimateOffset, ToneBelowCenterRotatesRbg) {
  const auto m = measure(12 * kSpacing - 3.5, 12);
  EXPECT_NEAR(m.offset_hz, -3.5, 0.1);
  EXPECT_EQ(m.direction, BeatDirection::rbg);
}

TEST(EstimateOffset, BeatLawHoldsForRandomOffsets) {
  std::mt19937_64 gen(137);
  for (int i = 0; i < 50; ++i) {
    const std::size_t bin = 5 + gen() % 400;
    const double mag = oracle::uniform(gen, 0.5, 9.0);
    const double delta = (gen() & 1) ? mag : -mag;
    const auto m = measure(bin * kSpacing + delta, bin, 1.0, oracle::uniform(gen, 0, 2 * kPi));
    EXPECT_NEAR(m.offset_hz, delta, 0.1) << "bin " << bin << " delta " << delta;
    EXPECT_EQ(m.direction, delta > 0 ? BeatDirection::rgb : BeatDirection::rbg);
  }
}

TEST(EstimateOffset, PeriodHalvesWhenOffsetDoubles) {
  for (double delta : {0.8, 1.5, 2.25, 4.0}) {
    const double p1 = 1.0 / measure(40 * kSpacing + delta, 40, 2.0).cycles_per_second;
    const double p2 = 1.0 / measure(40 * kSpacing + 2 * delta, 40, 2.0).cycles_per_second;
    EXPECT_NEAR(p2 / p1, 0.5, 0.025) << delta;
  }
}

TEST(EstimateOffset, InitialPhaseBarelyMatters) {
  // The only phase dependence left is leakage from the negative-frequency image.
  const auto base = measure(30 * kSpacing + 1.7, 30, 1.0, 0.0);
  for (double phase : {0.5, 1.9, 3.0, -2.2}) {
    const auto m = measure(30 * kSpacing + 1.7, 30, 1.0, phase);
    EXPECT_NEAR(m.offset_hz, base.offset_hz, 1e-3);
    EXPECT_EQ(m.direction, base.direction);
  }
}

TEST(EstimateOffset, OverlappingFramesExtendTheUnwrapLimit) {
  // With H = N/4 the limit is fs / (2H) ~ 43 Hz.
  const FrameSpec spec{2048, 512};
  const auto m = measure(50 * kSpacing + 15.0, 50, 1.0, 0.0, spec);
  EXPECT_NEAR(m.offset_hz, 15.0, 0.1);
}

TEST(EstimateOffset, ErrorsOnShortWindowsAndSilentBins) {
  try {
    measure(12 * kSpacing, 12, 0.2);
    FAIL();
  } catch (const lcc::Error& e) {
    EXPECT_STREQ(e.what(), "window too short");
  }
  try {
    measure(12 * kSpacing, 300);
    FAIL();
  } catch (const lcc::Error& e) {
    EXPECT_STREQ(e.what(), "bin not excited");
  }
  EXPECT_THROW(measure(12 * kSpacing, 5000), lcc::Error);
}

TEST(PhaseDrift, SumsWrappedAdvances) {
  std::vector<lcc::Complex> series;
  for (int i = 0; i < 11; ++i) series.push_back(std::polar(1.0, 0.3 * i + 1.0 * i));
  // Remove the 1.0 rad expected advance: 0.3 rad per 0.1 s slice.
  EXPECT_NEAR(lcc::phase_drift_hz(series, 1.0, 0.1), 3.0 / (2 * kPi), 1e-12);
  EXPECT_THROW(lcc::phase_drift_hz(std::vector<lcc::Complex>(1), 0.0, 0.1), lcc::Error);
}

TEST(Direction, FollowsSignWithDeadBand) {
  EXPECT_EQ(lcc::direction_for(0.049), BeatDirection::constant);
  EXPECT_EQ(lcc::direction_for(-0.049), BeatDirection::constant);
  EXPECT_EQ(lcc::direction_for(0.05), BeatDirection::rgb);
  EXPECT_EQ(lcc::direction_for(-0.05), BeatDirection::rbg);
  EXPECT_STREQ(lcc::direction_name(BeatDirection::rgb), "RGB");
  EXPECT_STREQ(lcc::direction_name(BeatDirection::rbg), "RBG");
}

TEST(Notes, NamesAndFrequencies) {
  EXPECT_EQ(lcc::note_name(69), "A4");
  EXPECT_EQ(lcc::note_name(60), "C4");
  EXPECT_EQ(lcc::note_name(61), "C#4");
  EXPECT_EQ(lcc::note_name(21), "A0");
  EXPECT_EQ(lcc::note_name(108), "C8");
  EXPECT_EQ(lcc::parse_note("A4"), 69);
  EXPECT_EQ(lcc::parse_note("Bb3"), 58);
  EXPECT_EQ(lcc::parse_note("c#5"), 73);
  EXPECT_EQ(lcc::parse_note("A0"), 21);
  EXPECT_THROW(lcc::parse_note("H4"), lcc::Error);
  EXPECT_THROW(lcc::parse_note("A"), lcc::Error);
  EXPECT_THROW(lcc::parse_note("A4x"), lcc::Error);
  EXPECT_DOUBLE_EQ(lcc::note_frequency(69, 440.0), 440.0);
  EXPECT_NEAR(lcc::note_frequency(60, 440.0), 261.6255653, 1e-6);
  EXPECT_EQ(lcc::nearest_note(445.0, 440.0), 69);
  EXPECT_EQ(lcc::nearest_note(455.0, 440.0), 70);
  EXPECT_NEAR(lcc::cents_between(440.0 * std::pow(2.0, 5.0 / 1200.0), 440.0), 5.0, 1e-12);
}

}  // namespace
