#include <gtest/gtest.h>

#include <cmath>

#include "lcc/image.hpp"
#include "lcc/phase.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

namespace oracle = lcc::oracle;

TEST(BeatSchematic, DefaultSeedMatchesGoldenPng) {
  const auto png = lcc::encode_png(lcc::render_beat_schematic().image);
  const auto path = lcc::testing::fixture_path("beat_schematic_seed1.png");
  if (lcc::testing::regenerate_fixtures()) lcc::write_file_bytes(path, png);
  ASSERT_TRUE(std::filesystem::exists(path)) << "missing golden " << path;
  EXPECT_EQ(lcc::read_file_bytes(path), png);
}

TEST(BeatSchematic, DimensionsFollowSlicesAndSpans) {
  const auto s = lcc::render_beat_schematic();
  EXPECT_EQ(s.image.width, 128u);
  EXPECT_EQ(s.image.height, 100u);
  EXPECT_EQ(s.lines.size(), 100u);
  lcc::BeatSchematicOptions opts;
  opts.slices = 64;
  opts.coeff_spans = 2;
  opts.lines_per_coeff = 10;
  const auto small = lcc::render_beat_schematic(opts);
  EXPECT_EQ(small.image.width, 64u);
  EXPECT_EQ(small.image.height, 20u);
}

TEST(BeatSchematic, SameSeedSameImageDifferentSeedDifferentImage) {
  lcc::BeatSchematicOptions a, b;
  b.seed = 2;
  EXPECT_EQ(lcc::render_beat_schematic(a).image.pixels, lcc::render_beat_schematic(a).image.pixels);
  EXPECT_NE(lcc::render_beat_schematic(a).image.pixels, lcc::render_beat_schematic(b).image.pixels);
}

TEST(BeatSchematic, LayoutSplitsColorAboveAndGrayBelow) {
  const auto s = lcc::render_beat_schematic();
  // Center marker sits on a coefficient center, with span edges 1/8 of the height away.
  EXPECT_EQ(s.center_row, 49u);
  EXPECT_TRUE(s.lines[s.center_row].at_center);
  EXPECT_TRUE(s.lines[s.center_row - 25].at_center);
  EXPECT_TRUE(s.lines[s.center_row + 25].at_center);
  for (std::size_t row = 0; row < 100; ++row) {
    EXPECT_EQ(s.lines[row].color, row < 62) << row;
    EXPECT_EQ(s.lines[row].row, row);
    EXPECT_LE(std::abs(s.lines[row].offset_hz), 0.5 * 44100.0 / 2048.0);
    if (row == s.center_row) continue;
    for (std::size_t x = 0; x < 128; ++x) {
      const auto px = s.image.at(x, row);
      if (!s.lines[row].color) {
        EXPECT_TRUE(px.r == px.g && px.g == px.b) << row;
      } else {
        EXPECT_EQ(std::max({px.r, px.g, px.b}), 255);
        EXPECT_EQ(std::min({px.r, px.g, px.b}), 0);
      }
    }
  }
  for (std::size_t x = 0; x < 128; ++x) {
    if ((x / 4) % 2 == 0) {
      EXPECT_EQ(s.image.at(x, s.center_row), (lcc::Rgb8{255, 255, 255}));
    }
  }
  EXPECT_EQ(s.image.metadata.at("kind"), "beat_schematic");
  EXPECT_EQ(s.image.metadata.at("seed"), "1");
}

TEST(BeatSchematic, CenterLinesKeepConstantHue) {
  const auto s = lcc::render_beat_schematic();
  std::size_t checked = 0;
  for (const auto& line : s.lines) {
    if (!line.at_center || !line.color) continue;
    EXPECT_EQ(line.offset_hz, 0.0);
    std::optional<lcc::Rgb8> first;
    for (std::size_t x = 0; x < 128; ++x) {
      if (line.row == s.center_row && (x / 4) % 2 == 0) continue;  // dash pixels
      const auto px = s.image.at(x, line.row);
      if (!first) first = px;
      EXPECT_EQ(px, *first);
    }
    ++checked;
  }
  EXPECT_GE(checked, 2u);
}

TEST(BeatSchematic, HueCyclesMatchLineOffset) {
  const auto s = lcc::render_beat_schematic();
  for (const auto& line : s.lines) {
    if (!line.color || line.row == s.center_row) continue;
    std::vector<double> hues;
    for (std::size_t x = 0; x < 128; ++x) hues.push_back(lcc::rgb_to_hsb(s.image.at(x, line.row)).hue);
    EXPECT_NEAR(oracle::cycle_count(hues), line.offset_hz, 0.5) << "row " << line.row;
  }
}

TEST(BeatSchematic, GrayLinesBeatAtTheirOffset) {
  const auto s = lcc::render_beat_schematic();
  for (const auto& line : s.lines) {
    if (line.color || line.at_center || std::abs(line.offset_hz) < 2.0) continue;
    // |cos(theta/2)| has one dark null per cycle of theta.
    int nulls = 0;
    for (std::size_t x = 1; x + 1 < 128; ++x) {
      const int v0 = s.image.at(x - 1, line.row).r, v1 = s.image.at(x, line.row).r,
                v2 = s.image.at(x + 1, line.row).r;
      nulls += v1 < v0 && v1 <= v2;
    }
    EXPECT_NEAR(nulls, std::abs(line.offset_hz), 1.5) << "row " << line.row;
  }
}

TEST(BeatSchematic, RejectsDegenerateOptions) {
  lcc::BeatSchematicOptions opts;
  opts.slices = 1;
  EXPECT_THROW(lcc::render_beat_schematic(opts), std::exception);
}

}  // namespace
