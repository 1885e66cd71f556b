#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "lcc/color.hpp"
#include "lcc/error.hpp"
#include "lcc/phase.hpp"

namespace lcc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// mt19937_64 output is fixed by the standard; the distributions are not, so the
// uniform draw is done by hand to keep the image identical across toolchains.
double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double wrap01(double x) {
  const double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

BeatSchematic render_beat_schematic(const BeatSchematicOptions& opts) {
  if (opts.slices < 2 || opts.coeff_spans < 1 || opts.lines_per_coeff < 1 ||
      !(opts.spacing_hz > 0.0)) {
    throw Error(Errc::invalid_argument, "degenerate schematic dimensions");
  }
  const std::size_t width = opts.slices;
  const std::size_t height = opts.coeff_spans * opts.lines_per_coeff;

  BeatSchematic out;
  out.image = ColorImage(width, height);
  out.lines.resize(height);

  std::mt19937_64 gen(opts.seed);
  for (std::size_t span = 0; span < opts.coeff_spans; ++span) {
    std::vector<double> positions{0.0};
    for (std::size_t j = 1; j < opts.lines_per_coeff; ++j) positions.push_back(uniform01(gen));
    std::sort(positions.begin() + 1, positions.end());

    for (std::size_t j = 0; j < opts.lines_per_coeff; ++j) {
      const std::size_t from_bottom = span * opts.lines_per_coeff + j;
      SchematicLine& line = out.lines[height - 1 - from_bottom];
      line.row = height - 1 - from_bottom;
      const double u = positions[j];
      line.offset_hz = (u <= 0.5 ? u : u - 1.0) * opts.spacing_hz;
      line.phase = kTwoPi * uniform01(gen);
      line.at_center = j == 0;
      // Top 5/8 of the height: hue beats. Bottom 3/8: amplitude beats.
      line.color = 8.0 * (static_cast<double>(line.row) + 0.5) < 5.0 * static_cast<double>(height);
    }
  }

  for (const SchematicLine& line : out.lines) {
    for (std::size_t x = 0; x < width; ++x) {
      const double t = static_cast<double>(x) / static_cast<double>(width);  // nominal 1 s
      const double theta = line.phase + kTwoPi * line.offset_hz * t;
      Rgb8 px;
      if (line.color) {
        px = hsb_to_rgb(Hsb{wrap01(theta / kTwoPi), 1.0, 1.0});
      } else {
        // Equal-amplitude beat against a reference sitting on the center.
        const double amplitude = std::abs(std::cos(0.5 * theta));
        const std::uint8_t v = hsb_to_rgb(complex_to_hsb({amplitude, 0.0})).r;
        px = {v, v, v};
      }
      out.image.at(x, line.row) = px;
    }
  }

  // Dashed marker on the middle coefficient center.
  out.center_row = height - 1 - (opts.coeff_spans / 2) * opts.lines_per_coeff;
  for (std::size_t x = 0; x < width; ++x) {
    if ((x / 4) % 2 == 0) out.image.at(x, out.center_row) = {255, 255, 255};
  }

  char spacing[32];
  std::snprintf(spacing, sizeof spacing, "%.17g", opts.spacing_hz);
  Metadata& m = out.image.metadata;
  m["kind"] = "beat_schematic";
  m["coeff_spans"] = std::to_string(opts.coeff_spans);
  m["lines_per_coeff"] = std::to_string(opts.lines_per_coeff);
  m["seed"] = std::to_string(opts.seed);
  m["slices"] = std::to_string(opts.slices);
  m["spacing_hz"] = spacing;
  return out;
}

}  // namespace lcc
