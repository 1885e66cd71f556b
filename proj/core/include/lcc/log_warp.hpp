#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lcc/dsp.hpp"

namespace lcc {

enum class InterpolationMode { rectangular, polar };

const char* mode_name(InterpolationMode m);
InterpolationMode parse_mode(const std::string& name);  // "rect"/"rectangular"/"polar"

struct RowPlan {
  enum class Kind { interpolate, undersample };

  double frequency = 0.0;  // Hz
  Kind kind = Kind::undersample;
  std::size_t bin = 0;     // lower bin (interpolate) or nearest bin (undersample)
  double fraction = 0.0;   // t in [0, 1), interpolate only
};

struct LogAxisSpec {
  double f_min = 0.0;
  double f_max = 0.0;
  std::size_t rows = 0;
  FrameSpec frame_spec;
  std::uint32_t sample_rate = 44100;
  /// Frequency above which adjacent bins are at most one row apart.
  double switchover_hz = 0.0;
  std::vector<RowPlan> plan;  // row 0 = f_min

  double row_frequency(std::size_t row) const;
};

// Row r sits at f_min * (f_max / f_min)^(r / (R - 1)). A row interpolates
// between its bracketing bins when those bin centers land more than one row
// apart, otherwise it copies the bin nearest in log frequency (ties go low).
LogAxisSpec build_log_axis(double f_min, double f_max, std::size_t rows, const FrameSpec& spec,
                           std::uint32_t sample_rate);

ComplexColumn warp_column(std::span<const Complex> coeffs, const LogAxisSpec& axis,
                          InterpolationMode mode);

/// Complex lerp between two neighbors in the given mode. Polar mode follows the
/// shorter arc; an exact half-turn goes in the positive direction.
Complex interpolate(Complex lo, Complex hi, double t, InterpolationMode mode);

// Rows nearest to the zero crossings of rectangular interpolation: between
// adjacent bins of opposing phase, the segment minimum |(1-t)c_k + t c_k+1| is
// found analytically and reported when below 1e-3 of the column maximum.
std::vector<std::size_t> locate_black_lines(std::span<const Complex> coeffs,
                                            const LogAxisSpec& axis);

}  // namespace lcc
