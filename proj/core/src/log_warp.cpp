#include "lcc/log_warp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lcc/error.hpp"

namespace lcc {
namespace {

constexpr double kBlackLineFraction = 1e-3;

}  // namespace

const char* mode_name(InterpolationMode m) {
  return m == InterpolationMode::polar ? "polar" : "rect";
}

InterpolationMode parse_mode(const std::string& name) {
  if (name == "rect" || name == "rectangular") return InterpolationMode::rectangular;
  if (name == "polar") return InterpolationMode::polar;
  throw Error(Errc::invalid_argument, "unknown interpolation mode '" + name + "'");
}

double LogAxisSpec::row_frequency(std::size_t row) const {
  if (row + 1 >= rows) return f_max;
  const double u = static_cast<double>(row) / static_cast<double>(rows - 1);
  return f_min * std::exp(u * std::log(f_max / f_min));
}

LogAxisSpec build_log_axis(double f_min, double f_max, std::size_t rows, const FrameSpec& spec,
                           std::uint32_t sample_rate) {
  spec.validate();
  if (sample_rate == 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  if (rows < 2) throw Error(Errc::invalid_argument, "log axis needs at least two rows");
  const double spacing = bin_spacing(spec, sample_rate);
  const double nyquist = 0.5 * sample_rate;
  if (!(f_min > 0.0) || !(f_max > f_min)) {
    throw Error(Errc::invalid_argument, "log axis needs 0 < f_min < f_max");
  }
  if (f_max > nyquist) throw Error(Errc::invalid_argument, "f_max above Nyquist");
  if (f_min < spacing * (1.0 - 1e-12)) {
    throw Error(Errc::invalid_argument, "below first coefficient center");
  }

  LogAxisSpec axis;
  axis.f_min = f_min;
  axis.f_max = f_max;
  axis.rows = rows;
  axis.frame_spec = spec;
  axis.sample_rate = sample_rate;

  const double rows_per_neper = static_cast<double>(rows - 1) / std::log(f_max / f_min);
  // Neighboring bins at f are about rows_per_neper * spacing / f rows apart.
  axis.switchover_hz = rows_per_neper * spacing;

  const std::size_t last_bin = spec.fft_size / 2;
  axis.plan.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    RowPlan& row = axis.plan[r];
    row.frequency = axis.row_frequency(r);
    const double pos = std::max(row.frequency / spacing, 1.0);
    std::size_t k = static_cast<std::size_t>(std::floor(pos));
    double t = pos - static_cast<double>(k);
    if (k >= last_bin) {
      k = last_bin;
      t = 0.0;
    }

    const bool spread = k < last_bin &&
                        rows_per_neper * std::log(static_cast<double>(k + 1) / k) > 1.0;
    if (spread) {
      row.kind = RowPlan::Kind::interpolate;
      row.bin = k;
      row.fraction = t;
    } else {
      row.kind = RowPlan::Kind::undersample;
      // Nearest in log distance: pick k when pos^2 <= k(k+1); ties go low.
      const bool lower = k == last_bin || pos * pos <= static_cast<double>(k) * (k + 1);
      row.bin = lower ? k : k + 1;
      row.fraction = 0.0;
    }
  }
  return axis;
}

Complex interpolate(Complex lo, Complex hi, double t, InterpolationMode mode) {
  if (t == 0.0) return lo;
  if (mode == InterpolationMode::rectangular) return (1.0 - t) * lo + t * hi;

  const double a = std::arg(lo);
  double delta = std::remainder(std::arg(hi) - a, 2.0 * std::numbers::pi);
  if (delta <= -std::numbers::pi) delta = std::numbers::pi;
  const double magnitude = (1.0 - t) * std::abs(lo) + t * std::abs(hi);
  return std::polar(magnitude, a + t * delta);
}

ComplexColumn warp_column(std::span<const Complex> coeffs, const LogAxisSpec& axis,
                          InterpolationMode mode) {
  if (coeffs.size() != axis.frame_spec.bins()) {
    throw Error(Errc::invalid_argument, "column length does not match the axis frame spec");
  }
  ComplexColumn out(axis.rows);
  for (std::size_t r = 0; r < axis.rows; ++r) {
    const RowPlan& row = axis.plan[r];
    if (row.kind == RowPlan::Kind::undersample) {
      out[r] = coeffs[row.bin];
    } else {
      out[r] = interpolate(coeffs[row.bin], coeffs[row.bin + 1], row.fraction, mode);
    }
  }
  return out;
}

std::vector<std::size_t> locate_black_lines(std::span<const Complex> coeffs,
                                            const LogAxisSpec& axis) {
  if (coeffs.size() != axis.frame_spec.bins()) {
    throw Error(Errc::invalid_argument, "column length does not match the axis frame spec");
  }
  double peak = 0.0;
  for (const auto& c : coeffs) peak = std::max(peak, std::abs(c));
  const double threshold = kBlackLineFraction * peak;
  const double spacing = bin_spacing(axis.frame_spec, axis.sample_rate);

  std::vector<std::size_t> found;
  std::size_t r = 0;
  while (r < axis.rows) {
    const RowPlan& row = axis.plan[r];
    if (row.kind != RowPlan::Kind::interpolate) {
      ++r;
      continue;
    }
    // Rows [r, end) share the bin pair (k, k + 1).
    const std::size_t k = row.bin;
    std::size_t end = r + 1;
    while (end < axis.rows && axis.plan[end].kind == RowPlan::Kind::interpolate &&
           axis.plan[end].bin == k) {
      ++end;
    }

    const Complex a = coeffs[k];
    const Complex b = coeffs[k + 1];
    const double dot = (a * std::conj(b)).real();
    const double gap = std::norm(a - b);
    if (dot < 0.0 && gap > 0.0) {
      const double t = (std::norm(a) - dot) / gap;
      const double minimum = std::abs((1.0 - t) * a + t * b);
      if (minimum < threshold) {
        const double target = std::log((static_cast<double>(k) + t) * spacing);
        std::size_t best = r;
        double best_distance = std::abs(std::log(axis.plan[r].frequency) - target);
        for (std::size_t i = r + 1; i < end; ++i) {
          const double d = std::abs(std::log(axis.plan[i].frequency) - target);
          if (d < best_distance) {
            best = i;
            best_distance = d;
          }
        }
        found.push_back(best);
      }
    }
    r = end;
  }
  return found;
}

}  // namespace lcc
