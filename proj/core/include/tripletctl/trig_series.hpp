#pragma once

#include <span>
#include <vector>

#include "tripletctl/propagator.hpp"
#include "tripletctl/waveform.hpp"

namespace tripletctl {

// How t enters cos(k t): directly in units of 1/xi, or rescaled so that the
// first harmonic spans the whole duration (cos(2 pi k t / T)).
enum class SeriesTimeConvention { kXiUnits, kNormalizedPeriod };

const char* to_string(SeriesTimeConvention convention);

// x0 + sum_{k=1..p} (x_{2k-1} cos(k t) + x_{2k} sin(k t)), t in units of 1/xi.
class TrigSeries {
 public:
  TrigSeries(int harmonics, std::vector<double> omega, std::vector<double> delta);

  // Zero series with p harmonics.
  static TrigSeries zero(int harmonics);

  // Reference p = 3 optimum for T = 2.5.
  static TrigSeries table_one();

  static std::size_t coefficient_count(int harmonics) { return 2 * static_cast<std::size_t>(harmonics) + 1; }

  // Basis value phi_j(t): 1, cos t, sin t, cos 2t, sin 2t, ...
  static double basis(std::size_t j, double t);
  static double evaluate(std::span<const double> coefficients, double t);

  int harmonics() const { return harmonics_; }
  const std::vector<double>& omega_coefficients() const { return omega_; }
  const std::vector<double>& delta_coefficients() const { return delta_; }

  double omega_at(double t) const { return evaluate(omega_, t); }
  double delta_at(double t) const { return evaluate(delta_, t); }

  // Same functions, more harmonics (extra coefficients zero).
  TrigSeries padded(int harmonics) const;

  ControlWaveform waveform(double duration,
                           SeriesTimeConvention convention = SeriesTimeConvention::kXiUnits) const;

 private:
  int harmonics_;
  std::vector<double> omega_;
  std::vector<double> delta_;
};

// Fidelity of the series controls over [0, T], starting from |dd>.
double evaluate_series(const TrigSeries& series, double duration, const PropagateOptions& options = {},
                       SeriesTimeConvention convention = SeriesTimeConvention::kXiUnits);

}  // namespace tripletctl
