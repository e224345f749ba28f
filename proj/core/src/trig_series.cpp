#include "tripletctl/trig_series.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tripletctl/errors.hpp"

namespace tripletctl {

TrigSeries::TrigSeries(int harmonics, std::vector<double> omega, std::vector<double> delta)
    : harmonics_(harmonics), omega_(std::move(omega)), delta_(std::move(delta)) {
  if (harmonics < 0) throw ValidationError("harmonic count must be non-negative");
  const std::size_t n = coefficient_count(harmonics);
  if (omega_.size() != n || delta_.size() != n) {
    throw ValidationError("trigonometric series with p = " + std::to_string(harmonics) + " needs " +
                          std::to_string(n) + " coefficients per control");
  }
  for (double v : omega_) {
    if (!std::isfinite(v)) throw ValidationError("series coefficients must be finite");
  }
  for (double v : delta_) {
    if (!std::isfinite(v)) throw ValidationError("series coefficients must be finite");
  }
}

TrigSeries TrigSeries::zero(int harmonics) {
  const std::size_t n = coefficient_count(harmonics);
  return {harmonics, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

TrigSeries TrigSeries::table_one() {
  return {3,
          {4.88177, -3.02932, -5.61925, -1.64576, 2.79904, 0.784017, -0.0724018},
          {-8.67328, 0.800026, 14.4413, 8.33812, -1.43694, -1.41904, -3.07217}};
}

double TrigSeries::basis(std::size_t j, double t) {
  if (j == 0) return 1.0;
  const double k = static_cast<double>((j + 1) / 2);
  return (j % 2 == 1) ? std::cos(k * t) : std::sin(k * t);
}

double TrigSeries::evaluate(std::span<const double> coefficients, double t) {
  double v = 0.0;
  for (std::size_t j = 0; j < coefficients.size(); ++j) v += coefficients[j] * basis(j, t);
  return v;
}

TrigSeries TrigSeries::padded(int harmonics) const {
  if (harmonics < harmonics_) throw ValidationError("cannot pad a series to fewer harmonics");
  auto a = omega_;
  auto b = delta_;
  a.resize(coefficient_count(harmonics), 0.0);
  b.resize(coefficient_count(harmonics), 0.0);
  return {harmonics, std::move(a), std::move(b)};
}

ControlWaveform TrigSeries::waveform(double duration, SeriesTimeConvention convention) const {
  const double scale =
      convention == SeriesTimeConvention::kXiUnits ? 1.0 : 2.0 * std::numbers::pi / duration;
  return ControlWaveform::parametric(duration, [series = *this, scale](double t) {
    return std::pair{series.delta_at(scale * t), series.omega_at(scale * t)};
  });
}

const char* to_string(SeriesTimeConvention convention) {
  return convention == SeriesTimeConvention::kXiUnits ? "cos(k t), t in 1/xi" : "cos(2 pi k t / T)";
}

double evaluate_series(const TrigSeries& series, double duration, const PropagateOptions& options,
                       SeriesTimeConvention convention) {
  return fidelity(evolve(series.waveform(duration, convention), TripletAmplitudes::ground().vector(), options));
}

}  // namespace tripletctl
