#include "tripletctl/shortcut.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "tripletctl/errors.hpp"

namespace tripletctl {

namespace {

constexpr double kPi = std::numbers::pi;

void require_unit_interval(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0)) {
    std::ostringstream msg;
    msg << what << ": normalized time " << s << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

bool near_endpoint(double s) { return s < kEndpointEpsilon || s > 1.0 - kEndpointEpsilon; }

// Time derivatives of theta and E0 at normalized time s.
struct PathDerivatives {
  double theta;
  double theta_dot;
  double theta_ddot;
  double e0;
  double e0_dot;
};

PathDerivatives path_at(double s, const ShortcutSpec& spec) {
  const Jet th = theta(s, spec.kind);
  const Jet en = envelope(s, spec.amplitude);
  const double T = spec.duration;
  return {th.value, th.d1 / T, th.d2 / (T * T), en.value, en.d1 / T};
}

}  // namespace

const char* to_string(ShortcutKind kind) {
  return kind == ShortcutKind::kSymmetric ? "symmetric" : "nonsymmetric";
}

ShortcutKind parse_shortcut_kind(std::string_view text) {
  if (text == "symmetric") return ShortcutKind::kSymmetric;
  if (text == "nonsymmetric") return ShortcutKind::kNonsymmetric;
  throw ValidationError("unknown shortcut kind '" + std::string(text) + "'");
}

void ShortcutSpec::validate() const {
  if (!std::isfinite(amplitude) || amplitude <= 0.0) {
    throw ValidationError("shortcut amplitude e must be positive");
  }
  if (!std::isfinite(duration) || duration <= 0.0) {
    throw ValidationError("shortcut duration T must be positive");
  }
}

Jet theta(double s, ShortcutKind kind) {
  require_unit_interval(s, "theta");
  if (kind == ShortcutKind::kSymmetric) {
    return {kPi * s * s * (3.0 - 2.0 * s), 6.0 * kPi * s * (1.0 - s), 6.0 * kPi * (1.0 - 2.0 * s)};
  }
  return {kPi * s * s * (3.0 * s * s - 8.0 * s + 6.0),
          12.0 * kPi * s * (s - 1.0) * (s - 1.0),
          12.0 * kPi * (3.0 * s - 1.0) * (s - 1.0)};
}

Jet envelope(double s, double amplitude) {
  require_unit_interval(s, "envelope");
  return {amplitude * s * (1.0 - s), amplitude * (1.0 - 2.0 * s), -2.0 * amplitude};
}

GaugeAngle gauge_angle(double s, const ShortcutSpec& spec) {
  spec.validate();
  require_unit_interval(s, "gauge_angle");
  if (near_endpoint(s)) return {kPi / 2.0, 0.0};

  const PathDerivatives p = path_at(s, spec);
  // b = atan2(y, x) with y = theta_dot >= 0, x = E0 sin(theta) >= 0.
  const double y = p.theta_dot;
  const double x = p.e0 * std::sin(p.theta);
  const double y_dot = p.theta_ddot;
  const double x_dot = p.e0_dot * std::sin(p.theta) + p.e0 * std::cos(p.theta) * p.theta_dot;
  const double r2 = x * x + y * y;
  return {std::atan2(y, x), (x * y_dot - y * x_dot) / r2};
}

ControlSample modified_controls(double t, const ShortcutSpec& spec) {
  spec.validate();
  const double T = spec.duration;
  if (!(t >= 0.0 && t <= T)) {
    throw DomainError("modified_controls: t = " + std::to_string(t) + " outside [0, T]");
  }
  const double s = t / T;
  if (near_endpoint(s)) return {t, 0.0, 0.0};

  const PathDerivatives p = path_at(s, spec);
  const double sn = std::sin(p.theta);
  const double cs = std::cos(p.theta);
  const double denom = p.e0 * p.e0 * sn * sn + p.theta_dot * p.theta_dot;
  const double numer = p.e0 * p.e0 * p.e0 * sn * sn * cs + p.e0_dot * p.theta_dot * sn +
                       p.e0 * (2.0 * p.theta_dot * p.theta_dot * cs - p.theta_ddot * sn);
  return {t, numer / denom, std::sqrt(denom / 2.0)};
}

ControlSample short_time_controls(double s, const ShortcutSpec& spec) {
  spec.validate();
  if (!(s > 0.0 && s < 1.0)) {
    throw DomainError("short_time_controls: s = " + std::to_string(s) + " must lie in (0, 1)");
  }
  const Jet th = theta(s, spec.kind);
  const Jet en = envelope(s, spec.amplitude);
  const double sn = std::sin(th.value);
  const double delta =
      (en.d1 * th.d1 * sn + en.value * (2.0 * th.d1 * th.d1 * std::cos(th.value) - th.d2 * sn)) /
      (th.d1 * th.d1);
  const double omega = th.d1 / (std::numbers::sqrt2 * spec.duration);
  return {s * spec.duration, delta, omega};
}

double short_time_fidelity_limit() {
  const double sn = std::sin(kPi / std::numbers::sqrt2);
  return 0.5 * sn * sn;
}

ControlWaveform shortcut_waveform(const ShortcutSpec& spec) {
  spec.validate();
  return ControlWaveform::parametric(spec.duration, [spec](double t) {
    const ControlSample c = modified_controls(t, spec);
    return std::pair{c.delta(), c.omega()};
  });
}

double shortcut_fidelity(const ShortcutSpec& spec, const PropagateOptions& options) {
  return fidelity(evolve(shortcut_waveform(spec), TripletAmplitudes::ground().vector(), options));
}

std::vector<FidelityCurvePoint> tqd_fidelity_curve(double amplitude, const std::vector<double>& durations,
                                                   const PropagateOptions& options) {
  for (std::size_t i = 0; i < durations.size(); ++i) {
    if (!(durations[i] > 0.0) || (i > 0 && !(durations[i] > durations[i - 1]))) {
      throw ValidationError("fidelity curve durations must be positive and ascending");
    }
  }
  std::vector<FidelityCurvePoint> curve;
  curve.reserve(durations.size());
  for (double T : durations) {
    try {
      curve.push_back({T,
                       shortcut_fidelity({ShortcutKind::kSymmetric, amplitude, T}, options),
                       shortcut_fidelity({ShortcutKind::kNonsymmetric, amplitude, T}, options)});
    } catch (const NonUnitaryDrift& e) {
      std::ostringstream msg;
      msg << "T = " << T << ": " << e.what();
      throw NonUnitaryDrift(msg.str());
    }
  }
  return curve;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) {
    throw ValidationError("log_spaced needs 0 < lo < hi and at least two points");
  }
  std::vector<double> grid(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

}  // namespace tripletctl
