#pragma once

// Transitionless quantum driving for the |dd> <-> |psi+> transition, re-expressed
// in the (S_z, S_x) control form through a z-rotation gauge angle b(t).
//
// Reference path: theta(s) with s = t/T takes 0 -> pi with vanishing slope at
// both ends; energy envelope E0(s) = e s (1 - s). Modified controls:
//   delta'(t) = E0 cos(theta) - db/dt
//   omega'(t) = sqrt((E0^2 sin^2(theta) + (dtheta/dt)^2) / 2)
// with tan b = (dtheta/dt) / (E0 sin theta).

#include <string_view>
#include <vector>

#include "tripletctl/model.hpp"
#include "tripletctl/propagator.hpp"
#include "tripletctl/waveform.hpp"

namespace tripletctl {

enum class ShortcutKind { kSymmetric, kNonsymmetric };

const char* to_string(ShortcutKind kind);
ShortcutKind parse_shortcut_kind(std::string_view text);

inline constexpr double kDefaultEnvelopeAmplitude = 0.1;
// Closer than this to s = 0 or 1 the analytic endpoint limits are used.
inline constexpr double kEndpointEpsilon = 1e-9;

struct ShortcutSpec {
  ShortcutKind kind = ShortcutKind::kSymmetric;
  double amplitude = kDefaultEnvelopeAmplitude;  // e
  double duration = 10.0;                        // T

  void validate() const;
};

// Value and first two derivatives with respect to normalized time s.
struct Jet {
  double value;
  double d1;
  double d2;
};

struct GaugeAngle {
  double b;
  double bdot;  // d/dt, not d/ds
};

// Polynomial reference angle; symmetric pi s^2 (3 - 2s), nonsymmetric
// pi s^2 (3 s^2 - 8 s + 6). DomainError outside [0, 1].
Jet theta(double s, ShortcutKind kind);

// E0 = e s (1 - s); d2 is the constant -2e.
Jet envelope(double s, double amplitude);

GaugeAngle gauge_angle(double s, const ShortcutSpec& spec);

// Modified (delta', omega') at physical time t in [0, T].
ControlSample modified_controls(double t, const ShortcutSpec& spec);

// T -> 0 limit at interior s: delta stays finite and T-independent, omega =
// theta'(s) / (sqrt2 T) with T taken from spec. DomainError at s in {0, 1}.
ControlSample short_time_controls(double s, const ShortcutSpec& spec);

// 1/2 sin^2(pi / sqrt2): fidelity of the shortcut as T -> 0.
double short_time_fidelity_limit();

ControlWaveform shortcut_waveform(const ShortcutSpec& spec);

// |c2(T)|^2 starting from |dd>.
double shortcut_fidelity(const ShortcutSpec& spec, const PropagateOptions& options = {});

struct FidelityCurvePoint {
  double duration;
  double symmetric;
  double nonsymmetric;
};

// Shortcut fidelity for both kinds over an ascending grid of durations.
std::vector<FidelityCurvePoint> tqd_fidelity_curve(double amplitude, const std::vector<double>& durations,
                                                   const PropagateOptions& options = {});

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

}  // namespace tripletctl
