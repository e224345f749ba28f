#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "tripletctl/model.hpp"

namespace tripletctl {

enum class WaveformKind { kSampledGrid, kPiecewiseConstant, kParametric };

const char* to_string(WaveformKind kind);

// Control pair (delta(t), omega(t)) on [0, T]. Immutable after construction;
// copies share the underlying data.
class ControlWaveform {
 public:
  // Returns (delta, omega) at time t.
  using Evaluator = std::function<std::pair<double, double>(double)>;

  static ControlWaveform constant(double duration, double delta, double omega);

  // Equal-width segments; segment k covers [k T/n, (k+1) T/n).
  static ControlWaveform piecewise_constant(double duration, std::vector<double> deltas,
                                            std::vector<double> omegas);

  // Linear interpolation between nodes. times must start at 0 and increase strictly.
  static ControlWaveform sampled(std::vector<double> times, std::vector<double> deltas,
                                 std::vector<double> omegas);

  static ControlWaveform parametric(double duration, Evaluator evaluator);

  double duration() const { return duration_; }
  WaveformKind kind() const { return kind_; }

  // Throws DomainError for t outside [0, T] (a relative slack of 1e-12 is clamped).
  ControlSample at(double t) const;

  // Piecewise-constant accessors; empty spans for other kinds.
  std::size_t segment_count() const;
  std::span<const double> segment_deltas() const;
  std::span<const double> segment_omegas() const;
  double segment_width() const;

  // Maxima over the segment values, sample nodes, or `probes` uniform points.
  double max_abs_omega(std::size_t probes = 1000) const;
  double max_abs_delta(std::size_t probes = 1000) const;

  // t -> T - t.
  ControlWaveform reversed() const;

 private:
  struct Data {
    std::vector<double> times;
    std::vector<double> deltas;
    std::vector<double> omegas;
    Evaluator evaluator;
  };

  ControlWaveform(double duration, WaveformKind kind, std::shared_ptr<const Data> data)
      : duration_(duration), kind_(kind), data_(std::move(data)) {}

  std::pair<double, double> raw_at(double t) const;

  double duration_ = 0.0;
  WaveformKind kind_ = WaveformKind::kParametric;
  std::shared_ptr<const Data> data_;
};

}  // namespace tripletctl
