#include "tripletctl/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tripletctl/errors.hpp"

namespace tripletctl {

namespace {

void require_duration(double duration) {
  if (!std::isfinite(duration) || duration <= 0.0) {
    throw ValidationError("waveform duration must be positive and finite, got " +
                          std::to_string(duration));
  }
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + " contains non-finite values");
  }
}

}  // namespace

const char* to_string(WaveformKind kind) {
  switch (kind) {
    case WaveformKind::kSampledGrid: return "sampled-grid";
    case WaveformKind::kPiecewiseConstant: return "piecewise-constant";
    case WaveformKind::kParametric: return "parametric";
  }
  return "unknown";
}

ControlWaveform ControlWaveform::constant(double duration, double delta, double omega) {
  return piecewise_constant(duration, {delta}, {omega});
}

ControlWaveform ControlWaveform::piecewise_constant(double duration, std::vector<double> deltas,
                                                    std::vector<double> omegas) {
  require_duration(duration);
  if (deltas.empty() || deltas.size() != omegas.size()) {
    throw ValidationError("piecewise waveform needs equal, non-zero numbers of delta and omega values");
  }
  require_finite(deltas, "delta segments");
  require_finite(omegas, "omega segments");
  auto data = std::make_shared<Data>();
  data->deltas = std::move(deltas);
  data->omegas = std::move(omegas);
  return {duration, WaveformKind::kPiecewiseConstant, std::move(data)};
}

ControlWaveform ControlWaveform::sampled(std::vector<double> times, std::vector<double> deltas,
                                         std::vector<double> omegas) {
  if (times.size() < 2 || times.size() != deltas.size() || times.size() != omegas.size()) {
    throw ValidationError("sampled waveform needs >= 2 nodes with matching delta/omega columns");
  }
  require_finite(times, "times");
  require_finite(deltas, "delta samples");
  require_finite(omegas, "omega samples");
  if (times.front() != 0.0) throw ValidationError("sampled waveform must start at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ValidationError("sampled waveform times must increase strictly");
  }
  const double duration = times.back();
  auto data = std::make_shared<Data>();
  data->times = std::move(times);
  data->deltas = std::move(deltas);
  data->omegas = std::move(omegas);
  return {duration, WaveformKind::kSampledGrid, std::move(data)};
}

ControlWaveform ControlWaveform::parametric(double duration, Evaluator evaluator) {
  require_duration(duration);
  if (!evaluator) throw ValidationError("parametric waveform needs an evaluator");
  auto data = std::make_shared<Data>();
  data->evaluator = std::move(evaluator);
  return {duration, WaveformKind::kParametric, std::move(data)};
}

std::pair<double, double> ControlWaveform::raw_at(double t) const {
  switch (kind_) {
    case WaveformKind::kPiecewiseConstant: {
      const std::size_t n = data_->omegas.size();
      auto k = static_cast<std::size_t>(std::floor(t / duration_ * static_cast<double>(n)));
      k = std::min(k, n - 1);
      return {data_->deltas[k], data_->omegas[k]};
    }
    case WaveformKind::kSampledGrid: {
      const auto& ts = data_->times;
      auto it = std::upper_bound(ts.begin(), ts.end(), t);
      std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - ts.begin()), ts.size() - 1);
      std::size_t lo = hi - 1;
      const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
      return {data_->deltas[lo] + w * (data_->deltas[hi] - data_->deltas[lo]),
              data_->omegas[lo] + w * (data_->omegas[hi] - data_->omegas[lo])};
    }
    case WaveformKind::kParametric:
      return data_->evaluator(t);
  }
  return {0.0, 0.0};
}

ControlSample ControlWaveform::at(double t) const {
  const double slack = 1e-12 * std::max(1.0, duration_);
  if (!(t >= -slack && t <= duration_ + slack)) {
    throw DomainError("waveform evaluated outside [0, T]: t = " + std::to_string(t));
  }
  t = std::clamp(t, 0.0, duration_);
  const auto [delta, omega] = raw_at(t);
  return {t, delta, omega};
}

std::size_t ControlWaveform::segment_count() const {
  return kind_ == WaveformKind::kPiecewiseConstant ? data_->omegas.size() : 0;
}

std::span<const double> ControlWaveform::segment_deltas() const {
  if (kind_ != WaveformKind::kPiecewiseConstant) return {};
  return data_->deltas;
}

std::span<const double> ControlWaveform::segment_omegas() const {
  if (kind_ != WaveformKind::kPiecewiseConstant) return {};
  return data_->omegas;
}

double ControlWaveform::segment_width() const {
  const std::size_t n = segment_count();
  return n == 0 ? 0.0 : duration_ / static_cast<double>(n);
}

double ControlWaveform::max_abs_omega(std::size_t probes) const {
  if (kind_ != WaveformKind::kParametric) {
    double m = 0.0;
    for (double v : data_->omegas) m = std::max(m, std::abs(v));
    return m;
  }
  double m = 0.0;
  for (std::size_t i = 0; i <= probes; ++i) {
    m = std::max(m, std::abs(at(duration_ * static_cast<double>(i) / static_cast<double>(probes)).omega()));
  }
  return m;
}

double ControlWaveform::max_abs_delta(std::size_t probes) const {
  if (kind_ != WaveformKind::kParametric) {
    double m = 0.0;
    for (double v : data_->deltas) m = std::max(m, std::abs(v));
    return m;
  }
  double m = 0.0;
  for (std::size_t i = 0; i <= probes; ++i) {
    m = std::max(m, std::abs(at(duration_ * static_cast<double>(i) / static_cast<double>(probes)).delta()));
  }
  return m;
}

ControlWaveform ControlWaveform::reversed() const {
  switch (kind_) {
    case WaveformKind::kPiecewiseConstant:
      return piecewise_constant(duration_, {data_->deltas.rbegin(), data_->deltas.rend()},
                                {data_->omegas.rbegin(), data_->omegas.rend()});
    case WaveformKind::kSampledGrid: {
      std::vector<double> ts, ds, ws;
      for (std::size_t i = data_->times.size(); i-- > 0;) {
        ts.push_back(duration_ - data_->times[i]);
        ds.push_back(data_->deltas[i]);
        ws.push_back(data_->omegas[i]);
      }
      ts.front() = 0.0;
      return sampled(std::move(ts), std::move(ds), std::move(ws));
    }
    case WaveformKind::kParametric: {
      auto self = *this;
      const double T = duration_;
      return parametric(T, [self, T](double t) { return self.raw_at(T - t); });
    }
  }
  return *this;
}

}  // namespace tripletctl
