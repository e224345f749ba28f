#include "tripletctl/optimal_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "tripletctl/errors.hpp"
#include "tripletctl/spectral.hpp"

namespace tripletctl {

namespace {

constexpr double kFeasibilitySlack = 1e-9;
constexpr double kMinUsefulFidelity = 1e-3;

// Precomputed basis values for series problems: rows are segment midpoints
// (for propagation) or check points (for the bound penalty).
class SeriesGrid {
 public:
  SeriesGrid(const ControlProblem& problem, int harmonics) {
    const std::size_t n = problem.segments;
    const std::size_t m = TrigSeries::coefficient_count(harmonics);
    const double dt = problem.segment_width();
    midpoints_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    checks_.resize(static_cast<Eigen::Index>(2 * n + 1), static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        midpoints_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
            TrigSeries::basis(j, (static_cast<double>(k) + 0.5) * dt);
      }
      for (std::size_t k = 0; k <= 2 * n; ++k) {
        checks_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
            TrigSeries::basis(j, 0.5 * dt * static_cast<double>(k));
      }
    }
  }

  const Eigen::MatrixXd& midpoints() const { return midpoints_; }
  const Eigen::MatrixXd& checks() const { return checks_; }

 private:
  Eigen::MatrixXd midpoints_;
  Eigen::MatrixXd checks_;
};

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Fidelity and parameter gradient for any problem layout.
class ProblemEvaluator {
 public:
  explicit ProblemEvaluator(const ControlProblem& problem) : problem_(problem) {
    problem_.validate();
    if (problem_.omega_form == OmegaForm::kSeries) grid_.emplace(problem_, problem_.harmonics);
  }

  const ControlProblem& problem() const { return problem_; }
  const SeriesGrid* grid() const { return grid_ ? &*grid_ : nullptr; }

  SegmentControls controls(std::span<const double> x) const {
    if (x.size() != problem_.parameter_count()) {
      throw ValidationError("parameter vector has " + std::to_string(x.size()) + " entries, problem expects " +
                            std::to_string(problem_.parameter_count()));
    }
    SegmentControls c;
    const std::size_t n = problem_.segments;
    const std::size_t na = problem_.omega_parameter_count();
    if (!grid_) {
      c.omegas.assign(x.begin(), x.end());
    } else {
      c.omegas = to_std(grid_->midpoints() * as_vector(x.subspan(0, na)));
    }
    if (problem_.delta_is_series()) {
      c.deltas = to_std(grid_->midpoints() * as_vector(x.subspan(na)));
    } else {
      c.deltas.assign(n, problem_.fixed_delta());
    }
    return c;
  }

  FidelityGradient evaluate(std::span<const double> x) const {
    const SegmentControls c = controls(x);
    const SegmentGradient sg = segment_gradient(problem_.duration, c.deltas, c.omegas);
    FidelityGradient out{sg.fidelity, std::vector<double>(problem_.parameter_count(), 0.0)};
    const std::size_t na = problem_.omega_parameter_count();
    if (!grid_) {
      std::copy(sg.d_omega.begin(), sg.d_omega.end(), out.gradient.begin());
    } else {
      const Eigen::VectorXd ga = grid_->midpoints().transpose() * as_vector(sg.d_omega);
      std::copy(ga.data(), ga.data() + ga.size(), out.gradient.begin());
    }
    if (problem_.delta_is_series()) {
      const Eigen::VectorXd gb = grid_->midpoints().transpose() * as_vector(sg.d_delta);
      std::copy(gb.data(), gb.data() + gb.size(), out.gradient.begin() + static_cast<std::ptrdiff_t>(na));
    }
    return out;
  }

 private:
  ControlProblem problem_;
  std::optional<SeriesGrid> grid_;
};

// mu/n * sum max(0, |v| - bound)^2 over the check grid; gradient accumulated into grad.
double bound_penalty(const Eigen::MatrixXd& checks, std::span<const double> coefficients, double bound,
                     double weight, std::span<double> grad) {
  const Eigen::VectorXd values = checks * as_vector(coefficients);
  const double scale = weight / static_cast<double>(values.size());
  double penalty = 0.0;
  Eigen::VectorXd dv = Eigen::VectorXd::Zero(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double excess = std::abs(values[i]) - bound;
    if (excess > 0.0) {
      penalty += scale * excess * excess;
      dv[i] = 2.0 * scale * excess * (values[i] > 0.0 ? 1.0 : -1.0);
    }
  }
  const Eigen::VectorXd g = checks.transpose() * dv;
  for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += g[static_cast<Eigen::Index>(j)];
  return penalty;
}

double max_abs_on(const Eigen::MatrixXd& checks, std::span<const double> coefficients) {
  return (checks * as_vector(coefficients)).cwiseAbs().maxCoeff();
}

struct StartOutcome {
  std::vector<double> x;
  double fidelity = -1.0;
  BoxLbfgsResult last;
};

OptimizationReport make_report(const ControlProblem& problem, const OptimizerSettings& settings,
                               const std::vector<StartOutcome>& outcomes, const ProblemEvaluator& evaluator) {
  OptimizationReport report;
  report.problem = problem;
  report.restarts = settings.restarts;
  report.seed = settings.seed;
  std::size_t best = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    report.start_fidelities.push_back(outcomes[i].fidelity);
    if (outcomes[i].fidelity > outcomes[best].fidelity) best = i;
  }
  const StartOutcome& winner = outcomes[best];
  report.best_start = static_cast<int>(best);
  report.fidelity = winner.fidelity;
  report.iterations = winner.last.iterations;
  report.gradient_norm = winner.last.projected_gradient_norm;
  report.exit_reason = winner.last.reason;
  report.controls = evaluator.controls(winner.x);
  if (report.fidelity <= kMinUsefulFidelity) {
    std::ostringstream msg;
    msg << "no start exceeded fidelity " << kMinUsefulFidelity << " (best " << report.fidelity
        << ") for T = " << problem.duration;
    throw NoConvergence(msg.str());
  }
  return report;
}

}  // namespace

const char* to_string(OmegaForm form) {
  return form == OmegaForm::kPiecewise ? "piecewise" : "series";
}

void ControlProblem::validate() const {
  if (!std::isfinite(duration) || duration <= 0.0) throw ValidationError("problem duration must be positive");
  if (!(omega_bound > 0.0) || !std::isfinite(omega_bound)) throw ValidationError("omega bound must be positive");
  if (!(delta_bound > 0.0) || !std::isfinite(delta_bound)) throw ValidationError("delta bound must be positive");
  if (segments < 10) throw ValidationError("problem needs at least 10 segments");
  if (omega_form == OmegaForm::kSeries && harmonics < 0) throw ValidationError("harmonics must be >= 0");
  if (delta_is_series() && omega_form != OmegaForm::kSeries) {
    throw ValidationError("a series delta requires a series omega");
  }
  if (!delta_is_series() && !std::isfinite(fixed_delta())) throw ValidationError("fixed delta must be finite");
}

double ControlProblem::fixed_delta() const {
  if (const auto* f = std::get_if<FixedDelta>(&delta_mode)) return f->value;
  return 0.0;
}

std::size_t ControlProblem::omega_parameter_count() const {
  return omega_form == OmegaForm::kPiecewise ? segments : TrigSeries::coefficient_count(harmonics);
}

std::size_t ControlProblem::delta_parameter_count() const {
  return delta_is_series() ? TrigSeries::coefficient_count(harmonics) : 0;
}

SegmentControls segment_controls(const ControlProblem& problem, std::span<const double> parameters) {
  return ProblemEvaluator(problem).controls(parameters);
}

SegmentGradient segment_gradient(double duration, std::span<const double> deltas, std::span<const double> omegas) {
  const std::size_t n = omegas.size();
  if (n == 0 || deltas.size() != n) throw ValidationError("segment_gradient needs matching non-empty controls");
  if (!(duration > 0.0)) throw ValidationError("segment_gradient needs a positive duration");
  const double dt = duration / static_cast<double>(n);

  std::vector<SegmentExponential> steps;
  std::vector<StateVector> states;
  steps.reserve(n);
  states.reserve(n + 1);
  states.push_back(TripletAmplitudes::ground().vector());
  for (std::size_t k = 0; k < n; ++k) {
    steps.emplace_back(hamiltonian_c(deltas[k], omegas[k]), dt);
    states.push_back(steps.back().apply(states.back()));
  }

  SegmentGradient out;
  out.fidelity = fidelity(states.back());
  out.d_delta.resize(n);
  out.d_omega.resize(n);

  // F = |<e2|c(T)>|^2, so dF = 2 Re(lambda^H dc) with lambda = (0, c2, 0).
  StateVector lambda = StateVector::Zero();
  lambda[1] = states.back()[1];
  const Matrix3 dh_omega = hamiltonian_c_omega_derivative();
  const Matrix3 dh_delta = hamiltonian_c_delta_derivative();
  for (std::size_t k = n; k-- > 0;) {
    out.d_omega[k] = 2.0 * lambda.dot(steps[k].derivative_apply(dh_omega, states[k])).real();
    out.d_delta[k] = 2.0 * lambda.dot(steps[k].derivative_apply(dh_delta, states[k])).real();
    lambda = steps[k].apply_adjoint(lambda);
  }
  return out;
}

FidelityGradient adjoint_gradient(const ControlProblem& problem, std::span<const double> parameters) {
  return ProblemEvaluator(problem).evaluate(parameters);
}

ControlWaveform OptimizationReport::waveform() const {
  return ControlWaveform::piecewise_constant(problem.duration, controls.deltas, controls.omegas);
}

double OptimizationReport::saturation_fraction(double tol) const {
  if (controls.omegas.empty()) return 0.0;
  std::size_t saturated = 0;
  for (double w : controls.omegas) {
    if (std::abs(std::abs(w) - problem.omega_bound) <= tol) ++saturated;
  }
  return static_cast<double>(saturated) / static_cast<double>(controls.omegas.size());
}

OptimizationReport optimize_piecewise(const ControlProblem& problem, const OptimizerSettings& settings,
                                      const std::vector<std::vector<double>>& warm_starts) {
  if (problem.omega_form != OmegaForm::kPiecewise || problem.delta_is_series()) {
    throw ValidationError("optimize_piecewise needs a piecewise omega with a fixed delta");
  }
  if (settings.restarts < 0) throw ValidationError("restarts must be non-negative");
  const ProblemEvaluator evaluator(problem);
  const std::size_t n = problem.segments;
  const std::vector<double> lower(n, -problem.omega_bound);
  const std::vector<double> upper(n, problem.omega_bound);

  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, problem.omega_bound);
  std::mt19937_64 rng(settings.seed);
  std::uniform_real_distribution<double> uniform(-problem.omega_bound, problem.omega_bound);
  for (int r = 0; r < settings.restarts; ++r) {
    std::vector<double> x(n);
    for (auto& v : x) v = uniform(rng);
    starts.push_back(std::move(x));
  }
  for (const auto& w : warm_starts) {
    if (w.size() != n) throw ValidationError("warm start has the wrong number of segments");
    starts.push_back(w);
  }

  const Objective objective = [&](std::span<const double> x, std::span<double> grad) {
    const FidelityGradient fg = evaluator.evaluate(x);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = -fg.gradient[i];
    return -fg.fidelity;
  };

  std::vector<StartOutcome> outcomes;
  for (auto& x0 : starts) {
    StartOutcome o;
    o.last = minimize_box(objective, std::move(x0), lower, upper, settings.lbfgs);
    o.x = o.last.x;
    o.fidelity = -o.last.value;
    outcomes.push_back(std::move(o));
  }
  return make_report(problem, settings, outcomes, evaluator);
}

double series_max_abs(std::span<const double> coefficients, double duration, std::size_t segments) {
  double m = 0.0;
  const double half = 0.5 * duration / static_cast<double>(segments);
  for (std::size_t k = 0; k <= 2 * segments; ++k) {
    m = std::max(m, std::abs(TrigSeries::evaluate(coefficients, half * static_cast<double>(k))));
  }
  return m;
}

OptimizationReport optimize_trig(const ControlProblem& problem, const OptimizerSettings& settings,
                                 const std::optional<TrigSeries>& warm_start) {
  if (problem.omega_form != OmegaForm::kSeries) throw ValidationError("optimize_trig needs a series omega");
  if (settings.restarts < 0) throw ValidationError("restarts must be non-negative");
  const ProblemEvaluator evaluator(problem);
  const SeriesGrid& grid = *evaluator.grid();
  const int p = problem.harmonics;
  const std::size_t na = problem.omega_parameter_count();
  const std::size_t nb = problem.delta_parameter_count();
  const std::size_t n = na + nb;
  const bool joint = problem.delta_is_series();

  auto omega_part = [na](std::span<const double> x) { return x.subspan(0, na); };
  auto delta_part = [na](std::span<const double> x) { return x.subspan(na); };

  std::vector<std::vector<double>> starts;
  {
    std::vector<double> x(n, 0.0);
    x[0] = problem.omega_bound;
    starts.push_back(std::move(x));
  }
  std::mt19937_64 rng(settings.seed);
  const double spread = 1.0 / static_cast<double>(TrigSeries::coefficient_count(p));
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (int r = 0; r < settings.restarts; ++r) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < na; ++j) x[j] = uniform(rng) * spread * problem.omega_bound;
    for (std::size_t j = na; j < n; ++j) x[j] = uniform(rng) * spread * problem.delta_bound;
    starts.push_back(std::move(x));
  }
  std::optional<std::vector<double>> warm;
  if (warm_start) {
    const TrigSeries padded = warm_start->padded(std::max(p, warm_start->harmonics()));
    if (padded.harmonics() != p) throw ValidationError("warm start has more harmonics than the problem");
    std::vector<double> x(padded.omega_coefficients());
    if (joint) x.insert(x.end(), padded.delta_coefficients().begin(), padded.delta_coefficients().end());
    warm = x;
    starts.push_back(std::move(x));
  }

  // Rescale each series onto its bound if it overshoots anywhere on the check grid.
  auto make_feasible = [&](std::vector<double>& x) {
    const double om = max_abs_on(grid.checks(), omega_part(x));
    if (om > problem.omega_bound) {
      for (std::size_t j = 0; j < na; ++j) x[j] *= problem.omega_bound / om;
    }
    if (joint) {
      const double dm = max_abs_on(grid.checks(), delta_part(x));
      if (dm > problem.delta_bound) {
        for (std::size_t j = na; j < n; ++j) x[j] *= problem.delta_bound / dm;
      }
    }
  };
  auto is_feasible = [&](std::span<const double> x) {
    if (max_abs_on(grid.checks(), omega_part(x)) > problem.omega_bound + kFeasibilitySlack) return false;
    if (joint && max_abs_on(grid.checks(), delta_part(x)) > problem.delta_bound + kFeasibilitySlack) return false;
    return true;
  };

  const std::vector<double> lower(n, -std::numeric_limits<double>::infinity());
  const std::vector<double> upper(n, std::numeric_limits<double>::infinity());

  std::vector<StartOutcome> outcomes;
  for (auto& x0 : starts) {
    StartOutcome o;
    std::vector<double> x = std::move(x0);
    for (double weight : settings.penalty_weights) {
      const Objective objective = [&](std::span<const double> v, std::span<double> grad) {
        const FidelityGradient fg = evaluator.evaluate(v);
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = -fg.gradient[i];
        double value = -fg.fidelity;
        value += bound_penalty(grid.checks(), omega_part(v), problem.omega_bound, weight, grad.subspan(0, na));
        if (joint) {
          value += bound_penalty(grid.checks(), delta_part(v), problem.delta_bound, weight, grad.subspan(na));
        }
        return value;
      };
      o.last = minimize_box(objective, std::move(x), lower, upper, settings.lbfgs);
      x = o.last.x;
    }
    make_feasible(x);
    o.fidelity = evaluator.evaluate(x).fidelity;
    o.x = std::move(x);
    outcomes.push_back(std::move(o));
  }
  if (warm && is_feasible(*warm)) {
    // The warm start itself stays a candidate so that more harmonics never lose.
    StartOutcome o;
    o.x = *warm;
    o.fidelity = evaluator.evaluate(o.x).fidelity;
    o.last.reason = ExitReason::kGradientTolerance;
    outcomes.push_back(std::move(o));
  }

  OptimizationReport report = make_report(problem, settings, outcomes, evaluator);
  const auto& best = outcomes[static_cast<std::size_t>(report.best_start)].x;
  if (!is_feasible(best)) {
    throw InfeasibleResult("optimized series violates its bounds after rescaling");
  }
  std::vector<double> a(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(na));
  std::vector<double> b(TrigSeries::coefficient_count(p), 0.0);
  if (joint) {
    b.assign(best.begin() + static_cast<std::ptrdiff_t>(na), best.end());
  } else {
    b[0] = problem.fixed_delta();
  }
  report.series.emplace(p, std::move(a), std::move(b));
  return report;
}

std::vector<OptimizationReport> harmonic_scan(const ControlProblem& base, const std::vector<int>& harmonics,
                                              const OptimizerSettings& settings) {
  std::vector<OptimizationReport> reports;
  std::optional<TrigSeries> previous;
  for (std::size_t i = 0; i < harmonics.size(); ++i) {
    if (i > 0 && harmonics[i] <= harmonics[i - 1]) throw ValidationError("harmonic counts must ascend");
    ControlProblem problem = base;
    problem.omega_form = OmegaForm::kSeries;
    problem.harmonics = harmonics[i];
    reports.push_back(optimize_trig(problem, settings, previous));
    previous = reports.back().series;
  }
  return reports;
}

std::vector<double> resample_omegas(std::span<const double> omegas, double from_duration, double to_duration,
                                    std::size_t to_segments) {
  if (omegas.empty() || !(from_duration > 0.0) || !(to_duration > 0.0) || to_segments == 0) {
    throw ValidationError("resample_omegas needs a non-empty source and positive durations");
  }
  const std::size_t n = omegas.size();
  std::vector<double> out(to_segments, 0.0);
  const double dt = to_duration / static_cast<double>(to_segments);
  for (std::size_t k = 0; k < to_segments; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt;
    if (t >= from_duration) continue;
    const auto src = std::min(n - 1, static_cast<std::size_t>(t / from_duration * static_cast<double>(n)));
    out[k] = omegas[src];
  }
  return out;
}

AdiabaticPassage AdiabaticPassage::defaults(double duration) {
  return {8.0 / duration, 1.0, duration / 6.0, duration};
}

ControlWaveform adiabatic_baseline(const AdiabaticPassage& params) {
  if (!(params.sweep_rate > 0.0) || !(params.peak_rabi >= 0.0) || !(params.width > 0.0) ||
      !(params.duration > 0.0)) {
    throw ValidationError("adiabatic passage parameters must be positive");
  }
  return ControlWaveform::parametric(params.duration, [params](double t) {
    const double u = t - 0.5 * params.duration;
    return std::pair{params.sweep_rate * u,
                     params.peak_rabi * std::exp(-u * u / (2.0 * params.width * params.width))};
  });
}

}  // namespace tripletctl
