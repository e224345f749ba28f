#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "tripletctl/optimal_control.hpp"

namespace tripletctl {
namespace {

double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

TEST(AdjointGradient, PiecewiseMatchesFiniteDifferences) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> duration(1.0, 4.0), unit(-1.0, 1.0), delta(-0.3, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    ControlProblem problem;
    problem.duration = duration(rng);
    problem.segments = 12;
    problem.delta_mode = FixedDelta{delta(rng)};
    std::vector<double> x(problem.parameter_count());
    for (auto& v : x) v = unit(rng);
    const FidelityGradient g = adjoint_gradient(problem, x);
    const std::vector<double> deltas(problem.segments, problem.fixed_delta());
    auto f = [&](const std::vector<double>& omegas) {
      return oracle::piecewise_fidelity(problem.duration, deltas, omegas);
    };
    EXPECT_NEAR(g.fidelity, f(x), 1e-12);
    std::vector<double> fd(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fd[i] = oracle::central_difference(f, x, i, 1e-6);
    EXPECT_LE(relative_error(g.gradient, fd), 1e-6) << "trial " << trial;
  }
}

TEST(AdjointGradient, SeriesMatchesFiniteDifferences) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> duration(1.0, 4.0), coef(-0.3, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    ControlProblem problem;
    problem.duration = duration(rng);
    problem.segments = 20;
    problem.omega_form = OmegaForm::kSeries;
    problem.harmonics = 2;
    if (trial % 2 == 0) problem.delta_mode = SeriesDelta{};
    std::vector<double> x(problem.parameter_count());
    for (auto& v : x) v = coef(rng);
    const FidelityGradient g = adjoint_gradient(problem, x);
    auto f = [&](const std::vector<double>& p) {
      const SegmentControls c = segment_controls(problem, p);
      return oracle::piecewise_fidelity(problem.duration, c.deltas, c.omegas);
    };
    std::vector<double> fd(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) fd[i] = oracle::central_difference(f, x, i, 1e-6);
    EXPECT_LE(relative_error(g.gradient, fd), 1e-6) << "trial " << trial;
  }
}

TEST(AdjointGradient, ZeroControls) {
  ControlProblem problem;
  problem.segments = 10;
  const std::vector<double> x(10, 0.0);
  const FidelityGradient g = adjoint_gradient(problem, x);
  EXPECT_EQ(g.fidelity, 0.0);
  auto f = [&](const std::vector<double>& omegas) {
    return oracle::piecewise_fidelity(problem.duration, std::vector<double>(10, 0.0), omegas);
  };
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_TRUE(std::isfinite(g.gradient[i]));
    EXPECT_NEAR(g.gradient[i], oracle::central_difference(f, x, i, 1e-6), 1e-9);
  }
}

TEST(AdjointGradient, ParameterLayout) {
  ControlProblem fixed;
  fixed.segments = 15;
  EXPECT_EQ(fixed.parameter_count(), 15u);
  EXPECT_EQ(fixed.delta_parameter_count(), 0u);
  EXPECT_EQ(adjoint_gradient(fixed, std::vector<double>(15, 0.5)).gradient.size(), 15u);
  EXPECT_THROW(adjoint_gradient(fixed, std::vector<double>(14, 0.5)), ValidationError);

  ControlProblem joint;
  joint.omega_form = OmegaForm::kSeries;
  joint.harmonics = 3;
  joint.delta_mode = SeriesDelta{};
  EXPECT_EQ(joint.parameter_count(), 14u);
}

TEST(AdjointGradient, SegmentGradientAgreesWithProblemForm) {
  ControlProblem problem;
  problem.segments = 10;
  problem.delta_mode = FixedDelta{-0.11};
  const std::vector<double> x{0.1, -0.2, 0.3, 1.0, -1.0, 0.5, 0.7, -0.4, 0.2, 0.9};
  const SegmentGradient s = segment_gradient(problem.duration, std::vector<double>(10, -0.11), x);
  const FidelityGradient g = adjoint_gradient(problem, x);
  EXPECT_EQ(s.fidelity, g.fidelity);
  EXPECT_EQ(s.d_omega, g.gradient);
}

TEST(ControlProblem, Validation) {
  ControlProblem p;
  EXPECT_NO_THROW(p.validate());
  p.segments = 9;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.duration = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.delta_mode = SeriesDelta{};
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.omega_bound = -1.0;
  EXPECT_THROW(p.validate(), ValidationError);
}

ControlProblem small_problem(double T, double delta = 0.0) {
  ControlProblem p;
  p.duration = T;
  p.segments = 100;
  p.delta_mode = FixedDelta{delta};
  return p;
}

TEST(OptimizePiecewise, BangBangAtShortDuration) {
  const OptimizationReport r = optimize_piecewise(small_problem(2.0), {.restarts = 2});
  EXPECT_GE(r.fidelity, 0.9396);
  EXPECT_GE(r.saturation_fraction(), 0.95);
  EXPECT_EQ(r.start_fidelities.size(), 3u);
  EXPECT_EQ(r.controls.omegas.size(), 100u);
  for (double w : r.controls.omegas) EXPECT_LE(std::abs(w), 1.0);
  for (double d : r.controls.deltas) EXPECT_EQ(d, 0.0);
  EXPECT_NEAR(fidelity(propagate(r.waveform(), TripletAmplitudes::ground(),
                                 {.method = PropagationMethod::kPiecewiseExponential})),
              r.fidelity, 1e-10);
}

TEST(OptimizePiecewise, InteriorOptimumHasSmallGradient) {
  const OptimizationReport r = optimize_piecewise(small_problem(3.0), {.restarts = 1});
  EXPECT_LE(r.gradient_norm, 1e-6);
}

TEST(OptimizePiecewise, Deterministic) {
  const OptimizerSettings s{.restarts = 2, .seed = 7};
  const OptimizationReport a = optimize_piecewise(small_problem(2.5, -0.11), s);
  const OptimizationReport b = optimize_piecewise(small_problem(2.5, -0.11), s);
  EXPECT_EQ(a.fidelity, b.fidelity);
  EXPECT_EQ(a.controls.omegas, b.controls.omegas);
  EXPECT_EQ(a.start_fidelities, b.start_fidelities);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.best_start, b.best_start);
  EXPECT_EQ(a.seed, 7u);
  EXPECT_EQ(a.restarts, 2);
}

TEST(OptimizePiecewise, DegenerateDuration) {
  EXPECT_THROW(optimize_piecewise(small_problem(1e-3), {.restarts = 1}), NoConvergence);
}

TEST(OptimizePiecewise, WrongProblemForm) {
  ControlProblem p = small_problem(2.0);
  p.omega_form = OmegaForm::kSeries;
  EXPECT_THROW(optimize_piecewise(p), ValidationError);
  EXPECT_THROW(optimize_piecewise(small_problem(2.0), {}, {std::vector<double>(5, 0.0)}), ValidationError);
}

TEST(OptimizePiecewise, WarmStartIsUsed) {
  const ControlProblem p = small_problem(2.0);
  const OptimizationReport first = optimize_piecewise(p, {.restarts = 0});
  const OptimizationReport warm = optimize_piecewise(p, {.restarts = 0}, {first.controls.omegas});
  EXPECT_EQ(warm.start_fidelities.size(), 2u);
  EXPECT_GE(warm.fidelity, first.fidelity);
}

TEST(OptimizeTrig, FeasibleSeries) {
  ControlProblem p;
  p.segments = 100;
  p.omega_form = OmegaForm::kSeries;
  p.harmonics = 2;
  p.delta_mode = SeriesDelta{};
  const OptimizationReport r = optimize_trig(p, {.restarts = 1});
  ASSERT_TRUE(r.series.has_value());
  EXPECT_EQ(r.series->harmonics(), 2);
  EXPECT_LE(series_max_abs(r.series->omega_coefficients(), p.duration, p.segments), 1.0 + 1e-9);
  EXPECT_LE(series_max_abs(r.series->delta_coefficients(), p.duration, p.segments), 1.0 + 1e-9);
  EXPECT_GT(r.fidelity, 0.99);
  EXPECT_LE(r.fidelity, 1.0);
}

TEST(OptimizeTrig, FixedDetuning) {
  ControlProblem p;
  p.segments = 100;
  p.omega_form = OmegaForm::kSeries;
  p.harmonics = 1;
  p.delta_mode = FixedDelta{-0.11};
  const OptimizationReport r = optimize_trig(p, {.restarts = 0});
  ASSERT_TRUE(r.series.has_value());
  EXPECT_EQ(r.series->delta_coefficients(), (std::vector<double>{-0.11, 0.0, 0.0}));
  for (double d : r.controls.deltas) EXPECT_EQ(d, -0.11);
  EXPECT_LE(series_max_abs(r.series->omega_coefficients(), p.duration, p.segments), 1.0 + 1e-9);
}

TEST(OptimizeTrig, Errors) {
  EXPECT_THROW(optimize_trig(small_problem(2.0)), ValidationError);
  ControlProblem p;
  p.omega_form = OmegaForm::kSeries;
  p.harmonics = 1;
  EXPECT_THROW(optimize_trig(p, {}, TrigSeries::zero(3)), ValidationError);
  EXPECT_THROW(harmonic_scan(p, {2, 1}), ValidationError);
}

TEST(ResampleOmegas, PadsWithZero) {
  const std::vector<double> src{1.0, -1.0};
  const auto out = resample_omegas(src, 2.0, 4.0, 8);
  EXPECT_EQ(out, (std::vector<double>{1.0, 1.0, -1.0, -1.0, 0.0, 0.0, 0.0, 0.0}));
  EXPECT_THROW(resample_omegas({}, 1.0, 2.0, 4), ValidationError);
}

TEST(AdiabaticBaseline, ShapeAndZeroPulse) {
  const auto params = AdiabaticPassage::defaults(20.0);
  const auto w = adiabatic_baseline(params);
  for (double u : {1.0, 3.5, 7.0}) {
    EXPECT_DOUBLE_EQ(w.at(10.0 - u).omega(), w.at(10.0 + u).omega());
    EXPECT_DOUBLE_EQ(w.at(10.0 - u).delta(), -w.at(10.0 + u).delta());
  }
  EXPECT_DOUBLE_EQ(w.at(10.0).omega(), 1.0);
  auto off = params;
  off.peak_rabi = 0.0;
  EXPECT_LT(fidelity(propagate(adiabatic_baseline(off), TripletAmplitudes::ground())), 1e-28);
  off.width = 0.0;
  EXPECT_THROW(adiabatic_baseline(off), ValidationError);
}

TEST(AdiabaticBaseline, ImprovesWithDuration) {
  double previous = 0.0;
  for (double T : {10.0, 20.0, 30.0}) {
    const double f = fidelity(propagate(adiabatic_baseline(AdiabaticPassage::defaults(T)), TripletAmplitudes::ground()));
    EXPECT_GT(f, previous) << "T=" << T;
    previous = f;
  }
  EXPECT_GT(previous, 0.99);
}

}  // namespace
}  // namespace tripletctl
