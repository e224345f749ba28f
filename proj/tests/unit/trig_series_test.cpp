#include <cmath>

#include <gtest/gtest.h>

#include "tripletctl/trig_series.hpp"

namespace tripletctl {
namespace {

TEST(TrigSeries, LengthValidation) {
  EXPECT_NO_THROW(TrigSeries(1, {1, 2, 3}, {0, 0, 0}));
  EXPECT_THROW(TrigSeries(1, {1, 2}, {0, 0, 0}), ValidationError);
  EXPECT_THROW(TrigSeries(1, {1, 2, 3}, {0, 0, 0, 0}), ValidationError);
  EXPECT_THROW(TrigSeries(-1, {}, {}), ValidationError);
  EXPECT_THROW(TrigSeries(0, {NAN}, {0}), ValidationError);
}

TEST(TrigSeries, Evaluation) {
  const TrigSeries s(2, {0.5, 1.0, -2.0, 0.25, 3.0}, {1.0, 0, 0, 0, 0});
  const double t = 0.7;
  const double expected = 0.5 + std::cos(t) - 2.0 * std::sin(t) + 0.25 * std::cos(2 * t) + 3.0 * std::sin(2 * t);
  EXPECT_NEAR(s.omega_at(t), expected, 1e-15);
  EXPECT_EQ(s.delta_at(t), 1.0);
  EXPECT_EQ(TrigSeries::basis(0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(TrigSeries::basis(3, 0.4), std::cos(0.8));
  EXPECT_DOUBLE_EQ(TrigSeries::basis(4, 0.4), std::sin(0.8));
}

TEST(TrigSeries, Padding) {
  const TrigSeries s = TrigSeries::table_one();
  const TrigSeries p = s.padded(6);
  EXPECT_EQ(p.harmonics(), 6);
  EXPECT_EQ(p.omega_coefficients().size(), 13u);
  for (double t : {0.0, 0.9, 2.5}) {
    EXPECT_DOUBLE_EQ(p.omega_at(t), s.omega_at(t));
    EXPECT_DOUBLE_EQ(p.delta_at(t), s.delta_at(t));
  }
  EXPECT_THROW(s.padded(2), ValidationError);
}

TEST(TrigSeries, TableOneCoefficients) {
  const TrigSeries s = TrigSeries::table_one();
  EXPECT_EQ(s.harmonics(), 3);
  EXPECT_EQ(s.omega_coefficients(),
            (std::vector<double>{4.88177, -3.02932, -5.61925, -1.64576, 2.79904, 0.784017, -0.0724018}));
  EXPECT_EQ(s.delta_coefficients(),
            (std::vector<double>{-8.67328, 0.800026, 14.4413, 8.33812, -1.43694, -1.41904, -3.07217}));
}

TEST(EvaluateSeries, TableOne) {
  const TrigSeries s = TrigSeries::table_one();
  const double f = evaluate_series(s, 2.5);
  EXPECT_GE(f, 0.99);
  EXPECT_NEAR(f, 0.9999999990, 1e-8);
  EXPECT_NEAR(evaluate_series(s, 2.5, {}, SeriesTimeConvention::kNormalizedPeriod), 0.637, 1e-3);
  const auto w = s.waveform(2.5);
  EXPECT_LE(w.max_abs_omega(), 1.0);
  EXPECT_LE(w.max_abs_delta(), 1.0);
}

TEST(EvaluateSeries, ZeroCoefficients) {
  EXPECT_LT(evaluate_series(TrigSeries::zero(3), 2.5), 1e-28);
}

TEST(EvaluateSeries, ConstantSeriesMatchesConstantControl) {
  const TrigSeries s(1, {1.0, 0.0, 0.0}, {0.0, 0.0, 0.0});
  const double direct = fidelity(propagate(ControlWaveform::constant(2.5, 0.0, 1.0), TripletAmplitudes::ground()));
  EXPECT_NEAR(evaluate_series(s, 2.5), direct, 1e-10);
}

}  // namespace
}  // namespace tripletctl
