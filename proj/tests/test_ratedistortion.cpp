#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dimrate/ratedistortion.hpp"

using namespace dimrate;

TEST(Waterfill, FlatSpectrumClosedForm) {
  const auto s = SpectralModel::flat(2.0);
  for (double d : {1e-9, 1e-3, 0.5, 1.9}) {
    const auto w = reverse_waterfill_stationary(s, d);
    EXPECT_NEAR(w.rate, 0.5 * std::log(2.0 / d), 1e-13) << d;
    EXPECT_NEAR(w.water_level, d, 1e-15 + 1e-13 * d);
    EXPECT_NEAR(w.distortion, d, 1e-13 * d);
  }
}

TEST(Waterfill, DistortionAbovePowerCostsNothing) {
  const auto s = SpectralModel::ar1(0.5, 1.0);
  EXPECT_EQ(reverse_waterfill_stationary(s, 4.0 / 3.0).rate, 0.0);
  EXPECT_EQ(reverse_waterfill_stationary(s, 10.0).rate, 0.0);
}

TEST(Waterfill, Ar1MatchesOracle) {
  const auto s = SpectralModel::ar1(0.5, 1.0);
  // Below the density minimum every frequency is active: R = 1/2 log(1/D).
  EXPECT_NEAR(reverse_waterfill_stationary(s, 1e-3).rate, 3.4538776394910685, 1e-9);
  const auto w = reverse_waterfill_stationary(s, 0.5);
  EXPECT_NEAR(w.water_level, 0.5113840420317098, 1e-10);
  EXPECT_NEAR(w.rate, 0.3470833869288647, 1e-10);
  EXPECT_NEAR(w.distortion, 0.5, 1e-9);
}

TEST(Waterfill, BandHasExactWaterLevel) {
  const auto w = reverse_waterfill_stationary(SpectralModel::unit_band(0.25), 0.5);
  EXPECT_NEAR(w.water_level, 1.0, 1e-14);
  EXPECT_NEAR(w.rate, 0.17328679513998632, 1e-14);
  // Deep in the small-D regime R = (1/2)(1/2) log(2 / D).
  const double d = 1e-8;
  EXPECT_NEAR(reverse_waterfill_stationary(SpectralModel::unit_band(0.25), d).rate, 0.25 * std::log(1.0 / (d))
              + 0.25 * std::log(2.0 * 0.5), 1e-12);
}

TEST(Waterfill, TableSpectrumMatchesHandSolve) {
  // Cells 1,3,3,1 on quarters; D = 1: kappa = 1 kills the outer cells, 1 = 0.5*1 + 0.5*kappa.
  const auto w = reverse_waterfill_stationary(SpectralModel::table({1.0, 3.0, 3.0, 1.0}), 1.0);
  EXPECT_NEAR(w.water_level, 1.0, 1e-14);
  EXPECT_NEAR(w.rate, 0.25 * std::log(3.0), 1e-14);
}

TEST(Waterfill, RejectsBadInput) {
  EXPECT_THROW(reverse_waterfill_stationary(SpectralModel::flat(1.0), 0.0), std::invalid_argument);
  EXPECT_THROW(reverse_waterfill_stationary(SpectralModel::point_spectrum({{0.0, 1.0}}), 0.1),
               std::invalid_argument);
}

TEST(Waterfill, RateIsDecreasingAndConvexInDistortion) {
  const auto s = SpectralModel::ar1(0.9, 1.0);
  const auto grid = default_distortion_grid(s.total_power(), 25, 0.9, 1e-6);
  const auto curve = rd_curve(s, grid);
  ASSERT_EQ(curve.points.size(), grid.size());
  for (std::size_t i = 1; i < curve.points.size(); ++i) EXPECT_GT(curve.points[i].rate, curve.points[i - 1].rate);
  // Convex in D: slopes between consecutive points increase with D.
  for (std::size_t i = 2; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 2];
    const auto& b = curve.points[i - 1];
    const auto& c = curve.points[i];
    const double s1 = (a.rate - b.rate) / (a.distortion - b.distortion);
    const double s2 = (b.rate - c.rate) / (b.distortion - c.distortion);
    EXPECT_GE(s1, s2 - 1e-9 * std::abs(s2));
  }
}

TEST(VectorRd, TwoComponents) {
  const std::vector<double> eig{4.0, 1.0};
  EXPECT_NEAR(vector_rd(eig, 1.0), std::log(4.0), 1e-14);
  EXPECT_NEAR(vector_rd(eig, 3.5), 0.5 * std::log(4.0 / 2.5), 1e-14);
  EXPECT_EQ(vector_rd(eig, 5.0), 0.0);
  EXPECT_THROW(vector_rd(eig, 0.0), std::invalid_argument);
  EXPECT_THROW(vector_rd(std::vector<double>{-1.0}, 1.0), std::invalid_argument);
}

TEST(VectorRd, ToeplitzBlocksConvergeToWaterfilling) {
  const auto model = SpectralModel::ar1(0.5, 1.0);
  const double d = 0.5;
  const double target = reverse_waterfill_stationary(model, d).rate;
  double last_gap = 1.0;
  for (int n : {64, 256}) {
    const auto c = autocovariance_sequence(model, static_cast<std::size_t>(n));
    Eigen::MatrixXd t(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(i, j) = c[static_cast<std::size_t>(std::abs(i - j))];
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(t).eigenvalues();
    const std::vector<double> eig(ev.data(), ev.data() + n);
    const double gap = std::abs(vector_rd(eig, n * d) / n - target);
    EXPECT_LT(gap, last_gap);
    last_gap = gap;
  }
  EXPECT_LT(last_gap, 5e-3);
}

TEST(RdDimension, ExamplesOnDefaultGrid) {
  const auto grid = default_distortion_grid(1.0);
  EXPECT_EQ(grid.size(), 33u);
  EXPECT_NEAR(grid.front(), 1e-1, 1e-16);
  EXPECT_NEAR(grid.back(), 1e-9, 1e-22);

  const auto flat = rd_dimension_estimate(rd_curve(SpectralModel::flat(1.0), grid));
  EXPECT_NEAR(flat.dimension, 1.0, 1e-12);
  EXPECT_TRUE(flat.spans_six_decades);
  for (double r : flat.ratio) EXPECT_LT(std::abs(r - 1.0), 1e-12);

  const auto band = rd_dimension_estimate(rd_curve(SpectralModel::unit_band(0.25), grid));
  EXPECT_NEAR(band.dimension, 0.5, 1e-9);

  const auto ar = rd_dimension_estimate(rd_curve(SpectralModel::ar1(0.5, 1.0), grid));
  EXPECT_NEAR(ar.dimension, 1.0, 1e-9);
}

TEST(RdDimension, NarrowGridDoesNotSpanSixDecades) {
  const std::vector<double> grid{1e-2, 1e-3, 1e-4};
  const auto est = rd_dimension_estimate(rd_curve(SpectralModel::flat(1.0), grid));
  EXPECT_FALSE(est.spans_six_decades);
  EXPECT_THROW(rd_dimension_estimate(rd_curve(SpectralModel::flat(1.0), std::vector<double>{1e-2, 1e-3})),
               std::invalid_argument);
}

TEST(Achievability, QuantizerBeatsNoBound) {
  const auto g = quantizer_achievability_check(ScalarDensity::gaussian(0.0, 1.0), 32);
  EXPECT_NEAR(g.quantized_entropy, 4.884715124452971, 1e-10);
  EXPECT_NEAR(g.rate, std::log(32.0), 1e-12);
  EXPECT_GT(g.margin, 0.0);

  const auto u = quantizer_achievability_check(ScalarDensity::uniform(), 8);
  EXPECT_NEAR(u.quantized_entropy, std::log(8.0), 1e-14);
  EXPECT_NEAR(u.rate, 0.5 * std::log(64.0 / 12.0), 1e-12);
  EXPECT_THROW(quantizer_achievability_check(ScalarDensity::uniform(), 1), std::invalid_argument);
}
