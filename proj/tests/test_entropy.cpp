#include <gtest/gtest.h>

#include <cmath>

#include "dimrate/entropy.hpp"
#include "dimrate/errors.hpp"

using namespace dimrate;

namespace {

const double kHalfLogTwoPiE = 1.4189385332046727;

double binary_entropy(double p) { return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p); }

std::vector<std::vector<double>> flip_chain(double p) { return {{1.0 - p, p}, {p, 1.0 - p}}; }

}  // namespace

TEST(PlugIn, SmallAlphabets) {
  const std::vector<std::int64_t> fair{0, 1, 0, 1, 1, 0, 1, 0};
  EXPECT_NEAR(plug_in_entropy(fair).value, std::log(2.0), 1e-15);
  const std::vector<std::int64_t> constant(100, 7);
  EXPECT_EQ(plug_in_entropy(constant).value, 0.0);
  const std::vector<std::int64_t> four{-5, 0, 9, 1000};
  const auto e = plug_in_entropy(four);
  EXPECT_NEAR(e.value, std::log(4.0), 1e-15);
  EXPECT_EQ(e.alphabet_size, 4u);
  EXPECT_EQ(e.samples, 4u);
}

TEST(PlugIn, MillerMadowCorrection) {
  const std::vector<std::int64_t> four{0, 1, 2, 3};
  EntropyOptions mm;
  mm.miller_madow = true;
  EXPECT_NEAR(plug_in_entropy(four, mm).value - plug_in_entropy(four).value, 3.0 / 8.0, 1e-15);
}

TEST(ConditionalEntropy, DeterministicSequencesHaveZeroRate) {
  std::vector<std::int64_t> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<std::int64_t>(i % 2);
  EXPECT_NEAR(empirical_conditional_entropy(alt, 0).value, std::log(2.0), 1e-15);
  EXPECT_EQ(empirical_conditional_entropy(alt, 1).value, 0.0);

  std::vector<std::int64_t> period4(1000);
  const std::int64_t base[4] = {3, 1, 4, 1};
  for (std::size_t i = 0; i < period4.size(); ++i) period4[i] = base[i % 4];
  EXPECT_GT(empirical_conditional_entropy(period4, 1).value, 0.1);
  EXPECT_EQ(empirical_conditional_entropy(period4, 2).value, 0.0);
  EXPECT_EQ(empirical_conditional_entropy(period4, 4).value, 0.0);
}

TEST(ConditionalEntropy, CountsAndContexts) {
  const std::vector<std::int64_t> codes{0, 1, 1, 0, 1};
  const auto e = empirical_conditional_entropy(codes, 2);
  EXPECT_EQ(e.order, 2u);
  EXPECT_EQ(e.samples, 3u);
  EXPECT_EQ(e.contexts, 3u);  // 01, 11, 10
  EXPECT_EQ(e.value, 0.0);
  EXPECT_THROW(empirical_conditional_entropy(codes, 5), std::invalid_argument);
}

TEST(ConditionalEntropy, MarkovChainEstimateCoversExactRate) {
  for (double p : {0.1, 0.3}) {
    const auto states = sample_markov_chain(flip_chain(p), 200000, 77);
    const auto e = empirical_conditional_entropy(states, 1);
    const double exact = binary_entropy(p);
    EXPECT_GT(e.std_error, 0.0);
    EXPECT_LT(std::abs(e.value - exact), 4.0 * e.std_error + 1e-3) << "p " << p;
  }
}

TEST(ConditionalEntropy, WideCodesMatchDenseCodes) {
  const auto states = sample_markov_chain(flip_chain(0.2), 5000, 3);
  std::vector<std::int64_t> wide(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) wide[i] = states[i] * 1'000'000'000'007LL - 4'000'000'000'000'000LL;
  for (std::size_t j : {0u, 1u, 3u}) {
    EXPECT_DOUBLE_EQ(empirical_conditional_entropy(wide, j).value, empirical_conditional_entropy(states, j).value);
  }
}

TEST(ConditionalEntropy, ContextLimitRaises) {
  std::vector<std::int64_t> codes(1000);
  for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = static_cast<std::int64_t>(i);
  EntropyOptions opts;
  opts.max_contexts = 10;
  try {
    empirical_conditional_entropy(codes, 1, opts);
    FAIL() << "expected an error";
  } catch (const NumericalError& e) {
    EXPECT_STREQ(e.what(), "alphabet/context too large");
  }
}

TEST(BlockEntropy, IidBlocksAddUp) {
  const auto states = sample_markov_chain(flip_chain(0.5), 100000, 8);
  EXPECT_NEAR(block_entropy(states, 2).value, 2.0 * std::log(2.0), 1e-3);
  EXPECT_NEAR(block_entropy(states, 3).value, 3.0 * std::log(2.0), 2e-3);
}

TEST(MarkovExact, BinaryFlipChains) {
  EXPECT_NEAR(markov_entropy_rate_exact(flip_chain(0.1)), 0.32508297339144824, 1e-12);
  EXPECT_NEAR(markov_entropy_rate_exact(flip_chain(0.3)), 0.6108643020548935, 1e-12);
  EXPECT_NEAR(markov_entropy_rate_exact(flip_chain(0.5)), std::log(2.0), 1e-12);
}

TEST(MarkovExact, AsymmetricChainUsesStationaryLaw) {
  // pi = (3/4, 1/4) for this chain.
  const double h = markov_entropy_rate_exact({{0.9, 0.1}, {0.3, 0.7}});
  EXPECT_NEAR(h, 0.75 * binary_entropy(0.1) + 0.25 * binary_entropy(0.3), 1e-12);
}

TEST(MarkovExact, TransientStatesAreAllowedButTwoClassesAreNot) {
  EXPECT_NEAR(markov_entropy_rate_exact({{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.0, 0.5, 0.5}}), std::log(2.0), 1e-12);
  try {
    markov_entropy_rate_exact({{1.0, 0.0}, {0.0, 1.0}});
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "Markov chain has no unique stationary distribution");
  }
  EXPECT_THROW(markov_entropy_rate_exact({{0.5, 0.6}, {0.5, 0.5}}), std::invalid_argument);
}

TEST(FitLine, ExactLineAndResidual) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.residual_rms, 0.0, 1e-14);
  const auto g = fit_line(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 0});
  EXPECT_NEAR(g.slope, 0.0, 1e-15);
  EXPECT_GT(g.residual_rms, 0.0);
}

TEST(FitIdRate, UsesLargestHalfOfGrid) {
  std::vector<IdRateRow> rows;
  for (std::int64_t m : {2, 4, 8, 16, 32, 64}) {
    IdRateRow r;
    r.m = m;
    r.log_m = std::log(static_cast<double>(m));
    // Curved at small m, exactly slope 0.7 over the largest three points.
    r.entropy = 0.7 * r.log_m + (m < 16 ? 5.0 : 1.0);
    rows.push_back(r);
  }
  const auto est = fit_id_rate(rows, 1);
  EXPECT_EQ(est.fit_points, 3u);
  EXPECT_NEAR(est.d_hat, 0.7, 1e-12);
  EXPECT_NEAR(est.intercept, 1.0, 1e-12);
  EXPECT_FALSE(est.out_of_range);
  EXPECT_THROW(fit_id_rate({rows[0]}, 1), std::invalid_argument);
}

TEST(FitIdRate, FlagsSlopesOutsideUnitInterval) {
  std::vector<IdRateRow> rows;
  for (std::int64_t m : {4, 8, 16, 32}) rows.push_back({m, std::log(double(m)), 1.3 * std::log(double(m)), 0, 0});
  EXPECT_TRUE(fit_id_rate(rows, 0).out_of_range);
}

TEST(IdRateEstimate, IidUniformHasUnitRate) {
  std::vector<SamplePath> paths;
  for (std::uint64_t s = 1; s <= 2; ++s) paths.push_back(sample_piecewise({1.0}, 100000, s));
  const std::vector<std::int64_t> grid{4, 8, 16, 32, 64};
  const auto est = id_rate_estimate(paths, grid, 0);
  EXPECT_NEAR(est.d_hat, 1.0, 0.01);
  EXPECT_EQ(est.paths, 2u);
  EXPECT_EQ(est.rows.size(), grid.size());
  for (const auto& r : est.rows) EXPECT_NEAR(r.ratio, 1.0, 0.01);
}

TEST(IdRateEstimate, FrozenProcessHasZeroRate) {
  std::vector<SamplePath> paths{sample_piecewise({0.0}, 10000, 1)};
  const std::vector<std::int64_t> grid{4, 8, 16};
  EXPECT_EQ(id_rate_estimate(paths, grid, 1).d_hat, 0.0);
}

TEST(QuantizedEntropy, GaussianMatchesOracle) {
  const auto g = ScalarDensity::gaussian(0.0, 1.0);
  EXPECT_NEAR(quantized_entropy_iid(g, 2), 2.122395352157217, 1e-10);
  EXPECT_NEAR(quantized_entropy_iid(g, 32), 4.884715124452971, 1e-10);
  EXPECT_NEAR(quantized_entropy_iid(g, 64), 5.577831788986907, 1e-10);
  EXPECT_NEAR(quantized_entropy_iid(g, 1024), 8.350410378540554, 1e-10);
  EXPECT_NEAR(quantized_entropy_iid(g, 1024) - std::log(1024.0), kHalfLogTwoPiE, 1e-5);
}

TEST(QuantizedEntropy, GaussianScaleShiftsResolution) {
  // X ~ N(3, 4): floor(16 X) has the same law as floor(32 Y) + 48, Y ~ N(0, 1).
  EXPECT_NEAR(quantized_entropy_iid(ScalarDensity::gaussian(3.0, 4.0), 16), 4.884715124452971, 1e-10);
}

TEST(QuantizedEntropy, UniformPointAndMixture) {
  EXPECT_NEAR(quantized_entropy_iid(ScalarDensity::uniform(), 8), std::log(8.0), 1e-14);
  EXPECT_NEAR(quantized_entropy_iid(ScalarDensity::uniform(0.0, 2.0), 8), std::log(16.0), 1e-14);
  EXPECT_EQ(quantized_entropy_iid(ScalarDensity::point(0.3), 1024), 0.0);

  const double w = 0.25;
  const auto mix = ScalarDensity::mixture(w, ScalarDensity::uniform(), 0.35);
  const double m = 10.0;
  const double cell = w / m;
  const double heavy = cell + (1.0 - w);
  const double expected = -(m - 1.0) * cell * std::log(cell) - heavy * std::log(heavy);
  EXPECT_NEAR(quantized_entropy_iid(mix, 10), expected, 1e-13);
}

TEST(QuantizedEntropy, MixtureDimensionIsContinuousWeight) {
  const auto mix = ScalarDensity::mixture(0.4, ScalarDensity::gaussian(0.0, 1.0), 0.0);
  // The atom's bin also holds O(1/m) continuous mass, hence the loose bound.
  const double slope = (quantized_entropy_iid(mix, 1 << 16) - quantized_entropy_iid(mix, 1 << 8)) / std::log(256.0);
  EXPECT_NEAR(slope, 0.4, 2e-3);
}
