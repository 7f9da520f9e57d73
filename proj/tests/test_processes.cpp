#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dimrate/errors.hpp"
#include "dimrate/processes.hpp"

using namespace dimrate;

namespace {

double sample_mean(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); }

double sample_cov(const std::vector<double>& x, std::size_t lag) {
  const double mu = sample_mean(x);
  double s = 0.0;
  for (std::size_t t = 0; t + lag < x.size(); ++t) s += (x[t] - mu) * (x[t + lag] - mu);
  return s / static_cast<double>(x.size() - lag);
}

std::string meta(const SamplePath& p, const std::string& key) {
  for (const auto& [k, v] : p.metadata)
    if (k == key) return v;
  return {};
}

}  // namespace

TEST(Quantize, FloorSemantics) {
  EXPECT_EQ(quantize_code(0.0, 4), 0);
  EXPECT_EQ(quantize_code(0.25, 4), 1);
  EXPECT_EQ(quantize_code(0.2499999, 4), 0);
  EXPECT_EQ(quantize_code(-0.1, 4), -1);
  EXPECT_EQ(quantize_code(-0.25, 4), -1);
  EXPECT_EQ(quantize_code(1e-300, 1024), 0);
  EXPECT_EQ(quantize_code(-1e-300, 1024), -1);
  EXPECT_DOUBLE_EQ(quantize(0.3, 4), 0.25);
  EXPECT_DOUBLE_EQ(quantize(-0.3, 4), -0.5);
  EXPECT_DOUBLE_EQ(quantize(2.7, 1), 2.0);
}

TEST(Quantize, CodeBracketsValue) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 10.0);
  for (int i = 0; i < 20000; ++i) {
    const double x = g(rng);
    for (std::int64_t m : {1, 3, 10, 1024, 1000003}) {
      const auto c = quantize_code(x, m);
      EXPECT_LE(static_cast<double>(c) / m, x);
      EXPECT_LT(x, static_cast<double>(c + 1) / m);
    }
  }
}

TEST(Quantize, RejectsBadInput) {
  EXPECT_THROW(quantize_code(1.0, 0), std::invalid_argument);
  EXPECT_THROW(quantize_code(std::nan(""), 4), std::invalid_argument);
  EXPECT_THROW(quantize_code(1e300, 4), std::invalid_argument);
}

TEST(Quantize, PathReconstruction) {
  SamplePath p;
  p.values = {0.1, -0.6, 0.99, 2.0};
  const auto q = quantize_path(p, 2);
  EXPECT_EQ(q.codes, (std::vector<std::int64_t>{0, -2, 1, 4}));
  EXPECT_EQ(q.reconstruct(), (std::vector<double>{0.0, -1.0, 0.5, 2.0}));
}

TEST(GaussianSampler, Ar1MatchesAutocovariance) {
  const auto model = SpectralModel::ar1(0.5, 1.0);
  const auto p = sample_gaussian(model, std::size_t{1} << 18, 11);
  EXPECT_EQ(meta(p, "method"), "circulant-embedding");
  EXPECT_NEAR(sample_mean(p.values), 0.0, 0.02);
  EXPECT_NEAR(sample_cov(p.values, 0), 4.0 / 3.0, 0.03);
  EXPECT_NEAR(sample_cov(p.values, 1), 2.0 / 3.0, 0.03);
  EXPECT_NEAR(sample_cov(p.values, 3), 1.0 / 6.0, 0.03);
}

TEST(GaussianSampler, FlatMeanAndVariance) {
  const auto p = sample_gaussian(SpectralModel::flat(4.0, 3.0), std::size_t{1} << 16, 5);
  EXPECT_NEAR(sample_mean(p.values), 3.0, 0.05);
  EXPECT_NEAR(sample_cov(p.values, 0), 4.0, 0.1);
  EXPECT_NEAR(sample_cov(p.values, 1), 0.0, 0.05);
}

TEST(GaussianSampler, DeterministicInSeed) {
  const auto model = SpectralModel::ar1(0.3, 1.0);
  const auto a = sample_gaussian(model, 1000, 42);
  const auto b = sample_gaussian(model, 1000, 42);
  const auto c = sample_gaussian(model, 1000, 43);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(a.seed, 42u);
  EXPECT_EQ(a.generator, GeneratorKind::gaussian);
}

TEST(GaussianSampler, BandFallsBackToDenseFactorization) {
  const auto model = SpectralModel::unit_band(0.25);
  double var = 0.0;
  double c1 = 0.0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    const auto p = sample_gaussian(model, 256, static_cast<std::uint64_t>(s));
    EXPECT_TRUE(meta(p, "method").rfind("dense", 0) == 0) << meta(p, "method");
    for (std::size_t t = 0; t < 256; ++t) var += p.values[t] * p.values[t];
    for (std::size_t t = 0; t + 1 < 256; ++t) c1 += p.values[t] * p.values[t + 1];
  }
  EXPECT_NEAR(var / (256.0 * seeds), 1.0, 0.08);
  EXPECT_NEAR(c1 / (255.0 * seeds), 0.63661977236758134, 0.08);
}

TEST(GaussianSampler, BandEmbeddingFailureIsReported) {
  GaussianSamplerOptions opts;
  opts.max_embedding = std::size_t{1} << 15;
  opts.dense_limit = 16;
  try {
    sample_gaussian(SpectralModel::unit_band(0.25), 8192, 1, opts);
    FAIL() << "expected embedding failure";
  } catch (const NumericalError& e) {
    EXPECT_STREQ(e.what(), "embedding failed");
  }
  opts.allow_approximate = true;
  const auto p = sample_gaussian(SpectralModel::unit_band(0.25), 8192, 1, opts);
  EXPECT_EQ(meta(p, "approximate"), "true");
  EXPECT_NEAR(sample_cov(p.values, 0), 1.0, 0.1);
}

TEST(GaussianSampler, NyquistAtomAlternatesSign) {
  const auto p = sample_gaussian(SpectralModel::point_spectrum({{0.5, 1.0}}), 64, 3);
  for (std::size_t t = 0; t + 1 < p.size(); ++t) EXPECT_NEAR(p.values[t + 1], -p.values[t], 1e-12);
}

TEST(GaussianSampler, PairedAtomsArePeriodic) {
  const auto p = sample_gaussian(SpectralModel::point_spectrum({{-0.125, 0.5}, {0.125, 0.5}}), 64, 9);
  for (std::size_t t = 0; t + 8 < p.size(); ++t) EXPECT_NEAR(p.values[t + 8], p.values[t], 1e-12);
}

TEST(PiecewiseSampler, ExtremeFreshProbabilities) {
  const auto frozen = sample_piecewise({0.0}, 1000, 1);
  EXPECT_TRUE(std::all_of(frozen.values.begin(), frozen.values.end(), [&](double v) { return v == frozen.values[0]; }));
  const auto iid = sample_piecewise({1.0}, 1000, 1);
  for (std::size_t t = 1; t < iid.size(); ++t) EXPECT_NE(iid.values[t], iid.values[t - 1]);
  EXPECT_THROW(sample_piecewise({1.5}, 10, 1), std::invalid_argument);
}

TEST(PiecewiseSampler, RunLengthsAreGeometric) {
  const double rho = 0.25;
  const auto p = sample_piecewise({rho}, 400000, 17);
  std::size_t changes = 0;
  for (std::size_t t = 1; t < p.size(); ++t) changes += p.values[t] != p.values[t - 1];
  EXPECT_NEAR(static_cast<double>(changes) / (p.size() - 1), rho, 0.005);
  EXPECT_TRUE(std::all_of(p.values.begin(), p.values.end(), [](double v) { return v >= 0.0 && v <= 1.0; }));
  EXPECT_NEAR(sample_mean(p.values), 0.5, 0.01);
}

TEST(InnovationDistribution, PiecewiseLinearCdf) {
  const auto d = InnovationDistribution::piecewise_linear({0.0, 1.0}, {0.0, 2.0});  // pdf 2y
  EXPECT_NEAR(d.pdf(0.5), 1.0, 1e-15);
  EXPECT_NEAR(d.cdf(0.5), 0.25, 1e-15);
  EXPECT_NEAR(d.inverse_cdf(0.25), 0.5, 1e-12);
  for (double u : {0.01, 0.3, 0.77, 0.999}) EXPECT_NEAR(d.cdf(d.inverse_cdf(u)), u, 1e-12);
  EXPECT_FALSE(d.is_uniform());
  EXPECT_TRUE(InnovationDistribution::uniform().is_uniform());
  EXPECT_THROW(InnovationDistribution::piecewise_linear({0.0, 0.5}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(InnovationDistribution::piecewise_linear({0.0, 1.0}, {-1.0, 1.0}), std::invalid_argument);
}

TEST(PeriodicSampler, RepeatsWithPeriod) {
  const auto spec = PeriodicSpec::uniform_base(4, 20240601);
  ASSERT_EQ(spec.period(), 4u);
  const auto p = sample_periodic(spec, 100, 3);
  for (std::size_t t = 0; t + 4 < p.size(); ++t) EXPECT_EQ(p.values[t + 4], p.values[t]);
  EXPECT_FALSE(meta(p, "shift").empty());
  EXPECT_EQ(PeriodicSpec::uniform_base(4, 20240601).base, spec.base);
}

TEST(MarkovChain, TransitionFrequencies) {
  const std::vector<std::vector<double>> t{{0.9, 0.1}, {0.3, 0.7}};
  const auto s = sample_markov_chain(t, 200000, 5);
  EXPECT_EQ(s[0], 0);
  double n0 = 0, n01 = 0, n1 = 0, n10 = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == 0) {
      ++n0;
      n01 += s[i + 1] == 1;
    } else {
      ++n1;
      n10 += s[i + 1] == 0;
    }
  }
  EXPECT_NEAR(n01 / n0, 0.1, 0.01);
  EXPECT_NEAR(n10 / n1, 0.3, 0.01);
  EXPECT_THROW(sample_markov_chain({{1.0, 0.0}}, 10, 1), std::invalid_argument);
}

TEST(PathIo, BinaryRoundTrip) {
  SamplePath p;
  p.values = {0.0, -1.5, 3.141592653589793, 1e-300, -0.0};
  std::stringstream buf;
  write_path_binary(p, buf);
  EXPECT_EQ(buf.str().size(), 16u + 8u * p.size());
  EXPECT_EQ(buf.str().substr(0, 4), "DRPT");
  const auto back = read_path_binary(buf);
  EXPECT_EQ(back.values, p.values);
  std::stringstream bad("XXXX0000000000000000");
  EXPECT_THROW(read_path_binary(bad), std::runtime_error);
}

TEST(PathIo, CsvRoundTrip) {
  SamplePath p;
  p.values = {0.1, -2.25, 1.0 / 3.0};
  std::stringstream buf;
  write_path_csv(p, buf);
  EXPECT_EQ(read_path_csv(buf).values, p.values);

  QuantizedPath q{{-3, 0, 7}, 16};
  std::stringstream qb;
  write_quantized_csv(q, qb);
  const auto qback = read_quantized_csv(qb);
  EXPECT_EQ(qback.m, 16);
  EXPECT_EQ(qback.codes, q.codes);
  std::stringstream missing("code\n1\n");
  EXPECT_THROW(read_quantized_csv(missing), std::runtime_error);
}
