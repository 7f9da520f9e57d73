#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dimrate/spectral.hpp"

namespace dimrate {

enum class GeneratorKind { gaussian, piecewise, periodic, external };

std::string_view to_string(GeneratorKind kind);

// Finite realization of a stationary process.
struct SamplePath {
  std::vector<double> values;
  GeneratorKind generator = GeneratorKind::external;
  std::string descriptor;
  std::uint64_t seed = 0;
  // Free-form generator notes (embedding size, tolerances, fallbacks).
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t size() const { return values.size(); }
};

// Integer codes i_t = floor(m x_t); reconstruction i_t / m.
struct QuantizedPath {
  std::vector<std::int64_t> codes;
  std::int64_t m = 1;

  std::vector<double> reconstruct() const;
};

// floor(m x) with the guarantee code/m <= x < (code+1)/m in floating point.
std::int64_t quantize_code(double x, std::int64_t m);
// floor(m x) / m.
double quantize(double x, std::int64_t m);

std::vector<std::int64_t> quantize_values(std::span<const double> values, std::int64_t m);
QuantizedPath quantize_path(const SamplePath& path, std::int64_t m);

// Distribution of the fresh draws Y_t, supported on [0, 1].
class InnovationDistribution {
 public:
  static InnovationDistribution uniform();
  // Piecewise-linear density through (knots[i], values[i]); knots must be
  // increasing, start at 0, end at 1. Values are normalized to unit mass.
  static InnovationDistribution piecewise_linear(std::vector<double> knots, std::vector<double> values);

  bool is_uniform() const { return knots_.size() == 2 && values_[0] == values_[1]; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

  double pdf(double y) const;
  double cdf(double y) const;
  double inverse_cdf(double u) const;

  template <class Rng>
  double sample(Rng& rng) const {
    return inverse_cdf(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
  }

  std::string describe() const;

 private:
  InnovationDistribution() = default;
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

// X_t = B_t X_{t-1} + (1 - B_t) Y_t with P(B_t = 0) = fresh_probability.
struct PiecewiseSpec {
  double fresh_probability = 0.5;
  InnovationDistribution innovation = InnovationDistribution::uniform();
};

// X_t = base[(t + shift) mod P], shift uniform on {0..P-1}.
struct PeriodicSpec {
  std::vector<double> base;

  std::size_t period() const { return base.size(); }
  // P i.i.d. uniform(0,1) base samples drawn from `seed`.
  static PeriodicSpec uniform_base(std::size_t period, std::uint64_t seed);
};

struct GaussianSamplerOptions {
  // Largest circulant embedding attempted before declaring failure.
  std::size_t max_embedding = std::size_t{1} << 22;
  // Negative circulant eigenvalues up to tolerance * max are clamped to zero.
  double tolerance = 1e-8;
  // Tolerance used for spectra with discontinuous densities (bands, tables).
  double discontinuous_tolerance = 1e-6;
  // Dense Toeplitz factorization is used when embedding fails and n <= this.
  std::size_t dense_limit = 4096;
  // When embedding fails for larger n, synthesize from the bin-integrated
  // spectrum instead of throwing; the path is flagged approximate.
  bool allow_approximate = false;
};

SamplePath sample_gaussian(const SpectralModel& model, std::size_t n, std::uint64_t seed,
                           const GaussianSamplerOptions& options = {});
SamplePath sample_piecewise(const PiecewiseSpec& spec, std::size_t n, std::uint64_t seed);
SamplePath sample_periodic(const PeriodicSpec& spec, std::size_t n, std::uint64_t seed);

// Finite-state Markov chain started in state 0; states are row indices.
std::vector<std::int64_t> sample_markov_chain(const std::vector<std::vector<double>>& transition, std::size_t n,
                                              std::uint64_t seed);

// Binary column file: 16-byte little-endian header (magic "DRPT", uint32
// version, uint64 n) followed by n little-endian IEEE-754 doubles.
void write_path_binary(const SamplePath& path, std::ostream& out);
SamplePath read_path_binary(std::istream& in);
void write_path_binary(const SamplePath& path, const std::filesystem::path& file);
SamplePath read_path_binary(const std::filesystem::path& file);

// CSV with a single column "x".
void write_path_csv(const SamplePath& path, std::ostream& out);
SamplePath read_path_csv(std::istream& in);

// "# m=<m>" comment line, then a "code" column.
void write_quantized_csv(const QuantizedPath& path, std::ostream& out);
QuantizedPath read_quantized_csv(std::istream& in);

}  // namespace dimrate
