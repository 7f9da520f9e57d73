#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dimrate/processes.hpp"
#include "dimrate/scalar_density.hpp"

namespace dimrate {

// Entropy in nats with a jackknife standard error.
struct EntropyEstimate {
  double value = 0.0;
  std::size_t order = 0;          // context length j
  std::size_t samples = 0;        // number of (context, symbol) pairs counted
  double std_error = 0.0;
  std::size_t alphabet_size = 0;  // distinct symbols in the input
  std::size_t contexts = 0;       // distinct contexts of length j
};

struct EntropyOptions {
  // Add (K_joint - K_context) / (2 N) to the plug-in value.
  bool miller_madow = false;
  std::size_t max_contexts = 100'000'000;
};

// -sum p log p over the empirical symbol distribution.
EntropyEstimate plug_in_entropy(std::span<const std::int64_t> codes, const EntropyOptions& options = {});

// Empirical H(x_t | x_{t-j} .. x_{t-1}) from (j+1)-gram counts over t = j .. n-1.
EntropyEstimate empirical_conditional_entropy(std::span<const std::int64_t> codes, std::size_t order,
                                              const EntropyOptions& options = {});

// Plug-in entropy of the sliding k-blocks (x_t .. x_{t+k-1}).
EntropyEstimate block_entropy(std::span<const std::int64_t> codes, std::size_t block,
                              const EntropyOptions& options = {});

// Entropy rate of a finite Markov chain with row-stochastic `transition`.
// Throws std::invalid_argument unless the chain has a single closed class.
double markov_entropy_rate_exact(const std::vector<std::vector<double>>& transition);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

// Unweighted least squares y ~ slope x + intercept (at least two points).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct IdRateRow {
  std::int64_t m = 0;
  double log_m = 0.0;
  double entropy = 0.0;
  double std_error = 0.0;
  double ratio = 0.0;
};

struct IdRateEstimate {
  double d_hat = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  // d_hat fell outside [0, 1]; the value is reported unclamped.
  bool out_of_range = false;
  std::size_t order = 0;
  std::size_t fit_points = 0;
  std::size_t samples = 0;  // total (context, symbol) pairs per m, summed over paths
  std::size_t paths = 0;
  std::vector<IdRateRow> rows;
};

// Average H_j([X]_m) over paths for each m, then fit H = d log m + c over
// the largest ceil(|m_grid| / 2) resolutions.
IdRateEstimate id_rate_estimate(std::span<const SamplePath> paths, std::span<const std::int64_t> m_grid,
                                std::size_t order, const EntropyOptions& options = {});

// Fit over precomputed rows (same rule as id_rate_estimate).
IdRateEstimate fit_id_rate(std::vector<IdRateRow> rows, std::size_t order);

// H([X]_m) = -sum p_i log p_i from exact bin probabilities.
double quantized_entropy_iid(const ScalarDensity& density, std::int64_t m);

}  // namespace dimrate
