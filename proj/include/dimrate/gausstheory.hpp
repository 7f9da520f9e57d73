#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dimrate/processes.hpp"
#include "dimrate/scalar_density.hpp"
#include "dimrate/spectral.hpp"

namespace dimrate {

struct BussgangReport {
  double a1 = 0.0;     // E[(X - mu) Z] / sigma^2
  double bound = 0.0;  // (1/m) sqrt(2 / (pi sigma^2))
  std::int64_t m = 1;
  double variance = 0.0;
  double mean = 0.0;
};

// Correlation coefficient between X ~ N(mean, variance) and Z = [X]_m by
// Gauss-Legendre quadrature on every bin within 8 standard deviations.
// Throws NumericalError("Bussgang bound violated") if |1 - a1| exceeds the
// bound by more than 1e-12.
BussgangReport bussgang_a1(double mean, double variance, std::int64_t m);

// Var(X - [X]_m) for X ~ N(mean, variance). Throws NumericalError if the
// result exceeds 1/m^2 + 1e-12.
double quantization_error_power(double mean, double variance, std::int64_t m);

struct PredictionVariance {
  // sigma2[k - 1] is the one-step prediction error variance from k past values.
  std::vector<double> sigma2;
  double variance = 0.0;  // C(0)
  // The recursion stopped early because a reflection coefficient reached
  // magnitude 1 - 1e-12 (numerically singular Toeplitz matrix).
  bool stopped_early = false;
  std::size_t requested = 0;
  std::string model;
};

PredictionVariance prediction_variance(const SpectralModel& model, std::size_t k_max);

struct DitherReport {
  double lhs = 0.0;  // H([X]_m)
  double rhs = 0.0;  // h([X]_m + U) + log m, U uniform on [0, 1/m)
  double gap = 0.0;
};

DitherReport dither_entropy_identity_check(const ScalarDensity& density, std::int64_t m);

struct SdfRelationOptions {
  std::size_t segment = 4096;
  double tolerance_multiplier = 5.0;
  GaussianSamplerOptions sampler{};
};

struct SdfRelationReport {
  std::int64_t m = 1;
  std::size_t n = 0;
  std::size_t seeds = 0;
  double a1 = 0.0;
  // Integral of |mean Welch density of Z - (2 a1 - 1) S_X|.
  double residual = 0.0;
  // Integral of the across-seed standard error of the Welch density of Z,
  // times the tolerance multiplier.
  double tolerance = 0.0;
  double bound = 0.0;  // 1/m^2 + 1/(12 m^2)
  // Same with S_X replaced by the Welch density of the same X paths.
  double paired_residual = 0.0;
  double paired_tolerance = 0.0;
  bool pass = false;  // residual <= bound + tolerance
  std::vector<double> frequency;
  std::vector<double> quantized_density;
};

SdfRelationReport sdf_relation_check(const SpectralModel& model, std::int64_t m, std::size_t n,
                                     std::span<const std::uint64_t> seeds, const SdfRelationOptions& options = {});

}  // namespace dimrate
