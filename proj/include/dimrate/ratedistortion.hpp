#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dimrate/scalar_density.hpp"
#include "dimrate/spectral.hpp"

namespace dimrate {

struct WaterfillResult {
  double rate = 0.0;         // nats per symbol
  double water_level = 0.0;  // kappa
  double distortion = 0.0;   // integral of min(kappa, S), recomputed
};

// Gaussian R(D) per symbol for a stationary source: kappa solves
// integral min(kappa, S) = D and R = 1/2 integral max(0, log(S / kappa)).
// For D >= total power the rate is zero and kappa is reported as the peak
// density. Piecewise-constant spectra are solved exactly; smooth ones by
// log-space bisection on the quadrature grid.
WaterfillResult reverse_waterfill_stationary(const SpectralModel& model, double distortion,
                                             QuadratureGrid grid = {});

// Discrete reverse waterfilling over covariance eigenvalues; total nats.
double vector_rd(std::span<const double> eigenvalues, double total_distortion);

struct RdPoint {
  double distortion = 0.0;
  double rate = 0.0;
  double water_level = 0.0;
};

struct RdCurve {
  std::vector<RdPoint> points;
  std::string source;
};

// Geometric grid from hi * variance down to lo * variance.
std::vector<double> default_distortion_grid(double variance, std::size_t points = 33, double hi = 1e-1,
                                            double lo = 1e-9);

RdCurve rd_curve(const SpectralModel& model, std::span<const double> distortions);

struct RdDimensionEstimate {
  std::vector<double> ratio;  // 2 R / (-log D)
  std::vector<double> slope;  // 2 dR / d(-log D), centered differences
  double dimension = 0.0;     // slope over the smallest-D pair
  double d_small = 0.0;       // D range of the extrapolation pair
  double d_large = 0.0;
  bool spans_six_decades = false;
};

RdDimensionEstimate rd_dimension_estimate(const RdCurve& curve);

struct AchievabilityReport {
  double quantized_entropy = 0.0;  // H([X]_m)
  double rate = 0.0;               // R(1 / m^2) of the i.i.d. Gaussian with the same variance
  double margin = 0.0;             // quantized_entropy - rate
};

AchievabilityReport quantizer_achievability_check(const ScalarDensity& density, std::int64_t m);

}  // namespace dimrate
