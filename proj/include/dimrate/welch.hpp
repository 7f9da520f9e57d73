#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dimrate {

struct WelchOptions {
  std::size_t segment = 4096;
  std::size_t step = 2048;  // 50% overlap
};

// Two-sided spectral density estimate on theta_k = k / segment,
// k = 0 .. segment / 2, so that integrate_even() approximates the variance.
struct WelchEstimate {
  std::vector<double> frequency;
  std::vector<double> density;
  std::size_t segments = 0;
};

// Hann-windowed, averaged periodograms of x minus its sample mean.
WelchEstimate welch_psd(std::span<const double> x, const WelchOptions& options = {});

// Integral over [-1/2, 1/2] of an even function given on theta_k = k / L,
// k = 0 .. L/2 (trapezoid on the periodic grid).
double integrate_even(std::span<const double> half_spectrum);

}  // namespace dimrate
