#include "dimrate/welch.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "dimrate/detail/fft.hpp"

namespace dimrate {

WelchEstimate welch_psd(std::span<const double> x, const WelchOptions& options) {
  const std::size_t len = options.segment;
  if (len < 2 || len % 2 != 0) throw std::invalid_argument("welch: segment length must be even and >= 2");
  if (options.step == 0) throw std::invalid_argument("welch: step must be positive");
  if (x.size() < len) throw std::invalid_argument("welch: input shorter than one segment");

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> window(len);
  double energy = 0.0;
  for (std::size_t t = 0; t < len; ++t) {
    // Periodic Hann.
    window[t] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(len));
    energy += window[t] * window[t];
  }

  const std::size_t bins = len / 2 + 1;
  WelchEstimate est;
  est.density.assign(bins, 0.0);
  est.frequency.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) est.frequency[k] = static_cast<double>(k) / static_cast<double>(len);

  detail::RealFft fft(len);
  std::vector<double> segment(len);
  std::vector<std::complex<double>> out(bins);
  for (std::size_t start = 0; start + len <= x.size(); start += options.step) {
    for (std::size_t t = 0; t < len; ++t) segment[t] = window[t] * (x[start + t] - mean);
    fft.transform(segment, out);
    for (std::size_t k = 0; k < bins; ++k) est.density[k] += std::norm(out[k]);
    ++est.segments;
  }
  const double scale = 1.0 / (energy * static_cast<double>(est.segments));
  for (double& v : est.density) v *= scale;
  return est;
}

double integrate_even(std::span<const double> half_spectrum) {
  const std::size_t bins = half_spectrum.size();
  if (bins < 2) throw std::invalid_argument("integrate_even: need at least two bins");
  const double len = 2.0 * static_cast<double>(bins - 1);
  double sum = half_spectrum.front() + half_spectrum.back();
  for (std::size_t k = 1; k + 1 < bins; ++k) sum += 2.0 * half_spectrum[k];
  return sum / len;
}

}  // namespace dimrate
