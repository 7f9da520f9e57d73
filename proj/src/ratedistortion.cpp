#include "dimrate/ratedistortion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dimrate/entropy.hpp"
#include "dimrate/errors.hpp"

namespace dimrate {

namespace {

// Spectrum tabulated once: constant pieces as (measure, level), smooth
// pieces as Simpson nodes and weights.
struct TabulatedSpectrum {
  std::vector<std::pair<double, double>> constant;  // (measure, level)
  std::vector<double> nodes;                        // S at smooth nodes
  std::vector<double> weights;

  double distortion(double kappa) const {
    double d = 0.0;
    for (const auto& [len, level] : constant) d += len * std::min(kappa, level);
    for (std::size_t i = 0; i < nodes.size(); ++i) d += weights[i] * std::min(kappa, nodes[i]);
    return d;
  }

  double rate(double kappa) const {
    double r = 0.0;
    for (const auto& [len, level] : constant) {
      if (level > kappa) r += len * (std::log(level) - std::log(kappa));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] > kappa) r += weights[i] * (std::log(nodes[i]) - std::log(kappa));
    }
    return 0.5 * r;
  }
};

TabulatedSpectrum tabulate(const SpectralModel& model, QuadratureGrid grid) {
  TabulatedSpectrum tab;
  std::map<double, double> levels;
  for (const auto& seg : model.segments()) {
    const double len = seg.hi - seg.lo;
    if (len <= 0.0) continue;
    if (!seg.smooth) {
      levels[seg.level] += len;
      continue;
    }
    const std::size_t n = SpectralModel::segment_intervals(len, grid);
    const double h = len / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      tab.nodes.push_back(model.density(seg.lo + h * static_cast<double>(i)));
      tab.weights.push_back(w * h / 3.0);
    }
  }
  for (const auto& [level, len] : levels) tab.constant.emplace_back(len, level);
  return tab;
}

// kappa with sum len * min(kappa, level) = target, levels ascending.
double solve_piecewise_linear(const std::vector<std::pair<double, double>>& pieces, double target) {
  double below = 0.0;  // sum of len * level over levels <= kappa
  double above = 0.0;  // measure with level > kappa
  for (const auto& [len, level] : pieces) above += len;
  for (const auto& [len, level] : pieces) {
    // Candidate with kappa <= level for this and all higher pieces.
    const double kappa = (target - below) / above;
    if (kappa <= level) return kappa;
    below += len * level;
    above -= len;
  }
  return pieces.empty() ? 0.0 : pieces.back().second;
}

}  // namespace

WaterfillResult reverse_waterfill_stationary(const SpectralModel& model, double distortion, QuadratureGrid grid) {
  if (model.has_atoms()) {
    throw std::invalid_argument("reverse waterfilling needs a spectrum without atoms");
  }
  if (!(distortion > 0.0) || !std::isfinite(distortion)) {
    throw std::invalid_argument("reverse waterfilling: distortion must be positive");
  }
  const double power = model.density_power();
  WaterfillResult out;
  if (distortion >= power) {
    out.water_level = model.peak_density();
    out.distortion = power;
    return out;
  }

  const TabulatedSpectrum tab = tabulate(model, grid);
  if (tab.nodes.empty()) {
    out.water_level = solve_piecewise_linear(tab.constant, distortion);
  } else {
    const double peak = model.peak_density();
    double lo = std::log(1e-18 * peak);
    double hi = std::log(peak);
    if (tab.distortion(std::exp(lo)) > distortion) {
      throw NumericalError("reverse waterfilling: distortion below the bisection bracket");
    }
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      if (tab.distortion(std::exp(mid)) < distortion) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.water_level = std::exp(0.5 * (lo + hi));
  }
  out.rate = tab.rate(out.water_level);
  out.distortion = tab.distortion(out.water_level);
  return out;
}

double vector_rd(std::span<const double> eigenvalues, double total_distortion) {
  if (!(total_distortion > 0.0)) throw std::invalid_argument("vector_rd: distortion must be positive");
  double sum = 0.0;
  for (double v : eigenvalues) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("vector_rd: eigenvalues must be >= 0");
    sum += v;
  }
  if (total_distortion >= sum) return 0.0;
  std::vector<std::pair<double, double>> pieces;
  for (double v : eigenvalues) pieces.emplace_back(1.0, v);
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  const double kappa = solve_piecewise_linear(pieces, total_distortion);
  double rate = 0.0;
  for (double v : eigenvalues) {
    if (v > kappa) rate += 0.5 * (std::log(v) - std::log(kappa));
  }
  return rate;
}

std::vector<double> default_distortion_grid(double variance, std::size_t points, double hi, double lo) {
  if (!(variance > 0.0)) throw std::invalid_argument("distortion grid: variance must be positive");
  if (points < 2 || !(hi > lo) || !(lo > 0.0)) throw std::invalid_argument("distortion grid: bad range");
  std::vector<double> grid(points);
  const double a = std::log10(hi);
  const double b = std::log10(lo);
  for (std::size_t i = 0; i < points; ++i) {
    const double e = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = variance * std::pow(10.0, e);
  }
  return grid;
}

RdCurve rd_curve(const SpectralModel& model, std::span<const double> distortions) {
  RdCurve curve;
  curve.source = to_text(model);
  curve.points.reserve(distortions.size());
  for (double d : distortions) {
    const auto w = reverse_waterfill_stationary(model, d);
    curve.points.push_back({d, w.rate, w.water_level});
  }
  return curve;
}

RdDimensionEstimate rd_dimension_estimate(const RdCurve& curve) {
  const auto& p = curve.points;
  if (p.size() < 3) throw std::invalid_argument("rd dimension: need at least three curve points");
  const std::size_t n = p.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p[i].distortion > 0.0)) throw std::invalid_argument("rd dimension: distortions must be positive");
    x[i] = -std::log(p[i].distortion);
  }
  RdDimensionEstimate est;
  est.ratio.resize(n);
  est.slope.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    est.ratio[i] = x[i] != 0.0 ? 2.0 * p[i].rate / x[i] : 0.0;
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? n - 1 : i + 1;
    if (x[b] == x[a]) throw std::invalid_argument("rd dimension: repeated distortion values");
    est.slope[i] = 2.0 * (p[b].rate - p[a].rate) / (x[b] - x[a]);
  }
  // Smallest-D pair, whichever end of the grid it sits at.
  const bool descending = p.front().distortion > p.back().distortion;
  const std::size_t s0 = descending ? n - 2 : 0;
  const std::size_t s1 = descending ? n - 1 : 1;
  est.dimension = 2.0 * (p[s1].rate - p[s0].rate) / (x[s1] - x[s0]);
  est.d_small = std::min(p[s0].distortion, p[s1].distortion);
  est.d_large = std::max(p[s0].distortion, p[s1].distortion);
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  est.spans_six_decades = (*mx - *mn) >= 6.0 * std::log(10.0) * (1.0 - 1e-12);
  return est;
}

AchievabilityReport quantizer_achievability_check(const ScalarDensity& density, std::int64_t m) {
  if (m < 2) throw std::invalid_argument("achievability check: m must be >= 2");
  AchievabilityReport rep;
  rep.quantized_entropy = quantized_entropy_iid(density, m);
  const double variance = density.variance();
  if (variance > 0.0) {
    const double md = static_cast<double>(m);
    rep.rate = reverse_waterfill_stationary(SpectralModel::flat(variance), 1.0 / (md * md)).rate;
  }
  rep.margin = rep.quantized_entropy - rep.rate;
  return rep;
}

}  // namespace dimrate
