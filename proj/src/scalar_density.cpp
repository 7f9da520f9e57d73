#include "dimrate/scalar_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dimrate/detail/kv.hpp"
#include "dimrate/processes.hpp"

namespace dimrate {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

ScalarDensity ScalarDensity::gaussian(double mean, double variance) {
  if (!std::isfinite(mean) || !(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("gaussian density: need finite mean and positive variance");
  }
  ScalarDensity d;
  d.kind_ = Kind::gaussian;
  d.continuous_kind_ = Kind::gaussian;
  d.a_ = mean;
  d.b_ = variance;
  return d;
}

ScalarDensity ScalarDensity::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw std::invalid_argument("uniform density: need finite lo < hi");
  }
  ScalarDensity d;
  d.kind_ = Kind::uniform;
  d.continuous_kind_ = Kind::uniform;
  d.a_ = lo;
  d.b_ = hi;
  return d;
}

ScalarDensity ScalarDensity::point(double at) {
  if (!std::isfinite(at)) throw std::invalid_argument("point mass: location must be finite");
  ScalarDensity d;
  d.kind_ = Kind::point;
  d.atom_ = at;
  d.weight_ = 0.0;
  return d;
}

ScalarDensity ScalarDensity::mixture(double continuous_weight, const ScalarDensity& continuous, double atom) {
  if (!(continuous_weight >= 0.0 && continuous_weight <= 1.0)) {
    throw std::invalid_argument("mixture: continuous weight must lie in [0,1]");
  }
  if (continuous.kind_ != Kind::gaussian && continuous.kind_ != Kind::uniform) {
    throw std::invalid_argument("mixture: continuous part must be gaussian or uniform");
  }
  if (!std::isfinite(atom)) throw std::invalid_argument("mixture: atom must be finite");
  ScalarDensity d = continuous;
  d.kind_ = Kind::mixture;
  d.atom_ = atom;
  d.weight_ = continuous_weight;
  return d;
}

double ScalarDensity::mean() const {
  double cm = 0.0;
  if (continuous_kind_ == Kind::gaussian) cm = a_;
  if (continuous_kind_ == Kind::uniform) cm = 0.5 * (a_ + b_);
  return weight_ * cm + (1.0 - weight_) * atom_;
}

double ScalarDensity::variance() const {
  double cm = 0.0;
  double cv = 0.0;
  if (continuous_kind_ == Kind::gaussian) {
    cm = a_;
    cv = b_;
  } else if (continuous_kind_ == Kind::uniform) {
    cm = 0.5 * (a_ + b_);
    cv = (b_ - a_) * (b_ - a_) / 12.0;
  }
  const double mu = mean();
  return weight_ * (cv + (cm - mu) * (cm - mu)) + (1.0 - weight_) * (atom_ - mu) * (atom_ - mu);
}

double ScalarDensity::scale() const {
  if (continuous_kind_ == Kind::gaussian) return std::sqrt(b_);
  if (continuous_kind_ == Kind::uniform) return b_ - a_;
  return 0.0;
}

std::string ScalarDensity::describe() const {
  using detail::format_double;
  std::string cont;
  if (continuous_kind_ == Kind::gaussian) cont = "gaussian(" + format_double(a_) + "," + format_double(b_) + ")";
  if (continuous_kind_ == Kind::uniform) cont = "uniform(" + format_double(a_) + "," + format_double(b_) + ")";
  switch (kind_) {
    case Kind::point: return "point(" + format_double(atom_) + ")";
    case Kind::mixture:
      return "mixture(" + format_double(weight_) + "," + cont + ",point(" + format_double(atom_) + "))";
    default: return cont;
  }
}

ScalarDensity::Bins ScalarDensity::bin_probabilities(std::int64_t m) const {
  if (m < 1) throw std::invalid_argument("bin_probabilities: m must be >= 1");
  const double md = static_cast<double>(m);
  Bins bins;
  std::int64_t lo_code = 0;
  std::int64_t hi_code = 0;
  if (continuous_kind_ == Kind::gaussian) {
    const double sd = std::sqrt(b_);
    lo_code = quantize_code(a_ - 8.0 * sd, m);
    hi_code = quantize_code(a_ + 8.0 * sd, m);
  } else if (continuous_kind_ == Kind::uniform) {
    lo_code = quantize_code(a_, m);
    hi_code = quantize_code(b_, m);
    // The right endpoint has zero mass; drop its bin when it starts exactly there.
    if (static_cast<double>(hi_code) / md >= b_ && hi_code > lo_code) --hi_code;
  }
  const std::int64_t atom_code = quantize_code(atom_, m);
  if (kind_ == Kind::point) {
    lo_code = hi_code = atom_code;
  } else if (kind_ == Kind::mixture) {
    lo_code = std::min(lo_code, atom_code);
    hi_code = std::max(hi_code, atom_code);
  }

  bins.first_code = lo_code;
  bins.probabilities.assign(static_cast<std::size_t>(hi_code - lo_code + 1), 0.0);
  auto& p = bins.probabilities;

  if (continuous_kind_ == Kind::gaussian && weight_ > 0.0) {
    const double mu = a_;
    const double sd = std::sqrt(b_);
    const std::int64_t g_lo = quantize_code(mu - 8.0 * sd, m);
    const std::int64_t g_hi = quantize_code(mu + 8.0 * sd, m);
    for (std::int64_t i = g_lo; i <= g_hi; ++i) {
      // Tails beyond the truncation are folded into the end bins.
      const double za = (i == g_lo) ? -INFINITY : (static_cast<double>(i) / md - mu) / sd;
      const double zb = (i == g_hi) ? INFINITY : (static_cast<double>(i + 1) / md - mu) / sd;
      // Difference on the side of the mean where the tail is small.
      const double mass = (za >= 0.0) ? normal_sf(za) - normal_sf(zb) : normal_cdf(zb) - normal_cdf(za);
      p[static_cast<std::size_t>(i - lo_code)] += weight_ * mass;
    }
  } else if (continuous_kind_ == Kind::uniform && weight_ > 0.0) {
    const double width = (b_ - a_) * md;
    const std::int64_t u_lo = quantize_code(a_, m);
    const std::int64_t u_hi = quantize_code(b_, m);
    for (std::int64_t i = u_lo; i <= u_hi; ++i) {
      // Overlap measured in units of the bin width, so unit-aligned bins give exactly 1/m.
      const double left = std::max(a_ * md, static_cast<double>(i));
      const double right = std::min(b_ * md, static_cast<double>(i + 1));
      if (right <= left) continue;
      p[static_cast<std::size_t>(i - lo_code)] += weight_ * (right - left) / width;
    }
  }
  if (kind_ == Kind::point || kind_ == Kind::mixture) {
    p[static_cast<std::size_t>(atom_code - lo_code)] += 1.0 - weight_;
  }
  return bins;
}

}  // namespace dimrate
