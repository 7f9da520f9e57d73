#include "dimrate/gausstheory.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dimrate/detail/parallel.hpp"
#include "dimrate/detail/quadrature.hpp"
#include "dimrate/entropy.hpp"
#include "dimrate/errors.hpp"
#include "dimrate/welch.hpp"

namespace dimrate {

namespace {

void require_gaussian_args(double mean, double variance, std::int64_t m) {
  if (!std::isfinite(mean)) throw std::invalid_argument("mean must be finite");
  if (!(variance > 0.0) || !std::isfinite(variance)) throw std::invalid_argument("variance must be positive");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
}

// Sum over bins i of the integral of f(x, i/m) * phi(x) over bin i within
// mean +- 8 sd, each bin split into pieces no wider than sd / 4.
template <class F>
double bin_quadrature(double mean, double variance, std::int64_t m, F&& f) {
  const double sd = std::sqrt(variance);
  const double md = static_cast<double>(m);
  const double lo = mean - 8.0 * sd;
  const double hi = mean + 8.0 * sd;
  const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  auto phi = [&](double x) {
    const double z = (x - mean) / sd;
    return norm * std::exp(-0.5 * z * z);
  };
  double total = 0.0;
  for (std::int64_t i = quantize_code(lo, m); i <= quantize_code(hi, m); ++i) {
    const double level = static_cast<double>(i) / md;
    const double a = std::max(lo, level);
    const double b = std::min(hi, static_cast<double>(i + 1) / md);
    if (b <= a) continue;
    const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / (0.25 * sd)));
    const double h = (b - a) / static_cast<double>(pieces);
    for (std::size_t p = 0; p < pieces; ++p) {
      const double x0 = a + h * static_cast<double>(p);
      total += detail::gauss_legendre10([&](double x) { return f(x, level) * phi(x); }, x0, x0 + h);
    }
  }
  return total;
}

// Extended precision for the Levinson recursion, which amplifies rounding
// error geometrically when reflection coefficients are large.
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;

Real sin_two_pi(std::int64_t lag, double x) {
  const Real prod = Real(lag) * Real(x);
  return sin(2 * boost::math::constants::pi<Real>() * (prod - floor(prod)));
}

Real cos_two_pi(std::int64_t lag, double x) {
  const Real prod = Real(lag) * Real(x);
  return cos(2 * boost::math::constants::pi<Real>() * (prod - floor(prod)));
}

// C(0..max_lag) of the model in extended precision: geometric for AR(1),
// jump sums of sines for piecewise-constant densities, cosines for atoms.
std::vector<Real> precise_autocovariance(const SpectralModel& model, std::size_t max_lag) {
  std::vector<Real> c(max_lag + 1, Real(0));
  if (model.kind() == SpectrumKind::ar1) {
    const Real a = model.coefficient();
    Real pw = Real(model.innovation_variance()) / (1 - a * a);
    for (std::size_t k = 0; k <= max_lag; ++k) {
      c[k] = pw;
      pw *= a;
    }
  } else {
    const auto& segs = model.segments();
    for (const auto& seg : segs) c[0] += Real(seg.level) * (Real(seg.hi) - Real(seg.lo));
    for (std::size_t k = 1; k <= max_lag; ++k) {
      const auto lag = static_cast<std::int64_t>(k);
      Real acc = 0;
      for (const auto& seg : segs) {
        if (seg.level != 0.0) acc += Real(seg.level) * (sin_two_pi(lag, seg.hi) - sin_two_pi(lag, seg.lo));
      }
      c[k] = acc / (2 * boost::math::constants::pi<Real>() * Real(lag));
    }
  }
  for (const auto& atom : model.atoms()) {
    for (std::size_t k = 0; k <= max_lag; ++k) {
      c[k] += Real(atom.mass) * cos_two_pi(static_cast<std::int64_t>(k), atom.frequency);
    }
  }
  return c;
}

}  // namespace

BussgangReport bussgang_a1(double mean, double variance, std::int64_t m) {
  require_gaussian_args(mean, variance, m);
  BussgangReport rep;
  rep.m = m;
  rep.mean = mean;
  rep.variance = variance;
  rep.bound = std::sqrt(2.0 / (std::numbers::pi * variance)) / static_cast<double>(m);
  // 1 - a1 = E[(X - mu)(X - Z)] / sigma^2, which avoids cancelling two O(1) terms.
  const double gap =
      bin_quadrature(mean, variance, m, [&](double x, double z) { return (x - mean) * (x - z); }) / variance;
  rep.a1 = 1.0 - gap;
  if (std::abs(gap) > rep.bound + 1e-12) throw NumericalError("Bussgang bound violated");
  return rep;
}

double quantization_error_power(double mean, double variance, std::int64_t m) {
  require_gaussian_args(mean, variance, m);
  const double first = bin_quadrature(mean, variance, m, [](double x, double z) { return x - z; });
  const double second = bin_quadrature(mean, variance, m, [](double x, double z) { return (x - z) * (x - z); });
  const double power = second - first * first;
  const double md = static_cast<double>(m);
  if (power > 1.0 / (md * md) + 1e-12) throw NumericalError("quantization error power exceeds 1/m^2");
  return power;
}

PredictionVariance prediction_variance(const SpectralModel& model, std::size_t k_max) {
  if (k_max < 1) throw std::invalid_argument("prediction variance: k_max must be >= 1");
  const auto c = precise_autocovariance(model, k_max);
  if (!(c[0] > 0)) throw std::invalid_argument("prediction variance: C(0) must be positive");

  PredictionVariance out;
  out.variance = static_cast<double>(c[0]);
  out.requested = k_max;
  out.model = to_text(model);
  // Rounding error in the recursion grows by up to (1 + |r|) / (1 - |r|) per
  // step; stop once that growth has used up all but double precision.
  const Real budget = pow(Real(10), -(std::numeric_limits<Real>::digits10 - 20));
  Real growth = 1;
  std::vector<Real> alpha;  // alpha[l - 1] multiplies X_{k - l}
  std::vector<Real> next;
  Real err = c[0];
  for (std::size_t k = 1; k <= k_max; ++k) {
    Real acc = c[k];
    for (std::size_t l = 1; l < k; ++l) acc -= alpha[l - 1] * c[k - l];
    const Real reflection = acc / err;
    const Real mag = abs(reflection);
    if (!(mag <= Real(1) - Real(1e-12))) {
      out.stopped_early = true;
      break;
    }
    growth *= (1 + mag) / (1 - mag);
    next.assign(k, Real(0));
    for (std::size_t l = 1; l < k; ++l) next[l - 1] = alpha[l - 1] - reflection * alpha[k - l - 1];
    next[k - 1] = reflection;
    alpha.swap(next);
    err *= (1 - reflection) * (1 + reflection);
    if (growth * budget * c[0] > err * Real(1e-3)) {
      out.stopped_early = true;
      break;
    }
    out.sigma2.push_back(static_cast<double>(err));
  }
  return out;
}

DitherReport dither_entropy_identity_check(const ScalarDensity& density, std::int64_t m) {
  DitherReport rep;
  rep.lhs = quantized_entropy_iid(density, m);
  // Z + U has density p_i m on bin i, so h(Z + U) = -sum p_i log(p_i m).
  const auto bins = density.bin_probabilities(m);
  const double log_m = std::log(static_cast<double>(m));
  double h = 0.0;
  double mass = 0.0;
  for (double p : bins.probabilities) {
    if (p <= 0.0) continue;
    h -= p * (std::log(p) + log_m);
    mass += p;
  }
  rep.rhs = h + mass * log_m;
  rep.gap = std::abs(rep.lhs - rep.rhs);
  return rep;
}

SdfRelationReport sdf_relation_check(const SpectralModel& model, std::int64_t m, std::size_t n,
                                     std::span<const std::uint64_t> seeds, const SdfRelationOptions& options) {
  if (model.has_atoms()) throw std::invalid_argument("SDF relation check needs a spectrum without atoms");
  if (n < (std::size_t{1} << 16)) throw std::invalid_argument("SDF relation check needs n >= 2^16");
  if (seeds.size() < 2) throw std::invalid_argument("SDF relation check needs at least two seeds");

  const BussgangReport bus = bussgang_a1(model.mean(), model.total_power(), m);
  const double gain = 2.0 * bus.a1 - 1.0;
  const WelchOptions welch{options.segment, options.segment / 2};

  std::vector<WelchEstimate> z_est(seeds.size());
  std::vector<WelchEstimate> x_est(seeds.size());
  detail::parallel_for(seeds.size(), [&](std::size_t s) {
    SamplePath path = sample_gaussian(model, n, seeds[s], options.sampler);
    x_est[s] = welch_psd(path.values, welch);
    for (double& v : path.values) v = quantize(v, m);
    z_est[s] = welch_psd(path.values, welch);
  });

  const std::size_t bins = z_est.front().density.size();
  const double ns = static_cast<double>(seeds.size());
  std::vector<double> abs_resid(bins), se(bins), abs_paired(bins), se_paired(bins), mean_z(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double model_density = model.density(z_est.front().frequency[k]);
    double sz = 0.0, szz = 0.0, sq = 0.0, sqq = 0.0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const double z = z_est[s].density[k];
      const double q = z - gain * x_est[s].density[k];
      sz += z;
      szz += z * z;
      sq += q;
      sqq += q * q;
    }
    const double mz = sz / ns;
    const double mq = sq / ns;
    const double vz = std::max(0.0, (szz - ns * mz * mz) / (ns - 1.0));
    const double vq = std::max(0.0, (sqq - ns * mq * mq) / (ns - 1.0));
    mean_z[k] = mz;
    abs_resid[k] = std::abs(mz - gain * model_density);
    se[k] = std::sqrt(vz / ns);
    abs_paired[k] = std::abs(mq);
    se_paired[k] = std::sqrt(vq / ns);
  }

  SdfRelationReport rep;
  rep.m = m;
  rep.n = n;
  rep.seeds = seeds.size();
  rep.a1 = bus.a1;
  const double md = static_cast<double>(m);
  rep.bound = 1.0 / (md * md) + 1.0 / (12.0 * md * md);
  rep.residual = integrate_even(abs_resid);
  rep.tolerance = options.tolerance_multiplier * integrate_even(se);
  rep.paired_residual = integrate_even(abs_paired);
  rep.paired_tolerance = options.tolerance_multiplier * integrate_even(se_paired);
  rep.pass = rep.residual <= rep.bound + rep.tolerance;
  rep.frequency = z_est.front().frequency;
  rep.quantized_density = std::move(mean_z);
  return rep;
}

}  // namespace dimrate
