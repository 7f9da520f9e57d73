#include "dimrate/processes.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dimrate/detail/fft.hpp"
#include "dimrate/detail/kv.hpp"
#include "dimrate/errors.hpp"

namespace dimrate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

void require_length(std::size_t n) {
  if (n < 1) throw std::invalid_argument("sample path length must be at least 1");
}

// Stationary Gaussian with covariance given by the circulant whose
// eigenvalues are `eig`; writes the first values.size() samples.
void synthesize_circulant(std::span<const double> eig, std::mt19937_64& rng, std::span<double> values) {
  const std::size_t m = eig.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::complex<double>> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double scale = std::sqrt(std::max(eig[k], 0.0) / static_cast<double>(m));
    const double re = normal(rng);
    const double im = normal(rng);
    w[k] = {scale * re, scale * im};
  }
  detail::ComplexFft fft(m, false);
  fft.transform(w);
  for (std::size_t t = 0; t < values.size(); ++t) values[t] += w[t].real();
}

// Eigenvalues of the minimal circulant embedding of C(0..m/2).
std::vector<double> circulant_eigenvalues(std::span<const double> cov, std::size_t m) {
  std::vector<std::complex<double>> row(m);
  for (std::size_t k = 0; k < m; ++k) row[k] = cov[std::min(k, m - k)];
  detail::ComplexFft fft(m, false);
  fft.transform(row);
  std::vector<double> eig(m);
  for (std::size_t k = 0; k < m; ++k) eig[k] = row[k].real();
  return eig;
}

// Integral of the density over [lo, hi] (lo < hi within [-1/2, 1/2]).
double density_mass(const SpectralModel& model, double lo, double hi) {
  double total = 0.0;
  for (const auto& seg : model.segments()) {
    const double a = std::max(lo, seg.lo);
    const double b = std::min(hi, seg.hi);
    if (b <= a) continue;
    if (seg.smooth) {
      total += detail::gauss_legendre10([&](double t) { return model.density(t); }, a, b);
    } else {
      total += seg.level * (b - a);
    }
  }
  return total;
}

void add_dense_toeplitz(const SpectralModel& model, std::mt19937_64& rng, std::span<double> values,
                        SamplePath& path) {
  const std::size_t n = values.size();
  const auto cov = autocovariance_sequence(model, n - 1, false);
  Eigen::MatrixXd t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) t(i, j) = cov[i > j ? i - j : j - i];
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (std::size_t i = 0; i < n; ++i) z(i) = normal(rng);

  Eigen::LLT<Eigen::MatrixXd> llt(t);
  Eigen::VectorXd x;
  if (llt.info() == Eigen::Success) {
    x = llt.matrixL() * z;
    path.metadata.emplace_back("method", "dense-cholesky");
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    if (eig.info() != Eigen::Success) throw NumericalError("embedding failed: dense factorization did not converge");
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    x = eig.eigenvectors() * root.asDiagonal() * z;
    path.metadata.emplace_back("method", "dense-eigen");
  }
  for (std::size_t i = 0; i < n; ++i) values[i] += x(i);
}

void add_binned_spectrum(const SpectralModel& model, std::size_t n, std::mt19937_64& rng, std::span<double> values,
                         SamplePath& path) {
  const std::size_t m = std::max<std::size_t>(next_pow2(16 * n), std::size_t{1} << 20);
  std::vector<double> eig(m);
  const double width = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    // Bin centred on k/m, folded into [-1/2, 1/2].
    const double centre = (k <= m / 2) ? static_cast<double>(k) * width : (static_cast<double>(k) - static_cast<double>(m)) * width;
    const double lo = centre - 0.5 * width;
    const double hi = centre + 0.5 * width;
    double mass = 0.0;
    if (lo < -0.5) {
      mass = density_mass(model, -0.5, hi) + density_mass(model, lo + 1.0, 0.5);
    } else if (hi > 0.5) {
      mass = density_mass(model, lo, 0.5) + density_mass(model, -0.5, hi - 1.0);
    } else {
      mass = density_mass(model, lo, hi);
    }
    eig[k] = static_cast<double>(m) * mass;
  }
  synthesize_circulant(eig, rng, values);
  path.metadata.emplace_back("method", "binned-spectrum");
  path.metadata.emplace_back("embedding_size", std::to_string(m));
  path.metadata.emplace_back("approximate", "true");
}

void add_atoms(const SpectralModel& model, std::mt19937_64& rng, std::span<double> values) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& atom : model.atoms()) {
    const double f = atom.frequency;
    if (f < 0.0 && f != -0.5) continue;  // paired with +f
    if (f == 0.0 || std::abs(f) == 0.5) {
      const double amp = std::sqrt(atom.mass) * normal(rng);
      for (std::size_t t = 0; t < values.size(); ++t) {
        values[t] += (f == 0.0 || t % 2 == 0) ? amp : -amp;
      }
      continue;
    }
    // Pair (+f, -f), each of mass `atom.mass`: variance 2 * mass.
    const double scale = std::sqrt(2.0 * atom.mass);
    const double a = scale * normal(rng);
    const double b = scale * normal(rng);
    for (std::size_t t = 0; t < values.size(); ++t) {
      const double prod = static_cast<double>(t) * f;
      const double phase = kTwoPi * (prod - std::floor(prod));
      values[t] += a * std::cos(phase) + b * std::sin(phase);
    }
  }
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::gaussian: return "gaussian";
    case GeneratorKind::piecewise: return "piecewise";
    case GeneratorKind::periodic: return "periodic";
    case GeneratorKind::external: return "external";
  }
  return "unknown";
}

std::int64_t quantize_code(double x, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("quantize: resolution m must be >= 1");
  if (!std::isfinite(x)) throw std::invalid_argument("quantize: value must be finite");
  const double md = static_cast<double>(m);
  const double f = std::floor(x * md);
  if (std::abs(f) > 9.0e18) throw std::invalid_argument("quantize: code out of 64-bit range");
  auto c = static_cast<std::int64_t>(f);
  // x * m can round across an integer; re-anchor on the reconstruction rule.
  while (static_cast<double>(c) / md > x) --c;
  while (static_cast<double>(c + 1) / md <= x) ++c;
  return c;
}

double quantize(double x, std::int64_t m) { return static_cast<double>(quantize_code(x, m)) / static_cast<double>(m); }

std::vector<std::int64_t> quantize_values(std::span<const double> values, std::int64_t m) {
  std::vector<std::int64_t> codes(values.size());
  std::transform(values.begin(), values.end(), codes.begin(), [m](double v) { return quantize_code(v, m); });
  return codes;
}

QuantizedPath quantize_path(const SamplePath& path, std::int64_t m) { return {quantize_values(path.values, m), m}; }

std::vector<double> QuantizedPath::reconstruct() const {
  std::vector<double> out(codes.size());
  const double md = static_cast<double>(m);
  std::transform(codes.begin(), codes.end(), out.begin(), [md](std::int64_t c) { return static_cast<double>(c) / md; });
  return out;
}

InnovationDistribution InnovationDistribution::uniform() { return piecewise_linear({0.0, 1.0}, {1.0, 1.0}); }

InnovationDistribution InnovationDistribution::piecewise_linear(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() < 2 || knots.size() != values.size()) {
    throw std::invalid_argument("innovation distribution: need matching knots and values (at least two)");
  }
  if (knots.front() != 0.0 || knots.back() != 1.0) {
    throw std::invalid_argument("innovation distribution must be supported on [0,1]");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || knots[i] < 0.0 || knots[i] > 1.0) {
      throw std::invalid_argument("innovation distribution must be supported on [0,1]");
    }
    if (i > 0 && !(knots[i] > knots[i - 1])) throw std::invalid_argument("innovation distribution: knots must increase");
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw std::invalid_argument("innovation distribution: density values must be nonnegative");
    }
  }
  InnovationDistribution d;
  d.knots_ = std::move(knots);
  d.values_ = std::move(values);
  d.cumulative_.assign(d.knots_.size(), 0.0);
  for (std::size_t i = 1; i < d.knots_.size(); ++i) {
    d.cumulative_[i] = d.cumulative_[i - 1] + 0.5 * (d.values_[i] + d.values_[i - 1]) * (d.knots_[i] - d.knots_[i - 1]);
  }
  const double total = d.cumulative_.back();
  if (!(total > 0.0)) throw std::invalid_argument("innovation distribution: zero total mass");
  for (auto& v : d.values_) v /= total;
  for (auto& c : d.cumulative_) c /= total;
  d.cumulative_.back() = 1.0;
  return d;
}

double InnovationDistribution::pdf(double y) const {
  if (y < 0.0 || y > 1.0) return 0.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
  if (it == knots_.end()) return values_.back();
  const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const double t = (y - knots_[i]) / (knots_[i + 1] - knots_[i]);
  return values_[i] + t * (values_[i + 1] - values_[i]);
}

double InnovationDistribution::cdf(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
  const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const double d = y - knots_[i];
  const double slope = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
  return cumulative_[i] + values_[i] * d + 0.5 * slope * d * d;
}

double InnovationDistribution::inverse_cdf(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return 1.0;
  auto i = static_cast<std::size_t>(it - cumulative_.begin());
  i = (i == 0) ? 0 : i - 1;
  const double r = u - cumulative_[i];
  const double f0 = values_[i];
  const double slope = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
  const double disc = std::max(f0 * f0 + 2.0 * slope * r, 0.0);
  const double denom = f0 + std::sqrt(disc);
  const double d = denom > 0.0 ? 2.0 * r / denom : 0.0;
  return std::clamp(knots_[i] + d, knots_[i], knots_[i + 1]);
}

std::string InnovationDistribution::describe() const {
  if (is_uniform()) return "uniform";
  std::string out = "pwl:";
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (i != 0) out += ",";
    out += detail::format_double(knots_[i]) + "/" + detail::format_double(values_[i]);
  }
  return out;
}

PeriodicSpec PeriodicSpec::uniform_base(std::size_t period, std::uint64_t seed) {
  if (period < 1) throw std::invalid_argument("periodic process: period must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PeriodicSpec spec;
  spec.base.resize(period);
  for (auto& v : spec.base) v = u(rng);
  return spec;
}

SamplePath sample_gaussian(const SpectralModel& model, std::size_t n, std::uint64_t seed,
                           const GaussianSamplerOptions& options) {
  require_length(n);
  SamplePath path;
  path.generator = GeneratorKind::gaussian;
  path.descriptor = std::string(to_string(model.kind()));
  path.seed = seed;
  path.values.assign(n, model.mean());
  std::mt19937_64 rng(seed);

  if (model.has_density()) {
    const bool discontinuous = model.kind() == SpectrumKind::band || model.kind() == SpectrumKind::table;
    const double tol = discontinuous ? options.discontinuous_tolerance : options.tolerance;
    std::size_t m = std::max<std::size_t>(2, next_pow2(2 * (n - 1)));
    bool embedded = false;
    double worst_ratio = 0.0;
    while (m <= options.max_embedding) {
      const auto cov = autocovariance_sequence(model, m / 2, false);
      auto eig = circulant_eigenvalues(cov, m);
      const auto [mn, mx] = std::minmax_element(eig.begin(), eig.end());
      worst_ratio = *mx > 0.0 ? *mn / *mx : -1.0;
      if (*mn >= -tol * *mx) {
        synthesize_circulant(eig, rng, path.values);
        path.metadata.emplace_back("method", "circulant-embedding");
        path.metadata.emplace_back("embedding_size", std::to_string(m));
        path.metadata.emplace_back("embedding_tolerance", detail::format_double(tol));
        path.metadata.emplace_back("min_eigenvalue_ratio", detail::format_double(worst_ratio));
        embedded = true;
        break;
      }
      m *= 2;
    }
    if (!embedded) {
      path.metadata.emplace_back("embedding_min_eigenvalue_ratio", detail::format_double(worst_ratio));
      if (n <= options.dense_limit) {
        add_dense_toeplitz(model, rng, path.values, path);
      } else if (options.allow_approximate) {
        add_binned_spectrum(model, n, rng, path.values, path);
      } else {
        throw NumericalError("embedding failed");
      }
    }
  }
  if (model.has_atoms()) add_atoms(model, rng, path.values);
  return path;
}

SamplePath sample_piecewise(const PiecewiseSpec& spec, std::size_t n, std::uint64_t seed) {
  require_length(n);
  const double rho = spec.fresh_probability;
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("piecewise process: rho must lie in [0,1]");
  SamplePath path;
  path.generator = GeneratorKind::piecewise;
  path.descriptor = "piecewise:" + detail::format_double(rho) + ":" + spec.innovation.describe();
  path.seed = seed;
  path.values.resize(n);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution fresh(rho);
  double x = spec.innovation.sample(rng);
  path.values[0] = x;
  for (std::size_t t = 1; t < n; ++t) {
    if (fresh(rng)) x = spec.innovation.sample(rng);
    path.values[t] = x;
  }
  return path;
}

SamplePath sample_periodic(const PeriodicSpec& spec, std::size_t n, std::uint64_t seed) {
  require_length(n);
  const std::size_t p = spec.period();
  if (p < 1) throw std::invalid_argument("periodic process: period must be >= 1");
  SamplePath path;
  path.generator = GeneratorKind::periodic;
  path.descriptor = "periodic:" + std::to_string(p);
  path.seed = seed;
  std::mt19937_64 rng(seed);
  const auto shift = std::uniform_int_distribution<std::size_t>(0, p - 1)(rng);
  path.values.resize(n);
  for (std::size_t t = 0; t < n; ++t) path.values[t] = spec.base[(t + shift) % p];
  path.metadata.emplace_back("shift", std::to_string(shift));
  return path;
}

std::vector<std::int64_t> sample_markov_chain(const std::vector<std::vector<double>>& transition, std::size_t n,
                                              std::uint64_t seed) {
  require_length(n);
  const std::size_t k = transition.size();
  if (k == 0) throw std::invalid_argument("Markov chain: empty transition matrix");
  std::vector<std::discrete_distribution<std::int64_t>> rows;
  for (const auto& row : transition) {
    if (row.size() != k) throw std::invalid_argument("Markov chain: transition matrix must be square");
    rows.emplace_back(row.begin(), row.end());
  }
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> states(n);
  std::int64_t state = 0;
  for (std::size_t t = 0; t < n; ++t) {
    states[t] = state;
    state = rows[static_cast<std::size_t>(state)](rng);
  }
  return states;
}

}  // namespace dimrate
