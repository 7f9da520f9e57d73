#include "dimrate/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dimrate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin(2 pi lag x) with the argument reduced modulo one period first, so
// dyadic breakpoints such as 1/4 stay exact at large lags.
double sin_two_pi(std::int64_t lag, double x) {
  const double prod = static_cast<double>(lag) * x;
  const double frac = prod - std::floor(prod);
  return std::sin(kTwoPi * frac);
}

double cos_two_pi(std::int64_t lag, double x) {
  const double prod = static_cast<double>(lag) * x;
  const double frac = prod - std::floor(prod);
  return std::cos(kTwoPi * frac);
}

double wrap(double theta) { return theta - std::round(theta); }

bool is_edge_harmonic(double theta) { return theta == 0.0 || std::abs(theta) == 0.5; }

void validate_atoms(const std::vector<SpectralAtom>& atoms) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.frequency) || a.frequency < -0.5 || a.frequency > 0.5) {
      throw std::invalid_argument("SpectralModel: atom frequency outside [-1/2, 1/2]");
    }
    if (!std::isfinite(a.mass) || a.mass <= 0.0) {
      throw std::invalid_argument("SpectralModel: atom masses must be positive");
    }
  }
  for (const auto& a : atoms) {
    if (is_edge_harmonic(a.frequency)) continue;
    const bool mirrored = std::any_of(atoms.begin(), atoms.end(), [&](const SpectralAtom& b) {
      return b.frequency == -a.frequency && std::abs(b.mass - a.mass) <= 1e-12 * std::max(a.mass, b.mass);
    });
    if (!mirrored) throw std::invalid_argument("SpectralModel: atoms must be symmetric in +/- frequency");
  }
}

}  // namespace

std::string_view to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::flat: return "flat";
    case SpectrumKind::band: return "band";
    case SpectrumKind::ar1: return "ar1";
    case SpectrumKind::atoms: return "atoms";
    case SpectrumKind::table: return "table";
  }
  return "unknown";
}

SpectralModel SpectralModel::flat(double level, double mean) {
  SpectralModel m;
  m.kind_ = SpectrumKind::flat;
  m.level_ = level;
  m.mean_ = mean;
  m.segments_ = {{-0.5, 0.5, false, level}};
  m.validate();
  return m;
}

SpectralModel SpectralModel::band(double half_width, double level, double mean) {
  if (!(half_width > 0.0 && half_width <= 0.5)) {
    throw std::invalid_argument("SpectralModel: band half-width must lie in (0, 1/2]");
  }
  SpectralModel m;
  m.kind_ = SpectrumKind::band;
  m.level_ = level;
  m.half_width_ = half_width;
  m.mean_ = mean;
  if (half_width < 0.5) m.segments_.push_back({-0.5, -half_width, false, 0.0});
  m.segments_.push_back({-half_width, half_width, false, level});
  if (half_width < 0.5) m.segments_.push_back({half_width, 0.5, false, 0.0});
  m.validate();
  return m;
}

SpectralModel SpectralModel::unit_band(double half_width, double mean) {
  if (!(half_width > 0.0 && half_width <= 0.5)) {
    throw std::invalid_argument("SpectralModel: band half-width must lie in (0, 1/2]");
  }
  return band(half_width, 1.0 / (2.0 * half_width), mean);
}

SpectralModel SpectralModel::ar1(double coefficient, double innovation_variance, double mean) {
  SpectralModel m;
  m.kind_ = SpectrumKind::ar1;
  m.coefficient_ = coefficient;
  m.innovation_ = innovation_variance;
  m.mean_ = mean;
  m.segments_ = {{-0.5, 0.5, true, 0.0}};
  m.validate();
  return m;
}

SpectralModel SpectralModel::point_spectrum(std::vector<SpectralAtom> atoms, double mean) {
  SpectralModel m;
  m.kind_ = SpectrumKind::atoms;
  m.atoms_ = std::move(atoms);
  m.mean_ = mean;
  m.segments_ = {{-0.5, 0.5, false, 0.0}};
  m.validate();
  return m;
}

SpectralModel SpectralModel::table(std::vector<double> cell_values, double mean) {
  SpectralModel m;
  m.kind_ = SpectrumKind::table;
  m.cells_ = std::move(cell_values);
  m.mean_ = mean;
  const auto k = m.cells_.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double lo = -0.5 + static_cast<double>(i) / static_cast<double>(k);
    const double hi = (i + 1 == k) ? 0.5 : -0.5 + static_cast<double>(i + 1) / static_cast<double>(k);
    m.segments_.push_back({lo, hi, false, m.cells_[i]});
  }
  m.validate();
  return m;
}

SpectralModel SpectralModel::with_atoms(std::vector<SpectralAtom> atoms) const {
  SpectralModel m = *this;
  m.atoms_.insert(m.atoms_.end(), atoms.begin(), atoms.end());
  m.validate();
  return m;
}

void SpectralModel::validate() const {
  if (!std::isfinite(mean_)) throw std::invalid_argument("SpectralModel: mean must be finite");
  switch (kind_) {
    case SpectrumKind::flat:
    case SpectrumKind::band:
      if (!std::isfinite(level_) || level_ < 0.0) {
        throw std::invalid_argument("SpectralModel: density level must be finite and nonnegative");
      }
      break;
    case SpectrumKind::ar1:
      if (!(std::abs(coefficient_) < 1.0)) {
        throw std::invalid_argument("SpectralModel: AR(1) coefficient must satisfy |a| < 1");
      }
      if (!(innovation_ > 0.0) || !std::isfinite(innovation_)) {
        throw std::invalid_argument("SpectralModel: AR(1) innovation variance must be positive");
      }
      break;
    case SpectrumKind::atoms:
      if (atoms_.empty()) throw std::invalid_argument("SpectralModel: point spectrum needs atoms");
      break;
    case SpectrumKind::table: {
      if (cells_.empty()) throw std::invalid_argument("SpectralModel: empty density table");
      const auto k = cells_.size();
      for (std::size_t i = 0; i < k; ++i) {
        if (!std::isfinite(cells_[i]) || cells_[i] < 0.0) {
          throw std::invalid_argument("SpectralModel: negative or non-finite density table entry");
        }
        if (cells_[i] != cells_[k - 1 - i]) {
          throw std::invalid_argument("SpectralModel: density table must be even-symmetric");
        }
      }
      break;
    }
  }
  validate_atoms(atoms_);
  const double power = total_power();
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw std::invalid_argument("SpectralModel: total power must be finite and positive");
  }
}

bool SpectralModel::has_density() const { return density_power() > 0.0; }

bool SpectralModel::piecewise_constant() const {
  return std::none_of(segments_.begin(), segments_.end(), [](const DensitySegment& s) { return s.smooth; });
}

double SpectralModel::density(double theta) const {
  theta = wrap(theta);
  switch (kind_) {
    case SpectrumKind::flat: return level_;
    case SpectrumKind::band: return std::abs(theta) <= half_width_ ? level_ : 0.0;
    case SpectrumKind::ar1: {
      // |1 - a e^{-i w}|^2 = 1 - 2 a cos w + a^2
      const double denom = 1.0 - 2.0 * coefficient_ * std::cos(kTwoPi * theta) + coefficient_ * coefficient_;
      return innovation_ / denom;
    }
    case SpectrumKind::atoms: return 0.0;
    case SpectrumKind::table: {
      const auto k = cells_.size();
      auto idx = static_cast<std::size_t>(std::floor((theta + 0.5) * static_cast<double>(k)));
      return cells_[std::min(idx, k - 1)];
    }
  }
  return 0.0;
}

double SpectralModel::segment_density(const DensitySegment& seg, double theta) const {
  return seg.smooth ? density(theta) : seg.level;
}

double SpectralModel::density_power() const {
  if (kind_ == SpectrumKind::ar1) return innovation_ / (1.0 - coefficient_ * coefficient_);
  double p = 0.0;
  for (const auto& s : segments_) p += s.level * (s.hi - s.lo);
  return p;
}

double SpectralModel::atom_power() const {
  double p = 0.0;
  for (const auto& a : atoms_) p += a.mass;
  return p;
}

double SpectralModel::peak_density() const {
  if (kind_ == SpectrumKind::ar1) {
    const double a = std::abs(coefficient_);
    return innovation_ / ((1.0 - a) * (1.0 - a));
  }
  double peak = 0.0;
  for (const auto& s : segments_) peak = std::max(peak, s.level);
  return peak;
}

std::size_t SpectralModel::segment_intervals(double length, QuadratureGrid grid) {
  auto n = static_cast<std::size_t>(std::llround(length * static_cast<double>(grid.intervals)));
  n = std::max<std::size_t>(n, 2);
  if (n % 2 != 0) ++n;
  return n;
}

double autocovariance(const SpectralModel& model, std::int64_t lag, QuadratureGrid grid) {
  lag = lag < 0 ? -lag : lag;  // C is even
  double c = 0.0;
  for (const auto& seg : model.segments()) {
    if (seg.smooth) {
      const auto n = SpectralModel::segment_intervals(seg.hi - seg.lo, grid);
      c += detail::simpson([&](double t) { return std::cos(kTwoPi * static_cast<double>(lag) * t) * model.density(t); },
                           seg.lo, seg.hi, n);
    } else if (seg.level != 0.0) {
      if (lag == 0) {
        c += seg.level * (seg.hi - seg.lo);
      } else {
        c += seg.level * (sin_two_pi(lag, seg.hi) - sin_two_pi(lag, seg.lo)) / (kTwoPi * static_cast<double>(lag));
      }
    }
  }
  for (const auto& a : model.atoms()) c += a.mass * cos_two_pi(lag, a.frequency);
  return c;
}

std::vector<double> autocovariance_sequence(const SpectralModel& model, std::size_t max_lag, bool include_atoms) {
  std::vector<double> c(max_lag + 1, 0.0);
  if (model.kind() == SpectrumKind::ar1) {
    const double a = model.coefficient();
    const double c0 = model.innovation_variance() / (1.0 - a * a);
    double pw = 1.0;
    for (std::size_t k = 0; k <= max_lag; ++k) {
      c[k] = c0 * pw;
      pw *= a;
    }
  } else {
    // Integral of a piecewise-constant density against cos: the sine terms
    // telescope to the jumps at each breakpoint.
    struct Jump {
      double at;
      double delta;
    };
    std::vector<Jump> jumps;
    const auto& segs = model.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const double left = segs[i].level;
      const double right = (i + 1 < segs.size()) ? segs[i + 1].level : 0.0;
      if (i == 0 && left != 0.0) jumps.push_back({segs[i].lo, -left});
      if (left != right) jumps.push_back({segs[i].hi, left - right});
    }
    c[0] = model.density_power();
    for (std::size_t k = 1; k <= max_lag; ++k) {
      const auto lag = static_cast<std::int64_t>(k);
      double acc = 0.0;
      for (const auto& j : jumps) acc += j.delta * sin_two_pi(lag, j.at);
      c[k] = acc / (kTwoPi * static_cast<double>(k));
    }
  }
  if (include_atoms) {
    for (const auto& a : model.atoms()) {
      for (std::size_t k = 0; k <= max_lag; ++k) c[k] += a.mass * cos_two_pi(static_cast<std::int64_t>(k), a.frequency);
    }
  }
  return c;
}

SzegoResult szego_entropy_rate(const SpectralModel& model, double log_floor, QuadratureGrid grid) {
  if (model.has_atoms()) throw std::invalid_argument("entropy-rate integral undefined for point spectrum");
  if (!(log_floor > 0.0)) throw std::invalid_argument("szego_entropy_rate: log floor must be positive");
  bool clipped = false;
  const double integral = model.integrate(
      [&](double, double s) {
        if (s < log_floor) {
          clipped = true;
          return std::log(log_floor);
        }
        return std::log(s);
      },
      grid);
  return {0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e) + 0.5 * integral, clipped};
}

SupportEstimate support_measure(const SpectralModel& model, double threshold, QuadratureGrid grid) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("support_measure: threshold must be nonnegative");
  double measure = 0.0;
  for (const auto& seg : model.segments()) {
    const double len = seg.hi - seg.lo;
    if (!seg.smooth) {
      if (seg.level > threshold) measure += len;
      continue;
    }
    const auto n = SpectralModel::segment_intervals(len, grid);
    const double h = len / static_cast<double>(n);
    std::size_t above = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (model.density(seg.lo + h * (static_cast<double>(i) + 0.5)) > threshold) ++above;
    }
    measure += h * static_cast<double>(above);
  }
  return {std::clamp(measure, 0.0, 1.0), threshold};
}

double default_support_threshold(const SpectralModel& model) { return 1e-12 * model.peak_density(); }

double gaussian_id_rate(const SpectralModel& model) { return support_measure(model, 0.0).measure; }

}  // namespace dimrate
