#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dimrate/detail/quadrature.hpp"

namespace dimrate {

// Point mass of the spectral distribution function at a harmonic in [-1/2, 1/2].
struct SpectralAtom {
  double frequency = 0.0;
  double mass = 0.0;
};

enum class SpectrumKind { flat, band, ar1, atoms, table };

std::string_view to_string(SpectrumKind kind);

// A stretch of [-1/2, 1/2] on which the density is either constant or smooth.
struct DensitySegment {
  double lo = 0.0;
  double hi = 0.0;
  bool smooth = false;  // evaluate SpectralModel::density(); otherwise `level`
  double level = 0.0;
};

// Number of Simpson intervals spread over [-1/2, 1/2].
struct QuadratureGrid {
  std::size_t intervals = std::size_t{1} << 14;
};

// Spectral distribution function on [-1/2, 1/2]: an absolutely continuous
// part with even density S(theta) plus symmetric atoms, and a process mean.
//
// Discontinuous densities (bands, tables) are stored as exact piecewise
// descriptors so band edges never depend on a grid. Only absolutely
// continuous plus atomic spectra are representable; singular-continuous
// components are not supported.
class SpectralModel {
 public:
  // S(theta) = level everywhere.
  static SpectralModel flat(double level, double mean = 0.0);
  // S(theta) = level for |theta| <= half_width, zero elsewhere.
  static SpectralModel band(double half_width, double level, double mean = 0.0);
  // Unit-power band: level = 1 / (2 half_width).
  static SpectralModel unit_band(double half_width, double mean = 0.0);
  // S(theta) = innovation / |1 - coefficient e^{-i 2 pi theta}|^2, |coefficient| < 1.
  static SpectralModel ar1(double coefficient, double innovation_variance, double mean = 0.0);
  // Pure point spectrum.
  static SpectralModel point_spectrum(std::vector<SpectralAtom> atoms, double mean = 0.0);
  // Piecewise-constant density on equal cells covering [-1/2, 1/2]; cell
  // values must be even-symmetric (values[i] == values[K-1-i]).
  static SpectralModel table(std::vector<double> cell_values, double mean = 0.0);

  // Copy with atoms added to the existing spectrum.
  SpectralModel with_atoms(std::vector<SpectralAtom> atoms) const;

  SpectrumKind kind() const { return kind_; }
  double mean() const { return mean_; }
  const std::vector<SpectralAtom>& atoms() const { return atoms_; }
  const std::vector<DensitySegment>& segments() const { return segments_; }

  bool has_density() const;
  bool has_atoms() const { return !atoms_.empty(); }
  // True when every segment is constant (flat, band, table, atoms-only).
  bool piecewise_constant() const;

  double density(double theta) const;
  double segment_density(const DensitySegment& seg, double theta) const;

  double density_power() const;  // integral of S
  double atom_power() const;     // sum of atom masses
  double total_power() const { return density_power() + atom_power(); }
  double peak_density() const;

  // Kind-specific parameters (zero when not applicable).
  double level() const { return level_; }
  double half_width() const { return half_width_; }
  double coefficient() const { return coefficient_; }
  double innovation_variance() const { return innovation_; }
  const std::vector<double>& cell_values() const { return cells_; }

  // Integral over [-1/2, 1/2] of f(theta, S(theta)) by composite Simpson on
  // each segment; intervals are distributed in proportion to segment length.
  template <class F>
  double integrate(F&& f, QuadratureGrid grid = {}) const {
    double total = 0.0;
    for (const auto& seg : segments_) {
      const double len = seg.hi - seg.lo;
      if (len <= 0.0) continue;
      const auto n = segment_intervals(len, grid);
      if (seg.smooth) {
        total += detail::simpson([&](double t) { return f(t, density(t)); }, seg.lo, seg.hi, n);
      } else {
        const double s = seg.level;
        total += detail::simpson([&](double t) { return f(t, s); }, seg.lo, seg.hi, n);
      }
    }
    return total;
  }

  static std::size_t segment_intervals(double length, QuadratureGrid grid);

 private:
  SpectralModel() = default;
  void validate() const;

  SpectrumKind kind_ = SpectrumKind::flat;
  double mean_ = 0.0;
  double level_ = 0.0;
  double half_width_ = 0.0;
  double coefficient_ = 0.0;
  double innovation_ = 0.0;
  std::vector<double> cells_;
  std::vector<SpectralAtom> atoms_;
  std::vector<DensitySegment> segments_;
};

// C_X(tau) = integral of cos(2 pi tau theta) dF_X(theta). Constant segments
// are integrated exactly; smooth segments by composite Simpson.
double autocovariance(const SpectralModel& model, std::int64_t lag, QuadratureGrid grid = {});

// C_X(0..max_lag) from closed forms (geometric for AR(1), sine differences
// for constant segments, cosines for atoms). Accurate at any lag.
std::vector<double> autocovariance_sequence(const SpectralModel& model, std::size_t max_lag,
                                            bool include_atoms = true);

struct SzegoResult {
  double value = 0.0;
  // Set when log(S) was clipped at the floor somewhere: the true value is
  // then -infinity or below the returned number.
  bool clipped = false;
};

// 1/2 log(2 pi e) + 1/2 integral of log(max(S, log_floor)). Throws
// std::invalid_argument for spectra with atoms.
SzegoResult szego_entropy_rate(const SpectralModel& model, double log_floor = 1e-300,
                               QuadratureGrid grid = {});

struct SupportEstimate {
  double measure = 0.0;
  double threshold = 0.0;
};

// Lebesgue measure of {theta : S(theta) > threshold}. Exact on constant
// segments; midpoint classification on the Simpson grid for smooth ones.
// Atoms contribute nothing.
SupportEstimate support_measure(const SpectralModel& model, double threshold,
                                QuadratureGrid grid = {});

// 1e-12 of the peak density.
double default_support_threshold(const SpectralModel& model);

// Information dimension rate of the stationary Gaussian process with this
// spectrum: the Lebesgue measure of {theta : F'_X(theta) > 0}.
double gaussian_id_rate(const SpectralModel& model);

// Plain-text key = value description (see README for the keys).
std::string to_text(const SpectralModel& model);
SpectralModel spectral_model_from_text(std::string_view text);

}  // namespace dimrate
