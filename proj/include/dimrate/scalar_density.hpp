#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dimrate {

// One-dimensional source distribution used by the analytic (bin-sum)
// operations: Gaussian, uniform, a point mass, or a discrete-continuous
// mixture weight * continuous + (1 - weight) * point mass.
class ScalarDensity {
 public:
  enum class Kind { gaussian, uniform, point, mixture };

  static ScalarDensity gaussian(double mean, double variance);
  static ScalarDensity uniform(double lo = 0.0, double hi = 1.0);
  static ScalarDensity point(double at);
  static ScalarDensity mixture(double continuous_weight, const ScalarDensity& continuous, double atom);

  Kind kind() const { return kind_; }
  double mean() const;
  double variance() const;
  std::string describe() const;

  // Standard-deviation style scale of the continuous part (0 for a point).
  double scale() const;

  // Probabilities of the bins [i/m, (i+1)/m) for i = first_code, ...
  // Gaussian tails beyond 8 sigma are folded into the end bins.
  struct Bins {
    std::int64_t first_code = 0;
    std::vector<double> probabilities;
  };
  Bins bin_probabilities(std::int64_t m) const;

  // Parameters.
  double gaussian_mean() const { return a_; }
  double gaussian_variance() const { return b_; }
  double lo() const { return a_; }
  double hi() const { return b_; }
  double atom() const { return atom_; }
  double continuous_weight() const { return weight_; }

 private:
  ScalarDensity() = default;
  Kind kind_ = Kind::point;
  Kind continuous_kind_ = Kind::point;
  double a_ = 0.0;
  double b_ = 0.0;
  double atom_ = 0.0;
  double weight_ = 1.0;
};

// Standard normal CDF and its complement, accurate in both tails.
double normal_cdf(double z);
double normal_sf(double z);

}  // namespace dimrate
