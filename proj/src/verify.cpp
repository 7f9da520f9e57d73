#include "dimrate/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dimrate/detail/kv.hpp"
#include "dimrate/entropy.hpp"
#include "dimrate/errors.hpp"
#include "dimrate/experiment.hpp"
#include "dimrate/gausstheory.hpp"
#include "dimrate/ratedistortion.hpp"

namespace dimrate {

namespace {

using detail::format_double;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CheckResult check(std::string name, std::string expected, double observed, std::string tolerance, bool pass) {
  return {std::move(name), std::move(expected), format_double(observed), std::move(tolerance), pass};
}

using Artifacts = std::vector<std::pair<std::string, CsvTable>>;

const double kHalfLogTwoPiE = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

void quantized_entropy_asymptotics(CriterionResult& r, Artifacts*) {
  const double h = quantized_entropy_iid(ScalarDensity::gaussian(0.0, 1.0), 1024);
  const double offset = h - std::log(1024.0);
  r.checks.push_back(check("H([X]_1024) - log 1024", format_double(kHalfLogTwoPiE), offset, "1e-3",
                           std::abs(offset - kHalfLogTwoPiE) <= 1e-3));
}

void rate_vs_entropy_dimension(CriterionResult& r, Artifacts*) {
  const std::vector<std::int64_t> grid{32, 128, 512, 1024};
  std::vector<double> gaps;
  for (auto m : grid) {
    const double md = static_cast<double>(m);
    const double log_m = std::log(md);
    const double rate = reverse_waterfill_stationary(SpectralModel::flat(1.0), 1.0 / (md * md)).rate;
    const double h = quantized_entropy_iid(ScalarDensity::gaussian(0.0, 1.0), m);
    gaps.push_back(std::abs(2.0 * rate / (2.0 * log_m) - h / log_m));
  }
  r.checks.push_back(check("ratio gap at m=1024", "0", gaps.back(), "0.05", gaps.back() <= 0.05));
  bool decreasing = true;
  std::string trail;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (i > 0 && !(gaps[i] < gaps[i - 1])) decreasing = false;
    trail += (i ? " " : "") + fmt(gaps[i]);
  }
  r.checks.push_back({"ratio gap decreasing over m=32,128,512,1024", "strictly decreasing", trail, "-", decreasing});
}

void rd_dimension_theorem3(CriterionResult& r, Artifacts* artifacts) {
  const auto grid = default_distortion_grid(1.0);
  // Index of D = 1e-8 on the geometric grid.
  const auto at = static_cast<std::size_t>(
      std::min_element(grid.begin(), grid.end(),
                       [](double a, double b) { return std::abs(std::log10(a) + 8.0) < std::abs(std::log10(b) + 8.0); }) -
      grid.begin());
  struct Case {
    std::string name;
    SpectralModel model;
    double expected;
    double tol;
  };
  const std::vector<Case> cases{{"band B=0.25", SpectralModel::unit_band(0.25), 0.5, 0.02},
                                {"ar1 a=0.5", SpectralModel::ar1(0.5, 1.0), 1.0, 0.02},
                                {"flat", SpectralModel::flat(1.0), 1.0, 1e-12}};
  for (const auto& c : cases) {
    const RdCurve curve = rd_curve(c.model, grid);
    const RdDimensionEstimate est = rd_dimension_estimate(curve);
    const double slope = est.slope[at];
    r.checks.push_back(check(c.name + " slope at D=" + fmt(grid[at]), format_double(c.expected), slope,
                             format_double(c.tol), std::abs(slope - c.expected) <= c.tol));
    if (c.tol < 1e-9) {
      double worst = 0.0;
      for (double v : est.ratio) worst = std::max(worst, std::abs(v - 1.0));
      r.checks.push_back(check("flat max |ratio - 1|", "0", worst, "1e-12", worst <= 1e-12));
    }
    if (artifacts != nullptr && c.model.kind() == SpectrumKind::band) {
      artifacts->emplace_back("rd_band.csv", rd_table(curve, est));
    }
  }
}

std::vector<std::int64_t> integer_range(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> v;
  for (auto m = lo; m <= hi; ++m) v.push_back(m);
  return v;
}

void example1_piecewise(CriterionResult& r, Artifacts* artifacts) {
  const auto grid = integer_range(4, 64);
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  for (double rho : {0.5, 0.25}) {
    ProcessDescriptor process;
    process.family = ProcessFamily::piecewise;
    process.piecewise.fresh_probability = rho;
    const auto paths = generate_paths(process, 1'000'000, seeds, false);
    const auto est = id_rate_estimate(paths, grid, 1);
    r.checks.push_back(check("d_hat piecewise rho=" + format_double(rho), format_double(rho), est.d_hat, "0.05",
                             std::abs(est.d_hat - rho) <= 0.05));
    if (artifacts != nullptr && rho == 0.5) artifacts->emplace_back("idr_piecewise.csv", idr_table(est));
  }
}

void example2_periodic(CriterionResult& r, Artifacts*) {
  ProcessDescriptor process;
  process.family = ProcessFamily::periodic;
  process.period = 4;
  const std::vector<std::int64_t> grid{4, 8, 16, 32, 64};
  const auto paths = generate_paths(process, 1'000'000, {1, 2, 3, 4}, false);
  const auto est = id_rate_estimate(paths, grid, 4);
  r.checks.push_back(check("d_hat periodic P=4, j=4", "0", est.d_hat, "0.02", std::abs(est.d_hat) <= 0.02));
}

void lemma4_bounds(CriterionResult& r, Artifacts*) {
  for (double variance : {0.25, 1.0, 4.0}) {
    for (std::int64_t m : {1, 4, 16, 64, 256, 1024}) {
      const std::string tag = "sigma2=" + format_double(variance) + " m=" + std::to_string(m);
      const double md = static_cast<double>(m);
      try {
        const auto bus = bussgang_a1(0.0, variance, m);
        const double dev = std::abs(1.0 - bus.a1);
        r.checks.push_back(check("|1-a1| " + tag, "<= " + fmt(bus.bound), dev, "1e-12", dev <= bus.bound + 1e-12));
      } catch (const NumericalError& e) {
        r.checks.push_back({"|1-a1| " + tag, "within bound", e.what(), "1e-12", false});
      }
      try {
        const double power = quantization_error_power(0.0, variance, m);
        r.checks.push_back(check("Var(X-Z) " + tag, "<= " + fmt(1.0 / (md * md)), power, "1e-12",
                                 power <= 1.0 / (md * md) + 1e-12));
      } catch (const NumericalError& e) {
        r.checks.push_back({"Var(X-Z) " + tag, "within bound", e.what(), "1e-12", false});
      }
    }
  }
}

void lemma4_sdf_relation(CriterionResult& r, Artifacts*) {
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8};
  const std::size_t n = std::size_t{1} << 18;
  const std::vector<std::pair<std::string, SpectralModel>> models{{"flat", SpectralModel::flat(1.0)},
                                                                  {"ar1 a=0.5", SpectralModel::ar1(0.5, 1.0)}};
  for (const auto& [name, model] : models) {
    for (std::int64_t m : {8, 32}) {
      const auto rep = sdf_relation_check(model, m, n, seeds);
      r.checks.push_back(check(name + " m=" + std::to_string(m) + " integrated residual (paired " +
                                   fmt(rep.paired_residual) + " +- " + fmt(rep.paired_tolerance) + ")",
                               "<= " + fmt(rep.bound) + " + " + fmt(rep.tolerance), rep.residual,
                               "5 SE = " + fmt(rep.tolerance), rep.pass));
    }
  }
}

void lemma7_prediction(CriterionResult& r, Artifacts* artifacts) {
  const auto band = prediction_variance(SpectralModel::unit_band(0.25), 50);
  const bool complete = !band.stopped_early && band.sigma2.size() == 50;
  double smallest = band.sigma2.empty() ? 0.0 : band.sigma2.front();
  for (double v : band.sigma2) smallest = std::min(smallest, v);
  r.checks.push_back(check("band min sigma2_k over k<=50" + std::string(complete ? "" : " (recursion stopped early)"),
                           "> 1e-10", smallest, "-", complete && smallest > 1e-10));
  const bool decay = band.sigma2.size() >= 50 && band.sigma2[49] < band.sigma2[4];
  r.checks.push_back(check("band sigma2_50 < sigma2_5 (sigma2_5 = " + fmt(band.sigma2.size() >= 5 ? band.sigma2[4] : NAN) + ")",
                           "< sigma2_5", band.sigma2.size() >= 50 ? band.sigma2[49] : NAN, "-", decay));
  const auto ar = prediction_variance(SpectralModel::ar1(0.5, 1.0), 50);
  double worst = ar.sigma2.size() == 50 ? 0.0 : INFINITY;
  for (double v : ar.sigma2) worst = std::max(worst, std::abs(v - 1.0));
  r.checks.push_back(check("ar1 max |sigma2_k - 1| over k<=50", "0", worst, "1e-9", worst <= 1e-9));
  if (artifacts != nullptr) artifacts->emplace_back("prediction_band.csv", prediction_table(band));
}

void dither_identity(CriterionResult& r, Artifacts*) {
  const std::vector<std::pair<std::string, ScalarDensity>> densities{
      {"uniform(0,1)", ScalarDensity::uniform(0.0, 1.0)},
      {"gaussian(0,1)", ScalarDensity::gaussian(0.0, 1.0)},
      {"gaussian(3,4)", ScalarDensity::gaussian(3.0, 4.0)}};
  for (const auto& [name, density] : densities) {
    double worst = 0.0;
    for (std::int64_t m : {8, 64, 256}) worst = std::max(worst, dither_entropy_identity_check(density, m).gap);
    r.checks.push_back(check(name + " max gap over m=8,64,256", "0", worst, "1e-9", worst <= 1e-9));
  }
}

void estimator_calibration(CriterionResult& r, Artifacts*) {
  std::uint64_t seed = 101;
  for (double flip : {0.1, 0.3, 0.5}) {
    const std::vector<std::vector<double>> p{{1.0 - flip, flip}, {flip, 1.0 - flip}};
    const double exact = markov_entropy_rate_exact(p);
    const auto codes = sample_markov_chain(p, 1'000'000, seed++);
    const auto est = empirical_conditional_entropy(codes, 1);
    const double diff = std::abs(est.value - exact);
    r.checks.push_back(check("flip=" + format_double(flip) + " H_1 (SE " + fmt(est.std_error) + ")",
                             format_double(exact), est.value, "min(5 SE, 0.01)",
                             diff <= 5.0 * est.std_error && diff <= 0.01));
  }
}

void achievability(CriterionResult& r, Artifacts*) {
  const std::vector<std::pair<std::string, ScalarDensity>> densities{
      {"gaussian(0,1)", ScalarDensity::gaussian(0.0, 1.0)}, {"uniform(0,1)", ScalarDensity::uniform(0.0, 1.0)}};
  for (const auto& [name, density] : densities) {
    double least = INFINITY;
    for (std::int64_t m : {2, 8, 32, 128}) least = std::min(least, quantizer_achievability_check(density, m).margin);
    r.checks.push_back(check(name + " min margin over m=2,8,32,128", ">= 0", least, "0", least >= 0.0));
  }
}

struct CriterionDef {
  const char* title;
  void (*run)(CriterionResult&, Artifacts*);
};

constexpr CriterionDef kCriteria[kCriterionCount] = {
    {"quantized Gaussian entropy offset", quantized_entropy_asymptotics},
    {"rate vs entropy dimension ratios (i.i.d. Gaussian)", rate_vs_entropy_dimension},
    {"rate-distortion dimension equals support measure", rd_dimension_theorem3},
    {"piecewise-constant process dimension rate", example1_piecewise},
    {"periodic process dimension rate", example2_periodic},
    {"Bussgang and quantization-error bounds", lemma4_bounds},
    {"quantized spectrum relation", lemma4_sdf_relation},
    {"prediction variance of band and AR(1) spectra", lemma7_prediction},
    {"dither entropy identity", dither_identity},
    {"conditional entropy estimator vs exact Markov rate", estimator_calibration},
    {"quantizer achievability margin", achievability},
};

}  // namespace

bool CriterionResult::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

bool VerificationReport::pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass(); });
}

CsvTable VerificationReport::table() const {
  CsvTable t({"criterion", "check", "expected", "observed", "tolerance", "pass"});
  for (const auto& c : criteria) {
    for (const auto& k : c.checks) {
      t.add_row({CsvTable::cell(c.id), k.name, k.expected, k.observed, k.tolerance, CsvTable::cell(k.pass)});
    }
  }
  return t;
}

CriterionResult run_criterion(int id, Artifacts* artifacts) {
  if (id < 1 || id > kCriterionCount) throw std::invalid_argument("criterion must lie in 1..11");
  const auto& def = kCriteria[id - 1];
  CriterionResult result;
  result.id = id;
  result.title = def.title;
  const auto start = std::chrono::steady_clock::now();
  try {
    def.run(result, artifacts);
  } catch (const std::exception& e) {
    result.checks.push_back({"error", "no exception", e.what(), "-", false});
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

VerificationReport run_acceptance_suite(const std::vector<int>& criteria) {
  VerificationReport report;
  std::vector<int> ids = criteria;
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  }
  for (int id : ids) report.criteria.push_back(run_criterion(id, &report.artifacts));
  return report;
}

std::string summary_line(const CriterionResult& result) {
  char head[16];
  std::snprintf(head, sizeof head, "c%02d %s", result.id, result.pass() ? "PASS" : "FAIL");
  std::string line = std::string(head) + "  " + result.title + "  |";
  for (std::size_t i = 0; i < result.checks.size(); ++i) {
    const auto& c = result.checks[i];
    if (result.checks.size() > 8 && c.pass) continue;  // long grids: list failures only
    line += (i ? "; " : " ") + c.name + ": " + c.observed + " (expected " + c.expected + ", tol " + c.tolerance + ")";
    if (!c.pass) line += " FAIL";
  }
  if (result.checks.size() > 8) {
    const auto passed = std::count_if(result.checks.begin(), result.checks.end(), [](const auto& c) { return c.pass; });
    line += " " + std::to_string(passed) + "/" + std::to_string(result.checks.size()) + " checks pass";
  }
  return line;
}

}  // namespace dimrate
