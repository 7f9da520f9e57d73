#include "dimrate/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "dimrate/detail/kv.hpp"
#include "dimrate/detail/parallel.hpp"
#include "dimrate/errors.hpp"
#include "dimrate/verify.hpp"

namespace dimrate {

namespace {

using detail::format_double;
using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Manifest {
 public:
  Manifest(const ExperimentConfig& cfg, std::filesystem::path file) : file_(std::move(file)) {
    doc_["tool"] = "dimrate";
    doc_["version"] = DIMRATE_VERSION;
    doc_["experiment"] = std::string(to_string(cfg.experiment));
    json config = json::object();
    for (const auto& [k, v] : cfg.echo) config[k] = v;
    doc_["config"] = config;
    json seeds = json::array();
    for (auto s : cfg.seeds) seeds.push_back(s);
    doc_["seeds"] = seeds;
    doc_["started_at"] = utc_timestamp();
    doc_["status"] = "running";
    doc_["artifacts"] = json::array();
    doc_["notes"] = json::object();
    write();
  }

  void note(const std::string& key, const std::string& value) { doc_["notes"][key] = value; }
  void artifact(const std::filesystem::path& p) { doc_["artifacts"].push_back(p.filename().string()); }

  void finish(const std::string& status, double seconds, const std::string& error = {}) {
    doc_["status"] = status;
    doc_["wall_seconds"] = seconds;
    doc_["finished_at"] = utc_timestamp();
    if (!error.empty()) doc_["error"] = error;
    write();
  }

 private:
  void write() const {
    std::ofstream out(file_, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + file_.string() + "'");
    out << doc_.dump(2) << '\n';
  }

  std::filesystem::path file_;
  json doc_;
};

struct Runner {
  const ExperimentConfig& cfg;
  std::ostream& log;
  Manifest& manifest;
  RunResult result;

  void emit(const std::string& name, const CsvTable& table) {
    const auto path = cfg.output / name;
    table.write(path);
    manifest.artifact(path);
    result.artifacts.push_back(path);
    log << "wrote " << path.string() << '\n';
  }

  void record_sampling(const std::vector<SamplePath>& paths) {
    if (paths.empty()) return;
    for (const auto& [k, v] : paths.front().metadata) manifest.note("sampler." + k, v);
  }

  void idr_empirical() {
    const auto& process = *cfg.process;
    const auto paths = generate_paths(process, cfg.n, cfg.seeds, cfg.approximate_sampling);
    record_sampling(paths);
    if (process.family == ProcessFamily::periodic) note_periodic_base(process.period);
    EntropyOptions opts;
    opts.miller_madow = cfg.miller_madow;
    const auto est = id_rate_estimate(paths, cfg.m_grid, cfg.j, opts);
    emit("idr.csv", idr_table(est));
    CsvTable fit({"d_hat", "intercept", "residual_rms", "fit_points", "out_of_range", "note"});
    const std::string note = process.family == ProcessFamily::gaussian
                                 ? "j-truncated estimate; an upper bound for non-Markov processes"
                                 : "";
    fit.add_row({CsvTable::cell(est.d_hat), CsvTable::cell(est.intercept), CsvTable::cell(est.residual_rms),
                 CsvTable::cell(est.fit_points), CsvTable::cell(est.out_of_range), note});
    emit("idr_fit.csv", fit);
    result.summary = "d_hat = " + format_double(est.d_hat);
  }

  void note_periodic_base(std::size_t period) {
    const auto base = PeriodicSpec::uniform_base(period, kPeriodicBaseSeed).base;
    std::string list;
    for (double v : base) list += (list.empty() ? "" : ",") + format_double(v);
    manifest.note("periodic.base", list);
  }

  void idr_gaussian_theory() {
    const SpectralModel& model = *cfg.process->model;
    CsvTable theory({"quantity", "value"});
    theory.add_row({"id_rate", CsvTable::cell(gaussian_id_rate(model))});
    const auto thr = support_measure(model, default_support_threshold(model));
    theory.add_row({"support_measure_relative_threshold", CsvTable::cell(thr.measure)});
    theory.add_row({"support_threshold", CsvTable::cell(thr.threshold)});
    theory.add_row({"total_power", CsvTable::cell(model.total_power())});
    theory.add_row({"mean", CsvTable::cell(model.mean())});
    if (!model.has_atoms()) {
      const auto sz = szego_entropy_rate(model);
      theory.add_row({"entropy_rate_integral", CsvTable::cell(sz.value)});
      theory.add_row({"entropy_rate_clipped", CsvTable::cell(sz.clipped)});
    }
    emit("theory.csv", theory);
    const auto pv = prediction_variance(model, cfg.k_max);
    if (pv.stopped_early) manifest.note("prediction.stopped_early", "true");
    emit("prediction.csv", prediction_table(pv));
    result.summary = "d = " + format_double(gaussian_id_rate(model));
  }

  std::vector<double> distortion_grid(const SpectralModel& model) const {
    return cfg.d_grid.empty() ? default_distortion_grid(model.total_power()) : cfg.d_grid;
  }

  void rd() {
    const SpectralModel& model = *cfg.process->model;
    const auto grid = distortion_grid(model);
    const auto curve = rd_curve(model, grid);
    const auto est = rd_dimension_estimate(curve);
    emit("rd.csv", rd_table(curve, est));
    CsvTable fit({"dimension", "d_small", "d_large", "spans_six_decades", "support_measure"});
    fit.add_row({CsvTable::cell(est.dimension), CsvTable::cell(est.d_small), CsvTable::cell(est.d_large),
                 CsvTable::cell(est.spans_six_decades), CsvTable::cell(gaussian_id_rate(model))});
    emit("rd_fit.csv", fit);
    result.summary = "dim_R slope = " + format_double(est.dimension);
  }

  void lemma4() {
    std::vector<BussgangReport> reports;
    CsvTable power({"m", "error_power", "bound"});
    for (auto m : cfg.m_grid) {
      reports.push_back(bussgang_a1(cfg.mean, cfg.variance, m));
      const double md = static_cast<double>(m);
      power.add_row({CsvTable::cell(m), CsvTable::cell(quantization_error_power(cfg.mean, cfg.variance, m)),
                     CsvTable::cell(1.0 / (md * md))});
    }
    emit("bussgang.csv", bussgang_table(reports));
    emit("error_power.csv", power);
    result.summary = "Lemma 4 bounds hold on the grid";
    if (!cfg.process) return;

    SdfRelationOptions opts;
    opts.sampler.allow_approximate = cfg.approximate_sampling;
    CsvTable sdf({"m", "a1", "residual", "bound", "tolerance", "paired_residual", "paired_tolerance", "pass"});
    bool all = true;
    for (auto m : cfg.m_grid) {
      const auto rep = sdf_relation_check(*cfg.process->model, m, cfg.n, cfg.seeds, opts);
      all = all && rep.pass;
      sdf.add_row({CsvTable::cell(m), CsvTable::cell(rep.a1), CsvTable::cell(rep.residual), CsvTable::cell(rep.bound),
                   CsvTable::cell(rep.tolerance), CsvTable::cell(rep.paired_residual),
                   CsvTable::cell(rep.paired_tolerance), CsvTable::cell(rep.pass)});
    }
    emit("sdf_relation.csv", sdf);
    if (!all) {
      result.exit_status = exit_check_failed;
      result.summary = "spectral relation check failed";
    }
  }

  // Slope of H(k-block of [X]_m) in log m over the largest half of the grid, divided by k.
  double block_dimension(const std::vector<SamplePath>& paths) const {
    std::vector<IdRateRow> rows;
    for (auto m : cfg.m_grid) {
      if (m < 2) continue;
      std::vector<double> h(paths.size());
      detail::parallel_for(paths.size(), [&](std::size_t p) {
        h[p] = block_entropy(quantize_values(paths[p].values, m), cfg.block_k).value;
      });
      IdRateRow row;
      row.m = m;
      row.log_m = std::log(static_cast<double>(m));
      for (double v : h) row.entropy += v / static_cast<double>(h.size());
      rows.push_back(row);
    }
    return fit_id_rate(std::move(rows), 0).d_hat / static_cast<double>(cfg.block_k);
  }

  void dimension_compare() {
    const auto& process = *cfg.process;
    double d_cond = kNaN, d = kNaN, d_prime = kNaN, d_hat = kNaN, dim_r = kNaN, d_prime_k = kNaN;
    std::string note;
    std::vector<SamplePath> paths;
    try {
      paths = generate_paths(process, cfg.n, cfg.seeds, cfg.approximate_sampling);
      record_sampling(paths);
    } catch (const NumericalError& e) {
      note = std::string("sampling failed: ") + e.what() + "; ";
    }
    if (process.family == ProcessFamily::gaussian) {
      const SpectralModel& model = *process.model;
      d = gaussian_id_rate(model);
      d_cond = support_measure(model, 1e-300).measure >= 1.0 ? 1.0 : 0.0;
      d_prime = model.has_density() ? 1.0 : 0.0;
      if (!model.has_atoms()) {
        dim_r = rd_dimension_estimate(rd_curve(model, distortion_grid(model))).dimension;
      }
      if (d > 0.0 && d < 1.0) note += "d' = 1 by Example 3 (positive prediction error at every finite k)";
      if (d == 1.0) note += "full-support spectrum: all three dimensions equal 1";
    } else if (process.family == ProcessFamily::piecewise) {
      const double rho = process.piecewise.fresh_probability;
      d_cond = d = d_prime = rho;
      note += "Example 1: all three dimensions equal the fresh-draw probability";
    } else {
      d_cond = d = d_prime = 0.0;
      note += "Example 2: all three dimensions vanish";
      note_periodic_base(process.period);
    }
    if (!paths.empty()) {
      if (process.family != ProcessFamily::gaussian) {
        EntropyOptions opts;
        opts.miller_madow = cfg.miller_madow;
        d_hat = id_rate_estimate(paths, cfg.m_grid, cfg.j, opts).d_hat;
      }
      d_prime_k = block_dimension(paths);
    }
    CsvTable dims({"process", "d_conditional_analytic", "d_analytic", "d_prime_analytic", "d_hat_empirical",
                   "dim_r_slope", "d_prime_smallk", "block_k", "note"});
    dims.add_row({process.text, CsvTable::cell(d_cond), CsvTable::cell(d), CsvTable::cell(d_prime),
                  CsvTable::cell(d_hat), CsvTable::cell(dim_r), CsvTable::cell(d_prime_k), CsvTable::cell(cfg.block_k),
                  note});
    emit("dimension_compare.csv", dims);
    result.summary = "d = " + format_double(d) + ", d' = " + format_double(d_prime);
  }

  void verify_all() {
    const auto report = run_acceptance_suite(cfg.criteria);
    for (const auto& c : report.criteria) log << summary_line(c) << '\n';
    emit("verification.csv", report.table());
    for (const auto& [name, table] : report.artifacts) emit(name, table);
    std::size_t passed = 0;
    for (const auto& c : report.criteria) passed += c.pass() ? 1 : 0;
    result.summary = std::to_string(passed) + "/" + std::to_string(report.criteria.size()) + " criteria pass";
    if (!report.pass()) result.exit_status = exit_check_failed;
  }
};

}  // namespace

int exit_status_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) != nullptr) return exit_config_error;
  if (dynamic_cast<const std::invalid_argument*>(&error) != nullptr) return exit_config_error;
  return exit_numerical_error;
}

std::vector<SamplePath> generate_paths(const ProcessDescriptor& process, std::size_t n,
                                       const std::vector<std::uint64_t>& seeds, bool approximate_sampling) {
  std::vector<SamplePath> paths(seeds.size());
  PeriodicSpec periodic;
  if (process.family == ProcessFamily::periodic) periodic = PeriodicSpec::uniform_base(process.period, kPeriodicBaseSeed);
  GaussianSamplerOptions gopts;
  gopts.allow_approximate = approximate_sampling;
  detail::parallel_for(seeds.size(), [&](std::size_t i) {
    switch (process.family) {
      case ProcessFamily::gaussian: paths[i] = sample_gaussian(*process.model, n, seeds[i], gopts); break;
      case ProcessFamily::piecewise: paths[i] = sample_piecewise(process.piecewise, n, seeds[i]); break;
      case ProcessFamily::periodic: paths[i] = sample_periodic(periodic, n, seeds[i]); break;
    }
  });
  return paths;
}

CsvTable idr_table(const IdRateEstimate& est) {
  CsvTable t({"m", "log_m", "H_hat", "H_hat_se", "ratio", "j", "n_samples", "n_paths"});
  for (const auto& r : est.rows) {
    t.add_row({CsvTable::cell(r.m), CsvTable::cell(r.log_m), CsvTable::cell(r.entropy), CsvTable::cell(r.std_error),
               CsvTable::cell(r.ratio), CsvTable::cell(est.order), CsvTable::cell(est.samples),
               CsvTable::cell(est.paths)});
  }
  return t;
}

CsvTable rd_table(const RdCurve& curve, const RdDimensionEstimate& est) {
  CsvTable t({"D", "neg_log_D", "R", "kappa", "ratio", "slope"});
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    t.add_row({CsvTable::cell(p.distortion), CsvTable::cell(-std::log(p.distortion)), CsvTable::cell(p.rate),
               CsvTable::cell(p.water_level), CsvTable::cell(est.ratio[i]), CsvTable::cell(est.slope[i])});
  }
  return t;
}

CsvTable prediction_table(const PredictionVariance& table) {
  CsvTable t({"k", "sigma2_k"});
  for (std::size_t k = 0; k < table.sigma2.size(); ++k) {
    t.add_row({CsvTable::cell(k + 1), CsvTable::cell(table.sigma2[k])});
  }
  return t;
}

CsvTable bussgang_table(const std::vector<BussgangReport>& reports) {
  CsvTable t({"m", "a1", "bound"});
  for (const auto& r : reports) t.add_row({CsvTable::cell(r.m), CsvTable::cell(r.a1), CsvTable::cell(r.bound)});
  return t;
}

RunResult run_experiment(const ExperimentConfig& config, std::ostream& log) {
  std::error_code ec;
  std::filesystem::create_directories(config.output, ec);
  if (ec) throw ConfigError("cannot create output directory '" + config.output.string() + "': " + ec.message());

  const auto start = std::chrono::steady_clock::now();
  Manifest manifest(config, config.output / "manifest.json");
  Runner runner{config, log, manifest, {}};
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  try {
    switch (config.experiment) {
      case ExperimentKind::idr_empirical: runner.idr_empirical(); break;
      case ExperimentKind::idr_gaussian_theory: runner.idr_gaussian_theory(); break;
      case ExperimentKind::rd_curve: runner.rd(); break;
      case ExperimentKind::lemma4_check: runner.lemma4(); break;
      case ExperimentKind::dimension_compare: runner.dimension_compare(); break;
      case ExperimentKind::verify_all: runner.verify_all(); break;
    }
  } catch (const std::exception& e) {
    manifest.finish("error", elapsed(), e.what());
    throw;
  }
  manifest.finish(runner.result.exit_status == exit_pass ? "pass" : "check-failed", elapsed());
  runner.result.artifacts.insert(runner.result.artifacts.begin(), config.output / "manifest.json");
  return runner.result;
}

}  // namespace dimrate
