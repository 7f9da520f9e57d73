#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "dimrate/config.hpp"
#include "dimrate/errors.hpp"
#include "dimrate/experiment.hpp"
#include "dimrate/verify.hpp"

namespace {

constexpr const char* kSchema = R"(config keys (key = value, '#' comments):
  experiment            idr-empirical | idr-gaussian-theory | rd-curve | lemma4-check | dimension-compare | verify-all
  process               flat[:var] | band:B[:level] | ar1:a[:innov] | atoms:theta[:mass] | table:v,... |
                        model:<file> | piecewise:rho[:uniform|:pwl:x/v,...] | periodic:P | iid-uniform
  m_grid                integers, ranges allowed (4..64)
  d_grid                distortions (default: 33 geometric points, 1e-1..1e-9 times the variance)
  n                     samples per path
  seeds                 distinct nonnegative integers, ranges allowed
  j                     context order (default 1 Markov, P periodic, 0 i.i.d.)
  output                output directory
  block_k               block length for d_prime_smallk (1..4)
  k_max                 prediction-variance table length
  miller_madow          true | false
  approximate_sampling  true | false (binned-spectrum fallback for large band paths)
  mean, variance        scalar Gaussian for lemma4-check without a process
  criteria              verify-all subset (1..11)

csv files:
  idr.csv               m, log_m, H_hat, H_hat_se, ratio, j, n_samples, n_paths
  idr_fit.csv           d_hat, intercept, residual_rms, fit_points, out_of_range, note
  rd.csv                D, neg_log_D, R, kappa, ratio, slope
  rd_fit.csv            dimension, d_small, d_large, spans_six_decades, support_measure
  theory.csv            quantity, value
  prediction.csv        k, sigma2_k
  bussgang.csv          m, a1, bound
  error_power.csv       m, error_power, bound
  sdf_relation.csv      m, a1, residual, bound, tolerance, paired_residual, paired_tolerance, pass
  dimension_compare.csv process, d_conditional_analytic, d_analytic, d_prime_analytic, d_hat_empirical,
                        dim_r_slope, d_prime_smallk, block_k, note
  verification.csv      criterion, check, expected, observed, tolerance, pass

exit status: 0 pass, 1 check failure, 2 configuration error, 3 numerical failure
)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information dimension rate laboratory"};
  app.require_subcommand(1);

  std::filesystem::path config_file;
  std::string output_override;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_file, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output_override, "Override the output directory");

  std::vector<int> criteria;
  std::string verify_output;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("-c,--criterion", criteria, "Criterion numbers (default: all)")->check(CLI::Range(1, 11));
  verify->add_option("-o,--output", verify_output, "Also write verification.csv and a manifest here");

  app.add_subcommand("print-schema", "Print config keys and CSV columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? dimrate::exit_pass : dimrate::exit_config_error;
  }

  try {
    if (app.got_subcommand("print-schema")) {
      std::cout << kSchema;
      return dimrate::exit_pass;
    }
    if (app.got_subcommand("verify")) {
      if (!verify_output.empty()) {
        dimrate::ExperimentConfig cfg;
        cfg.experiment = dimrate::ExperimentKind::verify_all;
        cfg.output = verify_output;
        cfg.criteria = criteria;
        return dimrate::run_experiment(cfg, std::cout).exit_status;
      }
      bool all = true;
      const std::vector<int> ids = criteria;
      for (int id = 1; id <= dimrate::kCriterionCount; ++id) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
        const auto result = dimrate::run_criterion(id);
        std::cout << dimrate::summary_line(result) << std::endl;
        all = all && result.pass();
      }
      return all ? dimrate::exit_pass : dimrate::exit_check_failed;
    }
    auto cfg = dimrate::load_config(config_file);
    if (!output_override.empty()) cfg.output = output_override;
    const auto result = dimrate::run_experiment(cfg, std::cout);
    std::cout << result.summary << '\n';
    return result.exit_status;
  } catch (const std::exception& e) {
    std::cerr << "dimrate: error: " << e.what() << '\n';
    return dimrate::exit_status_for(e);
  }
}
