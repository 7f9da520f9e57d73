#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dimrate/config.hpp"
#include "dimrate/csv.hpp"
#include "dimrate/entropy.hpp"
#include "dimrate/gausstheory.hpp"
#include "dimrate/ratedistortion.hpp"

namespace dimrate {

enum ExitStatus : int { exit_pass = 0, exit_check_failed = 1, exit_config_error = 2, exit_numerical_error = 3 };

// ConfigError and std::invalid_argument map to exit_config_error; anything
// else to exit_numerical_error.
int exit_status_for(const std::exception& error);

struct RunResult {
  int exit_status = exit_pass;
  std::vector<std::filesystem::path> artifacts;
  std::string summary;
};

// Runs the configured experiment, writing manifest.json (first, and again on
// completion) and the CSV files into config.output. Errors are recorded in
// the manifest and rethrown.
RunResult run_experiment(const ExperimentConfig& config, std::ostream& log);

// CSV schemas shared by the runner and the acceptance suite.
CsvTable idr_table(const IdRateEstimate& estimate);
CsvTable rd_table(const RdCurve& curve, const RdDimensionEstimate& estimate);
CsvTable prediction_table(const PredictionVariance& table);
CsvTable bussgang_table(const std::vector<BussgangReport>& reports);

// Generates the sample paths of a non-analytic experiment: one per seed.
std::vector<SamplePath> generate_paths(const ProcessDescriptor& process, std::size_t n,
                                       const std::vector<std::uint64_t>& seeds, bool approximate_sampling);

// Seed of the i.i.d. uniform base pattern used by periodic processes.
inline constexpr std::uint64_t kPeriodicBaseSeed = 20240601;

}  // namespace dimrate
