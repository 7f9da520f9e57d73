#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dimrate/processes.hpp"
#include "dimrate/spectral.hpp"

namespace dimrate {

enum class ExperimentKind { idr_empirical, idr_gaussian_theory, rd_curve, lemma4_check, dimension_compare, verify_all };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_kind_from_string(std::string_view text);

enum class ProcessFamily { gaussian, piecewise, periodic };

// Parsed process descriptor, e.g. "band:0.25", "piecewise:0.5", "periodic:4".
struct ProcessDescriptor {
  ProcessFamily family = ProcessFamily::gaussian;
  std::string text;
  std::optional<SpectralModel> model;  // gaussian
  PiecewiseSpec piecewise;             // piecewise (iid-uniform is piecewise with rho = 1)
  std::size_t period = 0;              // periodic
};

// Accepted forms:
//   flat[:variance]  band:half_width[:level]  ar1:coefficient[:innovation]
//   atoms:frequency[:mass]  table:v1,v2,...  model:<file>
//   piecewise:rho[:uniform | :pwl:x/v,x/v,...]  periodic:P  iid-uniform
// Throws ConfigError on malformed input.
ProcessDescriptor parse_process(std::string_view text, const std::filesystem::path& base_dir = {});

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::verify_all;
  std::optional<ProcessDescriptor> process;
  std::vector<std::int64_t> m_grid;
  std::vector<double> d_grid;  // empty: default grid scaled by the source variance
  std::size_t n = 0;
  std::vector<std::uint64_t> seeds;
  std::size_t j = 0;
  std::filesystem::path output = "dimrate-out";
  std::size_t block_k = 2;
  std::size_t k_max = 50;
  bool miller_madow = false;
  bool approximate_sampling = false;
  double mean = 0.0;
  double variance = 1.0;
  std::vector<int> criteria;  // verify-all subset; empty means all
  // Keys as written, in file order, for the run manifest.
  std::vector<std::pair<std::string, std::string>> echo;
};

// Parses "key = value" text and fills experiment-specific defaults. Throws
// ConfigError for a missing experiment, an unknown kind, unknown keys (all
// listed), malformed numbers, empty grids or repeated seeds.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& file);

// Context order used when the config does not set j.
std::size_t default_context_order(const ProcessDescriptor& process);

}  // namespace dimrate
