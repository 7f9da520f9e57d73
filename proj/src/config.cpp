#include "dimrate/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dimrate/detail/kv.hpp"
#include "dimrate/errors.hpp"

namespace dimrate {

namespace {

using detail::parse_double;
using detail::parse_int;
using detail::split;
using detail::trim;

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 6> kKinds{{
    {ExperimentKind::idr_empirical, "idr-empirical"},
    {ExperimentKind::idr_gaussian_theory, "idr-gaussian-theory"},
    {ExperimentKind::rd_curve, "rd-curve"},
    {ExperimentKind::lemma4_check, "lemma4-check"},
    {ExperimentKind::dimension_compare, "dimension-compare"},
    {ExperimentKind::verify_all, "verify-all"},
}};

// Runs f, turning parse failures into ConfigError prefixed by `what`.
template <class F>
auto guarded(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InnovationDistribution parse_innovation(std::string_view text) {
  if (text.empty() || text == "uniform") return InnovationDistribution::uniform();
  if (text.substr(0, 4) != "pwl:") throw ConfigError("unknown innovation distribution '" + std::string(text) + "'");
  std::vector<double> knots;
  std::vector<double> values;
  for (const auto& pair : split(text.substr(4), ',')) {
    const auto parts = split(pair, '/');
    if (parts.size() != 2) throw ConfigError("innovation knot must be x/value, got '" + pair + "'");
    knots.push_back(parse_double(parts[0]));
    values.push_back(parse_double(parts[1]));
  }
  return InnovationDistribution::piecewise_linear(std::move(knots), std::move(values));
}

ProcessDescriptor parse_process_impl(std::string_view raw, const std::filesystem::path& base_dir) {
  const std::string_view text = trim(raw);
  ProcessDescriptor d;
  d.text = std::string(text);
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const auto args = rest.empty() ? std::vector<std::string>{} : split(rest, ':');
  auto arg = [&](std::size_t i, double fallback) { return i < args.size() ? parse_double(args[i]) : fallback; };
  auto need_args = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) throw ConfigError("wrong number of parameters");
  };

  if (head == "flat") {
    need_args(0, 1);
    d.model = SpectralModel::flat(arg(0, 1.0));
  } else if (head == "band") {
    need_args(1, 2);
    d.model = args.size() == 2 ? SpectralModel::band(arg(0, 0.0), arg(1, 0.0)) : SpectralModel::unit_band(arg(0, 0.0));
  } else if (head == "ar1") {
    need_args(1, 2);
    d.model = SpectralModel::ar1(arg(0, 0.0), arg(1, 1.0));
  } else if (head == "atoms") {
    need_args(1, 2);
    const double f = std::abs(arg(0, 0.0));
    const double mass = arg(1, 1.0);
    if (f == 0.0 || f == 0.5) {
      d.model = SpectralModel::point_spectrum({{f, mass}});
    } else {
      d.model = SpectralModel::point_spectrum({{-f, 0.5 * mass}, {f, 0.5 * mass}});
    }
  } else if (head == "table") {
    if (rest.empty()) throw ConfigError("table needs cell values");
    d.model = SpectralModel::table(detail::parse_double_list(rest));
  } else if (head == "model") {
    if (rest.empty()) throw ConfigError("model needs a file name");
    std::filesystem::path file{std::string(rest)};
    if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
    d.model = spectral_model_from_text(read_file(file));
  } else if (head == "piecewise") {
    if (rest.empty()) throw ConfigError("piecewise needs a fresh-draw probability");
    d.family = ProcessFamily::piecewise;
    const auto second = rest.find(':');
    const double rho = parse_double(rest.substr(0, second));
    if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("fresh-draw probability must lie in [0,1]");
    d.piecewise.fresh_probability = rho;
    if (second != std::string_view::npos) d.piecewise.innovation = parse_innovation(rest.substr(second + 1));
  } else if (head == "periodic") {
    need_args(1, 1);
    const auto p = parse_int(args[0]);
    if (p < 1) throw ConfigError("period must be >= 1");
    d.family = ProcessFamily::periodic;
    d.period = static_cast<std::size_t>(p);
  } else if (head == "iid-uniform") {
    need_args(0, 0);
    d.family = ProcessFamily::piecewise;
    d.piecewise.fresh_probability = 1.0;
  } else {
    throw ConfigError("unknown process family '" + std::string(head) + "'");
  }
  return d;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::set<std::uint64_t> seen;
  for (auto v : detail::parse_int_list(text)) {
    if (v < 0) throw ConfigError("seeds must be nonnegative");
    if (!seen.insert(static_cast<std::uint64_t>(v)).second) {
      throw ConfigError("seed " + std::to_string(v) + " appears twice");
    }
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  return seeds;
}

std::vector<std::uint64_t> seed_range(std::uint64_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::uint64_t i = 0; i < count; ++i) s[i] = i + 1;
  return s;
}

std::size_t parse_count(std::string_view text, std::int64_t min) {
  const auto v = parse_int(text);
  if (v < min) throw ConfigError("must be >= " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ExperimentKind> experiment_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kKinds) {
    if (name == text) return k;
  }
  return std::nullopt;
}

ProcessDescriptor parse_process(std::string_view text, const std::filesystem::path& base_dir) {
  return guarded("process '" + std::string(trim(text)) + "'", [&] { return parse_process_impl(text, base_dir); });
}

std::size_t default_context_order(const ProcessDescriptor& process) {
  switch (process.family) {
    case ProcessFamily::periodic: return process.period;
    case ProcessFamily::piecewise: return process.piecewise.fresh_probability == 1.0 ? 0 : 1;
    case ProcessFamily::gaussian: return process.model && process.model->kind() == SpectrumKind::flat ? 0 : 1;
  }
  return 1;
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  const auto entries = guarded("config", [&] { return detail::parse_key_values(text); });

  std::map<std::string, std::string> values;
  std::vector<std::string> unknown;
  static const std::set<std::string> kKnown{
      "experiment", "process", "m_grid",       "d_grid",  "n",        "seeds",    "j",        "output",
      "block_k",    "k_max",   "miller_madow", "mean",    "variance", "criteria", "approximate_sampling"};
  ExperimentConfig cfg;
  for (const auto& kv : entries) {
    if (!kKnown.contains(kv.key)) {
      unknown.push_back(kv.key);
      continue;
    }
    if (!values.emplace(kv.key, kv.value).second) {
      throw ConfigError("line " + std::to_string(kv.line) + ": duplicate key '" + kv.key + "'");
    }
    cfg.echo.emplace_back(kv.key, kv.value);
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("unknown keys: " + list);
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
  };

  const auto kind_text = get("experiment");
  if (!kind_text) throw ConfigError("missing required key 'experiment'");
  const auto kind = experiment_kind_from_string(*kind_text);
  if (!kind) throw ConfigError("unknown experiment kind '" + *kind_text + "'");
  cfg.experiment = *kind;

  if (auto p = get("process")) cfg.process = parse_process(*p, base_dir);
  const bool needs_process = cfg.experiment != ExperimentKind::verify_all && cfg.experiment != ExperimentKind::lemma4_check;
  if (needs_process && !cfg.process) {
    throw ConfigError("experiment '" + *kind_text + "' needs a 'process' key");
  }
  const bool gaussian_only = cfg.experiment == ExperimentKind::idr_gaussian_theory ||
                             cfg.experiment == ExperimentKind::rd_curve ||
                             cfg.experiment == ExperimentKind::lemma4_check;
  if (gaussian_only && cfg.process && cfg.process->family != ProcessFamily::gaussian) {
    throw ConfigError("experiment '" + *kind_text + "' needs a Gaussian (spectral) process");
  }

  // Experiment-specific defaults.
  switch (cfg.experiment) {
    case ExperimentKind::idr_empirical:
    case ExperimentKind::dimension_compare:
      cfg.m_grid = {4, 8, 16, 32, 64};
      cfg.n = 1'000'000;
      cfg.seeds = seed_range(4);
      break;
    case ExperimentKind::lemma4_check:
      cfg.m_grid = {1, 4, 16, 64, 256, 1024};
      cfg.n = std::size_t{1} << 18;
      cfg.seeds = seed_range(8);
      break;
    default:
      break;
  }
  if (cfg.process) cfg.j = default_context_order(*cfg.process);
  if (cfg.experiment == ExperimentKind::lemma4_check && cfg.process) {
    cfg.mean = cfg.process->model->mean();
    cfg.variance = cfg.process->model->total_power();
  }

  if (auto v = get("m_grid")) {
    cfg.m_grid = guarded("m_grid", [&] { return detail::parse_int_list(*v); });
    if (cfg.m_grid.empty()) throw ConfigError("m_grid must not be empty");
    for (auto m : cfg.m_grid) {
      if (m < 1) throw ConfigError("m_grid entries must be >= 1");
    }
  }
  if (auto v = get("d_grid")) {
    cfg.d_grid = guarded("d_grid", [&] { return detail::parse_double_list(*v); });
    if (cfg.d_grid.empty()) throw ConfigError("d_grid must not be empty");
    for (double d : cfg.d_grid) {
      if (!(d > 0.0)) throw ConfigError("d_grid entries must be positive");
    }
  }
  if (auto v = get("n")) cfg.n = guarded("n", [&] { return parse_count(*v, 1); });
  if (auto v = get("seeds")) cfg.seeds = guarded("seeds", [&] { return parse_seeds(*v); });
  if (auto v = get("j")) cfg.j = guarded("j", [&] { return parse_count(*v, 0); });
  if (auto v = get("output")) {
    if (v->empty()) throw ConfigError("output must not be empty");
    cfg.output = *v;
  }
  if (auto v = get("block_k")) {
    cfg.block_k = guarded("block_k", [&] { return parse_count(*v, 1); });
    if (cfg.block_k > 4) throw ConfigError("block_k must be <= 4");
  }
  if (auto v = get("k_max")) cfg.k_max = guarded("k_max", [&] { return parse_count(*v, 1); });
  if (auto v = get("miller_madow")) cfg.miller_madow = guarded("miller_madow", [&] { return detail::parse_bool(*v); });
  if (auto v = get("approximate_sampling")) {
    cfg.approximate_sampling = guarded("approximate_sampling", [&] { return detail::parse_bool(*v); });
  }
  if (auto v = get("mean")) cfg.mean = guarded("mean", [&] { return parse_double(*v); });
  if (auto v = get("variance")) {
    cfg.variance = guarded("variance", [&] { return parse_double(*v); });
    if (!(cfg.variance > 0.0)) throw ConfigError("variance must be positive");
  }
  if (auto v = get("criteria")) {
    for (auto c : guarded("criteria", [&] { return detail::parse_int_list(*v); })) {
      if (c < 1 || c > 11) throw ConfigError("criteria must lie in 1..11");
      cfg.criteria.push_back(static_cast<int>(c));
    }
  }

  const bool needs_grid = cfg.experiment == ExperimentKind::idr_empirical ||
                          cfg.experiment == ExperimentKind::dimension_compare ||
                          cfg.experiment == ExperimentKind::lemma4_check;
  if (needs_grid && cfg.m_grid.empty()) throw ConfigError("m_grid must not be empty");
  if (needs_grid && cfg.seeds.empty()) throw ConfigError("seeds must not be empty");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  return parse_config(read_file(file), file.parent_path());
}

}  // namespace dimrate
