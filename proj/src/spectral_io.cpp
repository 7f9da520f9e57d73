#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "dimrate/detail/kv.hpp"
#include "dimrate/spectral.hpp"

namespace dimrate {

namespace {

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) out += ", ";
    out += detail::format_double(v[i]);
  }
  return out;
}

std::vector<SpectralAtom> parse_atoms(std::string_view text) {
  std::vector<SpectralAtom> atoms;
  for (const auto& item : detail::split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("atoms: expected 'frequency:mass', got '" + item + "'");
    atoms.push_back({detail::parse_double(std::string_view(item).substr(0, colon)),
                     detail::parse_double(std::string_view(item).substr(colon + 1))});
  }
  return atoms;
}

}  // namespace

std::string to_text(const SpectralModel& model) {
  std::ostringstream os;
  os << "kind = " << to_string(model.kind()) << '\n';
  switch (model.kind()) {
    case SpectrumKind::flat: os << "level = " << detail::format_double(model.level()) << '\n'; break;
    case SpectrumKind::band:
      os << "half_width = " << detail::format_double(model.half_width()) << '\n';
      os << "level = " << detail::format_double(model.level()) << '\n';
      break;
    case SpectrumKind::ar1:
      os << "coefficient = " << detail::format_double(model.coefficient()) << '\n';
      os << "innovation_variance = " << detail::format_double(model.innovation_variance()) << '\n';
      break;
    case SpectrumKind::table: os << "values = " << join_doubles(model.cell_values()) << '\n'; break;
    case SpectrumKind::atoms: break;
  }
  os << "mean = " << detail::format_double(model.mean()) << '\n';
  if (model.has_atoms()) {
    os << "atoms = ";
    const auto& atoms = model.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i != 0) os << ", ";
      os << detail::format_double(atoms[i].frequency) << ':' << detail::format_double(atoms[i].mass);
    }
    os << '\n';
  }
  return os.str();
}

SpectralModel spectral_model_from_text(std::string_view text) {
  std::map<std::string, std::string> kv;
  for (auto& entry : detail::parse_key_values(text)) {
    if (!kv.emplace(entry.key, entry.value).second) {
      throw std::invalid_argument("spectral model: duplicate key '" + entry.key + "'");
    }
  }
  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  auto require = [&](const std::string& key) {
    auto v = take(key);
    if (!v) throw std::invalid_argument("spectral model: missing key '" + key + "'");
    return *v;
  };

  const auto kind = require("kind");
  double mean = 0.0;
  if (auto m = take("mean")) mean = detail::parse_double(*m);
  std::vector<SpectralAtom> atoms;
  if (auto a = take("atoms")) atoms = parse_atoms(*a);

  std::optional<SpectralModel> model;
  if (kind == "flat") {
    model = SpectralModel::flat(detail::parse_double(require("level")), mean);
  } else if (kind == "band") {
    const double b = detail::parse_double(require("half_width"));
    auto level = take("level");
    model = level ? SpectralModel::band(b, detail::parse_double(*level), mean) : SpectralModel::unit_band(b, mean);
  } else if (kind == "ar1") {
    model = SpectralModel::ar1(detail::parse_double(require("coefficient")),
                               detail::parse_double(require("innovation_variance")), mean);
  } else if (kind == "table") {
    model = SpectralModel::table(detail::parse_double_list(require("values")), mean);
  } else if (kind == "atoms") {
    model = SpectralModel::point_spectrum(std::move(atoms), mean);
    atoms.clear();
  } else {
    throw std::invalid_argument("spectral model: unknown kind '" + kind + "'");
  }
  if (!kv.empty()) {
    std::string names;
    for (const auto& [k, v] : kv) names += (names.empty() ? "" : ", ") + k;
    throw std::invalid_argument("spectral model: unknown keys: " + names);
  }
  if (!atoms.empty()) return model->with_atoms(std::move(atoms));
  return *model;
}

}  // namespace dimrate
