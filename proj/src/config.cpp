#include "ftz/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "ftz/io.hpp"

namespace ftz {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(what + " must be finite");
  return d;
}

int integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<int>();
}

cplx complex_value(const json& v, const std::string& what) {
  if (v.is_number()) return number(v, what);
  if (v.is_array() && v.size() == 2) return {number(v[0], what), number(v[1], what)};
  throw ConfigError(what + " must be a number or [re, im]");
}

Vec2 vec2(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(what + " must be [x, y]");
  return {number(v[0], what), number(v[1], what)};
}

SymbolSpec parse_symbol(const json& s, const std::string& base_dir) {
  reject_unknown(s, {"kind", "amplitude", "decay", "frequency", "power", "path"}, "symbol");
  if (!s.contains("kind") || !s["kind"].is_string()) throw ConfigError("symbol.kind is required");
  SymbolSpec spec;
  try {
    spec.kind = parse_kind(s["kind"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  using K = SymbolSpec::Kind;
  auto need = [&](const char* key) {
    if (!s.contains(key)) throw ConfigError(std::string("symbol.") + key + " is required for kind " + kind_name(spec.kind));
    return s[key];
  };
  auto forbid = [&](const char* key) {
    if (s.contains(key)) throw ConfigError(std::string("symbol.") + key + " does not apply to kind " + kind_name(spec.kind));
  };
  if (s.contains("amplitude")) spec.amplitude = complex_value(s["amplitude"], "symbol.amplitude");
  switch (spec.kind) {
    case K::constant:
      forbid("decay"), forbid("frequency"), forbid("power"), forbid("path");
      break;
    case K::gaussian:
      spec.decay = number(need("decay"), "symbol.decay");
      forbid("frequency"), forbid("power"), forbid("path");
      break;
    case K::modulated_gaussian:
      spec.decay = number(need("decay"), "symbol.decay");
      spec.frequency = vec2(need("frequency"), "symbol.frequency");
      forbid("power"), forbid("path");
      break;
    case K::plane_wave:
      spec.frequency = vec2(need("frequency"), "symbol.frequency");
      forbid("decay"), forbid("power"), forbid("path");
      break;
    case K::radial_polynomial_gaussian:
      spec.decay = number(need("decay"), "symbol.decay");
      spec.power = integer(need("power"), "symbol.power");
      forbid("frequency"), forbid("path");
      break;
    case K::grid_file: {
      const json& p = need("path");
      if (!p.is_string()) throw ConfigError("symbol.path must be a string");
      std::filesystem::path path(p.get<std::string>());
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      spec.path = path.string();
      forbid("decay"), forbid("frequency"), forbid("power");
      break;
    }
  }
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> d = {
      {"fourier_round_trip", 1e-12},   {"heat_semigroup", 1e-9},   {"berezin_identity", 1e-5},
      {"decompose_residual", 1e-3},    {"berezin_decomposition", 1e-6}, {"tail_ratio", 10.0},
      {"weyl_conjugation", 1e-4},      {"carleson_ratio", 10.0},  {"calibration", 10.0}, {"quadrature_cross_check", 1e-8},
  };
  return d;
}

double ExperimentConfig::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

ExperimentConfig parse_config(const json& doc, const std::string& base_dir) {
  reject_unknown(doc, {"alpha", "grid", "basis", "symbol", "lattice_radius", "heat_t", "schatten_p", "quadrature",
                       "tolerances", "output"},
                 "config");
  ExperimentConfig cfg;
  cfg.tolerances = default_tolerances();

  if (doc.contains("alpha")) cfg.alpha = number(doc["alpha"], "alpha");
  if (!(cfg.alpha > 0.0)) throw ConfigError("alpha must be positive");

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    reject_unknown(g, {"extent", "points"}, "grid");
    const double extent = g.contains("extent") ? number(g["extent"], "grid.extent") : cfg.grid.extent();
    const int points = g.contains("points") ? integer(g["points"], "grid.points") : cfg.grid.points();
    try {
      cfg.grid = make_grid(extent, points);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }

  if (doc.contains("basis")) {
    const json& b = doc["basis"];
    reject_unknown(b, {"dimension"}, "basis");
    if (b.contains("dimension")) cfg.dimension = integer(b["dimension"], "basis.dimension");
  }
  if (cfg.dimension < 1) throw ConfigError("basis.dimension must be at least 1");

  if (doc.contains("symbol")) cfg.symbol = parse_symbol(doc["symbol"], base_dir);

  if (doc.contains("lattice_radius")) cfg.lattice_radius = integer(doc["lattice_radius"], "lattice_radius");
  if (cfg.lattice_radius < 0) throw ConfigError("lattice_radius must be nonnegative");
  if (cfg.lattice_radius + 1 > cfg.grid.frequency_extent() - cfg.grid.frequency_spacing())
    throw ConfigError("grid frequency range does not cover |xi|_inf <= lattice_radius + 1");

  if (doc.contains("heat_t")) cfg.heat_t = number(doc["heat_t"], "heat_t");
  if (!(cfg.heat_t > 0.0)) throw ConfigError("heat_t must be positive");

  if (doc.contains("schatten_p")) {
    const json& p = doc["schatten_p"];
    if (!p.is_array() || p.empty()) throw ConfigError("schatten_p must be a non-empty array");
    cfg.schatten_p.clear();
    for (const json& v : p) {
      const double q = number(v, "schatten_p entry");
      if (!(q >= 1.0)) throw ConfigError("schatten_p entries must be >= 1");
      cfg.schatten_p.push_back(q);
    }
  }

  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    reject_unknown(q, {"scheme", "order"}, "quadrature");
    const std::string scheme = q.contains("scheme") ? q["scheme"].get<std::string>() : "gauss_hermite";
    if (scheme == "gauss_hermite") {
      cfg.quadrature = QuadratureSpec::hermite(q.contains("order") ? integer(q["order"], "quadrature.order") : 0);
      if (cfg.quadrature.order != 0 && cfg.quadrature.order < 2 * cfg.dimension)
        throw ConfigError("quadrature.order must be at least 2N");
    } else if (scheme == "grid") {
      if (q.contains("order")) throw ConfigError("quadrature.order does not apply to the grid scheme");
      cfg.quadrature = QuadratureSpec::on_grid(cfg.grid);
    } else {
      throw ConfigError("quadrature.scheme must be gauss_hermite or grid");
    }
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances must be an object");
    for (const auto& [key, v] : t.items()) {
      if (!default_tolerances().count(key)) throw ConfigError("unknown tolerance '" + key + "'");
      const double d = number(v, "tolerances." + key);
      if (!(d > 0.0)) throw ConfigError("tolerances." + key + " must be positive");
      cfg.tolerances[key] = d;
    }
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    reject_unknown(o, {"dir"}, "output");
    if (o.contains("dir")) {
      if (!o["dir"].is_string()) throw ConfigError("output.dir must be a string");
      cfg.output_dir = o["dir"].get<std::string>();
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const auto base = std::filesystem::path(path).parent_path();
  try {
    return parse_config(doc, base.empty() ? "." : base.string());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json to_json(const SymbolSpec& spec) {
  json s;
  s["kind"] = kind_name(spec.kind);
  s["amplitude"] = {spec.amplitude.real(), spec.amplitude.imag()};
  using K = SymbolSpec::Kind;
  if (spec.kind == K::gaussian || spec.kind == K::modulated_gaussian || spec.kind == K::radial_polynomial_gaussian)
    s["decay"] = spec.decay;
  if (spec.kind == K::modulated_gaussian || spec.kind == K::plane_wave)
    s["frequency"] = {spec.frequency.x(), spec.frequency.y()};
  if (spec.kind == K::radial_polynomial_gaussian) s["power"] = spec.power;
  if (spec.kind == K::grid_file) s["path"] = spec.path;
  return s;
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["alpha"] = cfg.alpha;
  j["grid"] = {{"extent", cfg.grid.extent()}, {"points", cfg.grid.points()}};
  j["basis"] = {{"dimension", cfg.dimension}};
  j["symbol"] = to_json(cfg.symbol);
  j["lattice_radius"] = cfg.lattice_radius;
  j["heat_t"] = cfg.heat_t;
  j["schatten_p"] = cfg.schatten_p;
  if (cfg.quadrature.scheme == QuadratureSpec::Scheme::grid)
    j["quadrature"] = {{"scheme", "grid"}};
  else
    j["quadrature"] = {{"scheme", "gauss_hermite"}, {"order", cfg.quadrature.resolved_order(cfg.dimension)}};
  j["tolerances"] = cfg.tolerances;
  j["output"] = {{"dir", cfg.output_dir}};
  return j;
}

}  // namespace ftz
