#include "opennca/cli/config_io.hpp"

#include <fstream>
#include <set>

#include "opennca/errors.hpp"

namespace opennca::cli {

using nlohmann::json;
using case_study::BathConfig;
using case_study::RunConfig;

namespace {

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!keys.count(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
}

const json& field(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "missing required field");
  return *it;
}

double number(const json& obj, const std::string& path, const char* key) {
  const json& v = field(obj, path, key);
  if (!v.is_number()) throw ConfigError(path + "." + key, "must be a number");
  return v.get<double>();
}

bool boolean(const json& obj, const std::string& path, const char* key, bool fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(path + "." + key, "must be a boolean");
  return it->get<bool>();
}

Complex complex_entry(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(path, "matrix entries must be numbers or [re, im] pairs");
}

}  // namespace

RunConfig parse_config(const json& doc) {
  reject_unknown(doc, "", {"model", "bath", "grid", "initial_state", "outputs"});
  RunConfig cfg;

  const json& model = field(doc, "", "model");
  reject_unknown(model, "model", {"eps0", "gamma_l", "gamma_p", "gamma_d"});
  cfg.model.eps0 = number(model, "model", "eps0");
  cfg.model.gamma_l = number(model, "model", "gamma_l");
  cfg.model.gamma_p = number(model, "model", "gamma_p");
  cfg.model.gamma_d = number(model, "model", "gamma_d");

  const json& bath = field(doc, "", "bath");
  reject_unknown(bath, "bath", {"kind", "eta", "w", "path"});
  const json& kind = field(bath, "bath", "kind");
  if (kind == "flat_band") {
    reject_unknown(bath, "bath", {"kind", "eta", "w"});
    cfg.bath.kind = BathConfig::Kind::flat_band;
    cfg.bath.eta = number(bath, "bath", "eta");
    cfg.bath.w = number(bath, "bath", "w");
  } else if (kind == "tabulated") {
    reject_unknown(bath, "bath", {"kind", "path"});
    cfg.bath.kind = BathConfig::Kind::tabulated;
    const json& p = field(bath, "bath", "path");
    if (!p.is_string()) throw ConfigError("bath.path", "must be a string");
    cfg.bath.path = p.get<std::string>();
  } else {
    throw ConfigError("bath.kind", "must be \"flat_band\" or \"tabulated\"");
  }

  const json& grid = field(doc, "", "grid");
  reject_unknown(grid, "grid", {"dt", "t_max"});
  cfg.grid.dt = number(grid, "grid", "dt");
  cfg.grid.t_max = number(grid, "grid", "t_max");

  const json& init = field(doc, "", "initial_state");
  reject_unknown(init, "initial_state", {"basis_label", "matrix"});
  if (const auto it = init.find("basis_label"); it != init.end()) {
    if (!it->is_number_integer()) throw ConfigError("initial_state.basis_label", "must be 0 or 1");
    cfg.initial_state.basis_label = it->get<int>();
  }
  if (const auto it = init.find("matrix"); it != init.end()) {
    const std::string path = "initial_state.matrix";
    if (!it->is_array() || it->size() != 2) throw ConfigError(path, "must be a 2x2 array");
    OperatorMatrix m(2, 2);
    for (std::size_t r = 0; r < 2; ++r) {
      const json& row = (*it)[r];
      if (!row.is_array() || row.size() != 2) throw ConfigError(path, "must be a 2x2 array");
      for (std::size_t c = 0; c < 2; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_entry(row[c], path);
    }
    cfg.initial_state.matrix = m;
  }

  if (const auto it = doc.find("outputs"); it != doc.end()) {
    const json& out = *it;
    reject_unknown(out, "outputs", {"occupation", "spectrum", "states", "out_dir"});
    cfg.outputs.occupation = boolean(out, "outputs", "occupation", true);
    cfg.outputs.spectrum = boolean(out, "outputs", "spectrum", true);
    cfg.outputs.states = boolean(out, "outputs", "states", false);
    if (const auto d = out.find("out_dir"); d != out.end()) {
      if (!d->is_string()) throw ConfigError("outputs.out_dir", "must be a string");
      cfg.outputs.out_dir = d->get<std::string>();
    }
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  RunConfig cfg = parse_config(doc);
  // Relative bath paths resolve against the config file's directory.
  if (cfg.bath.kind == BathConfig::Kind::tabulated && cfg.bath.path.is_relative())
    cfg.bath.path = path.parent_path() / cfg.bath.path;
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json doc;
  doc["model"] = {{"eps0", cfg.model.eps0},
                  {"gamma_l", cfg.model.gamma_l},
                  {"gamma_p", cfg.model.gamma_p},
                  {"gamma_d", cfg.model.gamma_d}};
  if (cfg.bath.kind == BathConfig::Kind::flat_band)
    doc["bath"] = {{"kind", "flat_band"}, {"eta", cfg.bath.eta}, {"w", cfg.bath.w}};
  else
    doc["bath"] = {{"kind", "tabulated"}, {"path", cfg.bath.path.string()}};
  doc["grid"] = {{"dt", cfg.grid.dt}, {"t_max", cfg.grid.t_max}};
  if (cfg.initial_state.matrix) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < 2; ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < 2; ++c) {
        const Complex z = (*cfg.initial_state.matrix)(r, c);
        row.push_back({z.real(), z.imag()});
      }
      rows.push_back(row);
    }
    doc["initial_state"] = {{"matrix", rows}};
  } else {
    doc["initial_state"] = {{"basis_label", cfg.initial_state.basis_label.value_or(0)}};
  }
  doc["outputs"] = {{"occupation", cfg.outputs.occupation},
                    {"spectrum", cfg.outputs.spectrum},
                    {"states", cfg.outputs.states},
                    {"out_dir", cfg.outputs.out_dir.string()}};
  return doc;
}

namespace {

// Shared preset base: gamma_l = gamma_p = gamma_d = 0.5, w = 10, eta = 1, dt = 0.02, rho0 = |0><0|.
RunConfig preset_base(double eps0, const std::string& out_dir) {
  RunConfig cfg;
  cfg.model = {eps0, 0.5, 0.5, 0.5};
  cfg.bath.kind = BathConfig::Kind::flat_band;
  cfg.bath.eta = 1.0;
  cfg.bath.w = 10.0;
  cfg.grid = {0.02, 10.0};
  cfg.initial_state.basis_label = 0;
  cfg.outputs.out_dir = out_dir;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig3", "fig4-eta", "fig4-w", "fig4-gamma_d", "fig4-eps0"};
}

Preset preset(const std::string& name) {
  if (name == "fig3") return {name, preset_base(5.0, "out/fig3"), "", {}};
  if (name == "fig4-eta") return {name, preset_base(1.0, "out/fig4-eta"), "eta", {0.0, 0.5, 1.0, 2.0}};
  if (name == "fig4-w") return {name, preset_base(1.0, "out/fig4-w"), "w", {5.0, 10.0, 20.0, 40.0}};
  if (name == "fig4-gamma_d")
    return {name, preset_base(1.0, "out/fig4-gamma_d"), "gamma_d", {0.0, 0.5, 1.0, 2.0}};
  if (name == "fig4-eps0") {
    Preset p{name, preset_base(1.0, "out/fig4-eps0"), "eps0", {}};
    p.config.grid.t_max = 30.0;
    for (int e = -5; e <= 5; ++e) p.sweep_values.push_back(e);
    return p;
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

}  // namespace opennca::cli
