#include "freak/run_config.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "freak/error.hpp"

namespace freak {

using nlohmann::json;

namespace {

struct Preset {
  const char* name;
  const char* lambda0;
  FieldKind field;
  double t;  // only for the (x, z) pictures
};

constexpr Preset kPresets[] = {
    {"fig6", "0", FieldKind::kKpiU, 0.0},
    {"fig7", "0", FieldKind::kKpiU, 0.1},
    {"fig8", "0", FieldKind::kKpiU, 0.2},
    {"fig9", "0", FieldKind::kKpiU, 0.3},
    {"fig10", "k2/(4k1)", FieldKind::kKpiU, 0.0},
    {"fig11", "k2/(4k1)", FieldKind::kKpiU, 0.1},
    {"fig12", "k2/(4k1)", FieldKind::kKpiU, 0.2},
    {"fig13", "k2/(4k1)", FieldKind::kKpiU, 0.3},
    {"hirota-l0", "0", FieldKind::kHirotaAmp2, 0.0},
    {"hirota-l4", "4", FieldKind::kHirotaAmp2, 0.0},
    {"hirota-k2-4k1", "k2/(4k1)", FieldKind::kHirotaAmp2, 0.0},
    {"hirota-k2-4k3", "k2/(4k3)", FieldKind::kHirotaAmp2, 0.0},
};

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::kInvalidArgument, what); }

double number(const json& j, const std::string& key) {
  if (!j.is_number()) bad("'" + key + "' must be a number");
  return j.get<double>();
}

Axis axis(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number_integer()) {
    bad("'" + key + "' must be [min, max, count]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<int>()};
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) bad("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const Preset& p : kPresets) out.emplace_back(p.name);
  return out;
}

void apply_preset(RunConfig& cfg, const std::string& name) {
  for (const Preset& p : kPresets) {
    if (name != p.name) continue;
    cfg.lambda0_expr = p.lambda0;
    cfg.field = p.field;
    cfg.name = p.name;
    if (p.field == FieldKind::kHirotaAmp2) {
      cfg.grid = GridSpec{{-20.0, 20.0, 401}, {-10.0, 10.0, 201}, 0.0, Plane::kXT};
    } else {
      cfg.grid = GridSpec{{-20.0, 20.0, 401}, {-5.0, 5.0, 201}, p.t, Plane::kXZ};
    }
    return;
  }
  bad("unknown preset '" + name + "'");
}

void apply_json(RunConfig& cfg, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("config must be a JSON object");
  only_keys(doc, {"preset", "params", "field", "grid", "tol", "nome_convention", "out", "name", "plot_script",
                  "paranoid", "criteria"},
            "config");
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) bad("'preset' must be a string");
    apply_preset(cfg, doc["preset"].get<std::string>());
  }
  if (doc.contains("params")) {
    const json& p = doc["params"];
    if (!p.is_object()) bad("'params' must be an object");
    only_keys(p, {"a", "b", "phi", "phi_over_pi", "alpha", "lambda0"}, "params");
    if (p.contains("a")) cfg.a = number(p["a"], "a");
    if (p.contains("b")) cfg.b = number(p["b"], "b");
    if (p.contains("phi") && p.contains("phi_over_pi")) bad("give either 'phi' or 'phi_over_pi'");
    if (p.contains("phi")) cfg.phi = number(p["phi"], "phi");
    if (p.contains("phi_over_pi")) cfg.phi = number(p["phi_over_pi"], "phi_over_pi") * std::numbers::pi;
    if (p.contains("alpha")) cfg.alpha = number(p["alpha"], "alpha");
    if (p.contains("lambda0")) {
      const json& l = p["lambda0"];
      if (l.is_string()) {
        cfg.lambda0_expr = l.get<std::string>();
      } else if (l.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << l.get<double>();
        cfg.lambda0_expr = os.str();
      } else {
        bad("'lambda0' must be a number or a string");
      }
    }
  }
  if (doc.contains("field")) {
    if (!doc["field"].is_string()) bad("'field' must be a string");
    cfg.field = parse_field_kind(doc["field"].get<std::string>());
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object()) bad("'grid' must be an object");
    only_keys(g, {"plane", "x", "y", "fixed"}, "grid");
    if (g.contains("plane")) {
      const std::string pl = g["plane"].is_string() ? g["plane"].get<std::string>() : "";
      if (pl == "xz") {
        cfg.grid.plane = Plane::kXZ;
      } else if (pl == "xt") {
        cfg.grid.plane = Plane::kXT;
      } else {
        bad("'plane' must be \"xz\" or \"xt\"");
      }
    }
    if (g.contains("x")) cfg.grid.x = axis(g["x"], "x");
    if (g.contains("y")) cfg.grid.y = axis(g["y"], "y");
    if (g.contains("fixed")) cfg.grid.fixed = number(g["fixed"], "fixed");
  }
  if (doc.contains("tol")) cfg.tol = number(doc["tol"], "tol");
  if (doc.contains("nome_convention")) {
    if (!doc["nome_convention"].is_string()) bad("'nome_convention' must be a string");
    cfg.nome = parse_nome_convention(doc["nome_convention"].get<std::string>());
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) bad("'out' must be a string");
    cfg.out_dir = doc["out"].get<std::string>();
  }
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) bad("'name' must be a string");
    cfg.name = doc["name"].get<std::string>();
  }
  if (doc.contains("plot_script")) {
    if (!doc["plot_script"].is_boolean()) bad("'plot_script' must be a boolean");
    cfg.plot_script = doc["plot_script"].get<bool>();
  }
  if (doc.contains("paranoid")) {
    if (!doc["paranoid"].is_boolean()) bad("'paranoid' must be a boolean");
    cfg.paranoid = doc["paranoid"].get<bool>();
  }
  if (doc.contains("criteria")) {
    if (!doc["criteria"].is_array()) bad("'criteria' must be an array of strings");
    cfg.criteria.clear();
    for (const json& c : doc["criteria"]) {
      if (!c.is_string()) bad("'criteria' must be an array of strings");
      cfg.criteria.push_back(c.get<std::string>());
    }
  }
}

void check_config(const RunConfig& cfg) {
  for (const Axis* ax : {&cfg.grid.x, &cfg.grid.y}) {
    if (ax->count < 2) bad("grid counts must be at least 2");
    if (!std::isfinite(ax->min) || !std::isfinite(ax->max) || !(ax->max > ax->min)) bad("grid ranges must be non-empty");
  }
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) bad("tolerance must be positive");
  if (!(cfg.corrupt_A > 0.0) || !std::isfinite(cfg.corrupt_A)) bad("--corrupt-A factor must be positive");
  if (cfg.field == FieldKind::kHirotaAmp2 && cfg.grid.plane != Plane::kXT) bad("the Hirota field needs plane \"xt\"");
  if (cfg.name.empty() || cfg.name.find('/') != std::string::npos) bad("output name must be a plain file stem");
}

std::string config_json(const RunConfig& cfg) {
  json j;
  j["params"] = {{"a", cfg.a}, {"b", cfg.b}, {"phi", cfg.phi}, {"alpha", cfg.alpha}, {"lambda0", cfg.lambda0_expr}};
  j["field"] = to_string(cfg.field);
  j["grid"] = {{"plane", cfg.grid.plane == Plane::kXZ ? "xz" : "xt"},
               {"x", {cfg.grid.x.min, cfg.grid.x.max, cfg.grid.x.count}},
               {"y", {cfg.grid.y.min, cfg.grid.y.max, cfg.grid.y.count}},
               {"fixed", cfg.grid.fixed}};
  j["tol"] = cfg.tol;
  j["nome_convention"] = to_string(cfg.nome);
  j["out"] = cfg.out_dir;
  j["name"] = cfg.name;
  j["plot_script"] = cfg.plot_script;
  j["paranoid"] = cfg.paranoid;
  j["criteria"] = cfg.criteria;
  return j.dump(2);
}

}  // namespace freak
