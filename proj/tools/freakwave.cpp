// freakwave: periods / eval / verify front end for the three-phase solutions.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "freak/acceptance.hpp"
#include "freak/error.hpp"
#include "freak/pipeline.hpp"
#include "freak/run_config.hpp"
#include "freak/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace freak;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kValidation = 2, kNumerical = 3, kIoFailure = 4 };

struct Flags {
  std::string config, preset, out, nome, field, lambda0, name;
  std::optional<double> tol, a, b, phi, alpha, corrupt_A;
  bool paranoid = false, no_plot = false;
  std::vector<std::string> criteria;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON configuration file");
  sub->add_option("--preset", f.preset, "figure preset")->check(CLI::IsMember(preset_names()));
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--tol", f.tol, "quadrature tolerance");
  sub->add_option("--nome-convention", f.nome, "nome convention")->check(CLI::IsMember({"pi", "plain"}));
  sub->add_option("--field", f.field, "nls_amp2 | kpi_u | hirota_amp2");
  sub->add_option("--lambda0", f.lambda0, "number, k2/(4k1) or k2/(4k3)");
  sub->add_option("--a", f.a, "minor modulus");
  sub->add_option("--b", f.b, "major modulus");
  sub->add_option("--phi", f.phi, "angle in radians");
  sub->add_option("--alpha", f.alpha, "Hirota coefficient");
  sub->add_option("--name", f.name, "stem of the output files");
  sub->add_flag("--paranoid", f.paranoid, "cross-check lattice edges by two routes");
  sub->add_flag("--no-plot", f.no_plot, "skip the gnuplot script");
  sub->add_option("--corrupt-A", f.corrupt_A, "scale the fitted amplitude (sensitivity testing)");
  sub->add_option("--criteria", f.criteria, "subset of AC-1..AC-8 to run");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig build_config(const Flags& f) {
  RunConfig cfg;
  json doc;
  if (!f.config.empty()) {
    const std::string text = read_file(f.config);
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(Errc::kInvalidArgument, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::kInvalidArgument, "config must be a JSON object");
  }
  // defaults < preset (file, then flag) < file keys < flags
  if (f.preset.empty() && doc.contains("preset")) apply_json(cfg, json{{"preset", doc["preset"]}}.dump());
  if (!f.preset.empty()) apply_preset(cfg, f.preset);
  if (!doc.is_null()) {
    doc.erase("preset");
    apply_json(cfg, doc.dump());
  }
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.tol) cfg.tol = *f.tol;
  if (!f.nome.empty()) cfg.nome = parse_nome_convention(f.nome);
  if (!f.field.empty()) cfg.field = parse_field_kind(f.field);
  if (!f.lambda0.empty()) cfg.lambda0_expr = f.lambda0;
  if (f.a) cfg.a = *f.a;
  if (f.b) cfg.b = *f.b;
  if (f.phi) cfg.phi = *f.phi;
  if (f.alpha) cfg.alpha = *f.alpha;
  if (!f.name.empty()) cfg.name = f.name;
  if (f.paranoid) cfg.paranoid = true;
  if (f.no_plot) cfg.plot_script = false;
  if (f.corrupt_A) cfg.corrupt_A = *f.corrupt_A;
  if (!f.criteria.empty()) cfg.criteria = f.criteria;
  if (cfg.field == FieldKind::kHirotaAmp2 && f.preset.empty() && !doc.contains("grid")) {
    cfg.grid = GridSpec{{-20.0, 20.0, 401}, {-10.0, 10.0, 201}, 0.0, Plane::kXT};
  }
  check_config(cfg);
  return cfg;
}

Solution solve_config(const RunConfig& cfg) {
  validate_params(cfg.a, cfg.b, cfg.phi, 0.0, cfg.alpha);
  const double l0 = resolve_lambda0(cfg.lambda0_expr, cfg.a, cfg.b, cfg.phi, cfg.tol);
  SolveOptions so;
  so.tol = cfg.tol;
  so.nome = cfg.nome;
  so.paranoid = cfg.paranoid;
  return solve(CurveParams{cfg.a, cfg.b, cfg.phi, l0, cfg.alpha}, so);
}

json cjson(cd v) { return json::array({v.real(), v.imag()}); }

json matrix_json(const Eigen::Matrix3cd& m) {
  json out = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int j = 0; j < 3; ++j) row.push_back(cjson(m(i, j)));
    out.push_back(row);
  }
  return out;
}

template <class M>
json real_matrix_json(const M& m) {
  json out = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int j = 0; j < 3; ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json wave_json(const WaveData& w) {
  json d = json::array();
  for (const cd& v : w.delta) d.push_back(cjson(v));
  return {{"k", {w.k1, w.k2, w.k3}},
          {"kappa", {w.kappa1, w.kappa3}},
          {"phase_rates", real_matrix_json(w.phase_rates)},
          {"delta", d},
          {"A", w.A},
          {"z0", w.z0},
          {"nomes", w.h},
          {"lambda0", w.lambda0},
          {"alpha", w.alpha}};
}

json params_json(const CurveParams& p) {
  return {{"a", p.a}, {"b", p.b}, {"phi", p.phi}, {"lambda0", p.lambda0}, {"alpha", p.alpha}};
}

json check(const std::string& name, double value, double bound, bool pass) {
  return {{"check", name}, {"value", value}, {"bound", bound}, {"pass", pass}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw Error(Errc::kIo, "write to '" + path.string() + "' failed");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(Errc::kIo, "cannot create output directory '" + dir + "'");
}

int cmd_periods(const RunConfig& cfg) {
  const Solution s = solve_config(cfg);
  json doc;
  doc["params"] = params_json(s.params);
  doc["lambda0_expr"] = cfg.lambda0_expr;
  doc["periods"] = {{"alpha1", cjson(s.periods.alpha1)}, {"alpha2", cjson(s.periods.alpha2)},
                    {"alpha3", cjson(s.periods.alpha3)}, {"beta1", cjson(s.periods.beta1)},
                    {"beta2", cjson(s.periods.beta2)},   {"beta3", cjson(s.periods.beta3)}};
  doc["reduction"] = {{"c", {cjson(s.rc.c[0]), cjson(s.rc.c[1]), cjson(s.rc.c[2])}},
                      {"b", s.rc.b},
                      {"h", s.rc.h},
                      {"nome_convention", to_string(s.rc.convention)}};
  doc["B"] = matrix_json(s.pm.B);
  doc["C"] = matrix_json(s.pm.C);
  doc["K"] = real_matrix_json(s.pm.K);
  doc["S"] = real_matrix_json(s.pm.S);
  doc["P"] = real_matrix_json(s.pm.P);
  doc["Q"] = real_matrix_json(s.pm.Q);
  doc["R"] = real_matrix_json(s.pm.R);
  doc["chi"] = {s.chi.chi1, s.chi.chi2};
  doc["uvw"] = real_matrix_json(s.lattice.uvw);
  doc["edges"] = real_matrix_json(s.lattice.edges);
  doc["edges_closed_form"] = real_matrix_json(s.lattice.edges_closed_form);
  doc["wave"] = wave_json(s.wave);
  json cands = json::array();
  for (std::size_t i = 0; i < s.scores.size(); ++i) {
    json d = json::array();
    for (const cd& v : s.scores[i].delta) d.push_back(cjson(v));
    cands.push_back({{"delta", d},
                     {"A", std::isfinite(s.scores[i].fit.A) ? json(s.scores[i].fit.A) : json(nullptr)},
                     {"cv", std::isfinite(s.scores[i].fit.cv) ? json(s.scores[i].fit.cv) : json(nullptr)},
                     {"residual", std::isfinite(s.scores[i].residual) ? json(s.scores[i].residual) : json(nullptr)},
                     {"chosen", int(i) == s.chosen}});
  }
  doc["delta_candidates"] = cands;

  json checks = json::array();
  bool all = true;
  auto add = [&](const std::string& n, double v, double bound, bool pass) {
    checks.push_back(check(n, v, bound, pass));
    all = all && pass;
  };
  const double sym = (s.pm.B - s.pm.B.transpose()).cwiseAbs().maxCoeff();
  add("B symmetric", sym, 1e-12, sym <= 1e-12);
  const double reb = (s.pm.B.real() + 0.5 * s.pm.K.cast<double>()).cwiseAbs().maxCoeff();
  add("Re B = -K/2", reb, 1e-8, reb <= 1e-8);
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(s.pm.B.imag()).eigenvalues().minCoeff();
  add("Im B positive definite (min eigenvalue)", min_eig, 0.0, min_eig > 0.0);
  const double cc = (s.pm.C.conjugate() + s.pm.C).cwiseAbs().maxCoeff();
  add("conj(C) = -C", cc, 1e-10, cc <= 1e-10);
  add("lattice edges: inversion vs closed form", s.lattice.route_mismatch, 1e-8, s.lattice.route_mismatch <= 1e-8);
  const double rates = (reduce_matrix() * s.lattice.uvw - s.wave.phase_rates).cwiseAbs().maxCoeff() /
                       s.wave.phase_rates.cwiseAbs().maxCoeff();
  add("wave numbers: closed forms vs (U, V, W) route", rates, 1e-8, rates <= 1e-8);
  const ScaleFit& fit = s.scores[std::size_t(s.chosen)].fit;
  add("amplitude fit spread (cv)", fit.cv, 1e-3, fit.cv <= 1e-3);
  add("A > 0", s.wave.A, 0.0, s.wave.A > 0.0);
  doc["checks"] = checks;

  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  ensure_dir(cfg.out_dir);
  write_text(fs::path(cfg.out_dir) / (cfg.name + "_periods.json"), text);
  return all ? kOk : kNumerical;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

int cmd_eval(const RunConfig& cfg) {
  const Solution s = solve_config(cfg);
  const FieldGrid g = grid_eval(cfg.field, cfg.grid, s.wave);
  ensure_dir(cfg.out_dir);
  const std::string ylabel = cfg.grid.plane == Plane::kXZ ? "z" : "t";
  const fs::path csv = fs::path(cfg.out_dir) / (cfg.name + ".csv");
  {
    std::string text = "x," + ylabel + ",value\n";
    text.reserve(g.values.size() * 72);
    for (int iy = 0; iy < g.spec.y.count; ++iy) {
      for (int ix = 0; ix < g.spec.x.count; ++ix) {
        text += csv_number(g.spec.x.at(ix));
        text += ',';
        text += csv_number(g.spec.y.at(iy));
        text += ',';
        text += csv_number(g.value(ix, iy));
        text += '\n';
      }
    }
    write_text(csv, text);
  }
  json side;
  side["config"] = json::parse(config_json(cfg));
  side["params"] = params_json(s.params);
  side["wave"] = wave_json(s.wave);
  side["field"] = to_string(cfg.field);
  side["csv"] = csv.filename().string();
  side["tolerances"] = {{"quadrature", cfg.tol}, {"theta_eps", 1e-16}, {"scale_cv", 1e-3}};
  side["nome_convention"] = to_string(s.rc.convention);
  side["version"] = kVersion;
  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  side["value_range"] = {*lo, *hi};
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  side["generated"] = stamp;
  write_text(fs::path(cfg.out_dir) / (cfg.name + ".json"), side.dump(2) + "\n");
  if (cfg.plot_script) {
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set xlabel 'x'\nset ylabel '" << ylabel << "'\n"
       << "set pm3d map\nset palette rgbformulae 33,13,10\n"
       << "set dgrid3d " << g.spec.y.count << "," << g.spec.x.count << "\n"
       << "splot '" << csv.filename().string() << "' every ::1 using 1:2:3 with pm3d notitle\n";
    write_text(fs::path(cfg.out_dir) / (cfg.name + ".gp"), gp.str());
  }
  std::cout << "wrote " << csv.string() << " (" << g.values.size() << " values, range [" << *lo << ", " << *hi
            << "])\n";
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  AcceptanceOptions o;
  o.a = cfg.a;
  o.b = cfg.b;
  o.phi = cfg.phi;
  o.alpha = cfg.alpha;
  o.tol = cfg.tol;
  o.nome = cfg.nome;
  o.corrupt_A = cfg.corrupt_A;
  o.paranoid = cfg.paranoid;
  validate_params(o.a, o.b, o.phi, 0.0, o.alpha);
  AcceptanceSuite suite(o);
  using Fn = AcResult (AcceptanceSuite::*)();
  const std::vector<std::pair<std::string, Fn>> all = {
      {"AC-1", &AcceptanceSuite::ac1}, {"AC-2", &AcceptanceSuite::ac2}, {"AC-3", &AcceptanceSuite::ac3},
      {"AC-4", &AcceptanceSuite::ac4}, {"AC-5", &AcceptanceSuite::ac5}, {"AC-6", &AcceptanceSuite::ac6},
      {"AC-7", &AcceptanceSuite::ac7}, {"AC-8", &AcceptanceSuite::ac8}};
  for (const auto& c : cfg.criteria) {
    bool known = false;
    for (const auto& [id, fn] : all) known = known || id == c;
    if (!known) throw Error(Errc::kInvalidArgument, "unknown criterion '" + c + "'");
  }
  bool ok = true;
  for (const auto& [id, fn] : all) {
    if (!cfg.criteria.empty() && std::find(cfg.criteria.begin(), cfg.criteria.end(), id) == cfg.criteria.end()) {
      continue;
    }
    AcResult r;
    try {
      r = (suite.*fn)();
    } catch (const Error& e) {
      r = {id, false, std::string("error: ") + e.what(), {}};
    }
    std::cout << format_result(r) << "\n";
    ok = ok && r.pass;
  }
  if (cfg.paranoid) {
    const double mm = suite.at_zero().lattice.route_mismatch;
    std::cout << "paranoid: lattice edges by inversion vs closed form differ by " << mm << " (<= 1e-08)\n";
    ok = ok && mm <= 1e-8;
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-phase finite-gap solutions of NLS, KP-I and Hirota from a genus-3 curve"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Flags f;
  CLI::App* periods = app.add_subcommand("periods", "period data, matrices, wave numbers and lattice");
  CLI::App* eval = app.add_subcommand("eval", "field on a grid as CSV with a JSON sidecar");
  CLI::App* verify = app.add_subcommand("verify", "acceptance criteria with measured numbers");
  for (CLI::App* sub : {periods, eval, verify}) add_common(sub, f);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }
  try {
    const RunConfig cfg = build_config(f);
    if (periods->parsed()) return cmd_periods(cfg);
    if (eval->parsed()) return cmd_eval(cfg);
    return cmd_verify(cfg);
  } catch (const Error& e) {
    std::cerr << "freakwave: " << e.what() << "\n";
    if (e.code() == Errc::kIo) return kIoFailure;
    return is_validation_error(e.code()) ? kValidation : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "freakwave: " << e.what() << "\n";
    return kNumerical;
  }
}
