#include <doctest.h>

#include "freak/error.hpp"
#include "freak/pipeline.hpp"
#include "freak/run_config.hpp"

using namespace freak;

TEST_CASE("presets") {
  RunConfig cfg;
  apply_preset(cfg, "fig8");
  CHECK(cfg.grid.fixed == doctest::Approx(0.2));
  CHECK(cfg.lambda0_expr == "0");
  apply_preset(cfg, "fig13");
  CHECK(cfg.lambda0_expr == "k2/(4k1)");
  CHECK(cfg.grid.fixed == doctest::Approx(0.3));
  apply_preset(cfg, "hirota-k2-4k3");
  CHECK(cfg.field == FieldKind::kHirotaAmp2);
  CHECK(cfg.grid.plane == Plane::kXT);
  CHECK_THROWS_AS(apply_preset(cfg, "fig99"), Error);
  for (const auto& n : preset_names()) {
    RunConfig c;
    apply_preset(c, n);
    CHECK_NOTHROW(check_config(c));
  }
}

TEST_CASE("JSON overrides layer on top of a preset") {
  RunConfig cfg;
  apply_json(cfg, R"j({"preset": "fig6", "params": {"phi_over_pi": 0.35, "lambda0": "k2/(4k3)"},
                      "grid": {"x": [-5, 5, 11], "fixed": 0.05}, "name": "custom", "nome_convention": "plain"})j");
  CHECK(cfg.phi == doctest::Approx(0.35 * 3.14159265358979323846));
  CHECK(cfg.lambda0_expr == "k2/(4k3)");
  CHECK(cfg.grid.x.count == 11);
  CHECK(cfg.grid.y.count == 201);
  CHECK(cfg.grid.fixed == doctest::Approx(0.05));
  CHECK(cfg.name == "custom");
  CHECK(cfg.nome == NomeConvention::kPlain);
}

TEST_CASE("JSON validation") {
  RunConfig cfg;
  CHECK_THROWS_AS(apply_json(cfg, R"({"bogus": 1})"), Error);
  CHECK_THROWS_AS(apply_json(cfg, R"({"params": {"a": "x"}})"), Error);
  CHECK_THROWS_AS(apply_json(cfg, R"({"grid": {"x": [1, 2]}})"), Error);
  CHECK_THROWS_AS(apply_json(cfg, "not json"), Error);
  RunConfig bad;
  bad.grid.x = {1.0, 1.0, 10};
  CHECK_THROWS_AS(check_config(bad), Error);
  bad = RunConfig{};
  bad.tol = -1.0;
  CHECK_THROWS_AS(check_config(bad), Error);
}

TEST_CASE("config JSON round trip") {
  RunConfig cfg;
  apply_preset(cfg, "fig11");
  cfg.name = "again";
  RunConfig back;
  apply_json(back, config_json(cfg));
  CHECK(config_json(back) == config_json(cfg));
}

TEST_CASE("lambda0 expressions") {
  const CurveParams p = figure_params();
  CHECK(resolve_lambda0("0", p.a, p.b, p.phi) == 0.0);
  CHECK(resolve_lambda0("-0.25", p.a, p.b, p.phi) == -0.25);
  CHECK(resolve_lambda0("k2/(4k1)", p.a, p.b, p.phi) == doctest::Approx(-0.638543).epsilon(1e-5));
  CHECK(resolve_lambda0("k2/(4k3)", p.a, p.b, p.phi) < -0.9);
  CHECK_THROWS_AS(resolve_lambda0("k1", p.a, p.b, p.phi), Error);
  CHECK_THROWS_AS(resolve_lambda0("1.5x", p.a, p.b, p.phi), Error);
}
