#include <cmath>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "ssdam/drivers.hpp"
#include "ssdam/errors.hpp"
#include "ssdam/io.hpp"

using namespace ssdam;
using nlohmann::json;

TEST_CASE("format parsing") {
  CHECK(parse_format("csv") == OutputFormat::Csv);
  CHECK(parse_format("json") == OutputFormat::Json);
  CHECK_THROWS_AS(parse_format("xml"), InvalidArgumentError);
}

TEST_CASE("material from json") {
  std::vector<std::string> notices;
  SUBCASE("full key set round trips") {
    const json j = {{"e", 70000.0}, {"nu", 0.33},   {"a", 350.0},
                    {"b", 600.0},   {"n", 0.4},     {"y0", 0.0},
                    {"alpha", 2.0}, {"beta", 1.0},  {"gamma", 12.0},
                    {"c_eta", 0.1}, {"c_theta_t", 1.0}, {"c_theta_s", 0.9},
                    {"c_theta_c", 0.95}, {"d_eta_t", 1.2},
                    {"d_theta_s", 0.5},  {"d_eta_c", 0.7},
                    {"eta0", 0.35}, {"dc", 0.95},   {"tol_f", 1e-9},
                    {"m", 8},       {"max_iter", 60}};
    const MaterialParams p = material_from_json(j, notices);
    CHECK(notices.empty());
    CHECK(p.E == 70000.0);
    CHECK(p.nu == 0.33);
    CHECK(p.m == 8);
    CHECK(p.max_iter == 60);
    CHECK(p.Dc == 0.95);
  }
  SUBCASE("missing keys fall back to defaults with a notice") {
    const json j = {{"e", 65000.0}};
    const MaterialParams p = material_from_json(j, notices);
    CHECK(p.E == 65000.0);
    CHECK(p.A == 370.0);
    CHECK_FALSE(notices.empty());
  }
  SUBCASE("unknown keys rejected") {
    const json j = {{"youngs", 65000.0}};
    CHECK_THROWS_AS(material_from_json(j, notices), InvalidArgumentError);
  }
}

TEST_CASE("config from json") {
  SUBCASE("unknown top-level key rejected") {
    const json j = {{"materials", json::object()}};
    CHECK_THROWS_AS(config_from_json(j), InvalidArgumentError);
  }
  SUBCASE("format and output honored") {
    const json j = {{"format", "json"}, {"output", "x.json"}};
    const RunConfig cfg = config_from_json(j);
    CHECK(cfg.format == OutputFormat::Json);
    CHECK(cfg.output == "x.json");
  }
}

TEST_CASE("path from json") {
  SUBCASE("preset") {
    const json j = {{"preset", "uniaxial_tension"},
                    {"magnitude", 0.3},
                    {"steps", 123}};
    const PathSpec path = path_from_json(j);
    CHECK(path.steps == 123);
    CHECK(path.comps[0].mode == ComponentControl::Mode::Strain);
    CHECK(path.comps[0].target == doctest::Approx(0.3));
  }
  SUBCASE("proportional") {
    const json j = {{"proportional",
                     {{"eta", 0.5}, {"theta0", 1.0}, {"eps_max", 0.4}}},
                    {"steps", 77}};
    const PathSpec path = path_from_json(j);
    CHECK(path.steps == 77);
  }
  SUBCASE("unknown preset rejected") {
    const json j = {{"preset", "torsion_buckling"}};
    CHECK_THROWS_AS(path_from_json(j), InvalidArgumentError);
  }
}

TEST_CASE("records CSV round trip to 1e-12") {
  const MaterialParams p;
  const auto records = run_path(p, PathSpec::uniaxial_tension(0.15, 40));
  std::ostringstream os;
  write_records_csv(os, records, p);
  std::istringstream is(os.str());
  const auto parsed = records_from_csv(is);
  REQUIRE(parsed.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].step == records[i].step);
    for (int k = 0; k < 6; ++k) {
      CHECK(std::fabs(parsed[i].eps_total[k] - records[i].eps_total[k]) <=
            1e-12 * (1.0 + std::fabs(records[i].eps_total[k])));
      CHECK(std::fabs(parsed[i].sigma[k] - records[i].sigma[k]) <=
            1e-12 * (1.0 + std::fabs(records[i].sigma[k])));
    }
    CHECK(parsed[i].D == records[i].D);
    CHECK(parsed[i].ebar_p == records[i].ebar_p);
    CHECK(parsed[i].plastic == records[i].plastic);
    CHECK(parsed[i].fractured == records[i].fractured);
  }
}

TEST_CASE("emitted files carry the parameter echo and are deterministic") {
  const MaterialParams p;
  const auto records = run_path(p, PathSpec::simple_shear(0.02, 10));
  std::ostringstream a, b;
  write_records_csv(a, records, p);
  write_records_csv(b, records, p);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("# params:") != std::string::npos);
  CHECK(a.str().find("# units:") != std::string::npos);

  const auto pts = yield_surface_sweep(p, 0.0, p.eta0, 11);
  std::ostringstream ys;
  write_yield_surface_csv(ys, pts, p);
  CHECK(ys.str().find("# params:") != std::string::npos);

  const LocusTable t =
      damage_locus_sweep(p, {0.5}, {1.0}, LocusMode::PowerLaw);
  std::ostringstream loc;
  write_locus_csv(loc, t, p);
  CHECK(loc.str().find("# params:") != std::string::npos);
}

TEST_CASE("g17 formatting round-trips doubles") {
  for (double v : {1.0 / 3.0, 0.44717, -1.72555e-7, 71150.0}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("stress state row") {
  SymTensor sig = SymTensor::diag(100.0, 0.0, 0.0);
  const std::string row = stress_state_row(sig, true);
  CHECK(row.find("sigma_eq") != std::string::npos);
  CHECK(row.find("theta0") != std::string::npos);
}
