#include "ssdam/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "ssdam/errors.hpp"

namespace ssdam {

using nlohmann::json;

namespace {

struct ParamField {
  const char* key;
  std::function<double&(MaterialParams&)> ref;
};

// Key order is the echo/serialization order; keep it stable.
const std::vector<ParamField>& param_fields() {
  static const std::vector<ParamField> fields = {
      {"e", [](MaterialParams& p) -> double& { return p.E; }},
      {"nu", [](MaterialParams& p) -> double& { return p.nu; }},
      {"a", [](MaterialParams& p) -> double& { return p.A; }},
      {"b", [](MaterialParams& p) -> double& { return p.B; }},
      {"n", [](MaterialParams& p) -> double& { return p.n; }},
      {"y0", [](MaterialParams& p) -> double& { return p.Y0; }},
      {"alpha", [](MaterialParams& p) -> double& { return p.alpha; }},
      {"beta", [](MaterialParams& p) -> double& { return p.beta; }},
      {"gamma", [](MaterialParams& p) -> double& { return p.gamma; }},
      {"c_eta", [](MaterialParams& p) -> double& { return p.c_eta; }},
      {"c_theta_t", [](MaterialParams& p) -> double& { return p.c_theta_t; }},
      {"c_theta_s", [](MaterialParams& p) -> double& { return p.c_theta_s; }},
      {"c_theta_c", [](MaterialParams& p) -> double& { return p.c_theta_c; }},
      {"d_eta_t", [](MaterialParams& p) -> double& { return p.d_eta_t; }},
      {"d_theta_s", [](MaterialParams& p) -> double& { return p.d_theta_s; }},
      {"d_eta_c", [](MaterialParams& p) -> double& { return p.d_eta_c; }},
      {"eta0", [](MaterialParams& p) -> double& { return p.eta0; }},
      {"dc", [](MaterialParams& p) -> double& { return p.Dc; }},
      {"tol_f", [](MaterialParams& p) -> double& { return p.tol_f; }},
  };
  return fields;
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw InvalidArgumentError("unknown output format: " + name);
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

MaterialParams material_from_json(const json& j,
                                  std::vector<std::string>& notices) {
  if (!j.is_object())
    throw InvalidArgumentError("material block must be an object");
  MaterialParams p;
  std::vector<std::string> seen;
  for (const auto& f : param_fields()) {
    if (j.contains(f.key)) {
      f.ref(p) = j.at(f.key).get<double>();
      seen.push_back(f.key);
    } else {
      notices.push_back(std::string("material.") + f.key +
                        " missing; using default " +
                        format_g17(f.ref(p)));
    }
  }
  if (j.contains("m")) {
    p.m = j.at("m").get<int>();
    seen.push_back("m");
  } else {
    notices.push_back("material.m missing; using default 6");
  }
  if (j.contains("max_iter")) {
    p.max_iter = j.at("max_iter").get<int>();
    seen.push_back("max_iter");
  } else {
    notices.push_back("material.max_iter missing; using default 50");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(seen.begin(), seen.end(), it.key()) == seen.end())
      throw InvalidArgumentError("unknown material key: " + it.key());
  }
  p.validate();
  return p;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgumentError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "material", "path", "sweep", "fit", "output", "format"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw InvalidArgumentError("unknown config key: " + it.key());
  }
  RunConfig cfg;
  if (j.contains("material"))
    cfg.material = material_from_json(j.at("material"), cfg.notices);
  else
    cfg.notices.push_back("material block missing; using calibrated defaults");
  cfg.path = j.value("path", json());
  cfg.sweep = j.value("sweep", json());
  cfg.fit = j.value("fit", json());
  cfg.output = j.value("output", std::string());
  if (j.contains("format"))
    cfg.format = parse_format(j.at("format").get<std::string>());
  return cfg;
}

RunConfig load_config(const std::string& file) {
  std::ifstream is(file);
  if (!is) throw InvalidArgumentError("cannot open config file: " + file);
  json j;
  try {
    is >> j;
  } catch (const json::exception& ex) {
    throw InvalidArgumentError(std::string("config parse error: ") + ex.what());
  }
  return config_from_json(j);
}

std::string param_echo(const MaterialParams& p) {
  std::ostringstream os;
  os << "# params:";
  MaterialParams copy = p;
  for (const auto& f : param_fields())
    os << ' ' << f.key << '=' << format_g17(f.ref(copy));
  os << " m=" << p.m << " max_iter=" << p.max_iter;
  return os.str();
}

PathSpec path_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgumentError("path block must be an object");
  const int steps = j.value("steps", 2000);
  if (j.contains("preset")) {
    const std::string name = j.at("preset").get<std::string>();
    const double magnitude =
        j.value("magnitude", name == "simple_shear" ? 0.5 : 0.7);
    auto p = PathSpec::preset(name, magnitude, steps);
    if (!p) throw InvalidArgumentError("unknown path preset: " + name);
    return *p;
  }
  if (j.contains("proportional")) {
    const auto& b = j.at("proportional");
    return PathSpec::proportional_stress(b.at("eta").get<double>(),
                                         b.at("theta0").get<double>(),
                                         b.value("eps_max", 4.0), steps);
  }
  if (j.contains("components")) {
    const auto& arr = j.at("components");
    if (!arr.is_array() || arr.size() != 6)
      throw InvalidArgumentError("path.components must be an array of 6");
    PathSpec p;
    p.steps = steps;
    for (int i = 0; i < 6; ++i) {
      const auto& c = arr[i];
      const std::string mode = c.value("mode", "strain");
      if (mode == "strain")
        p.comps[i] = {ComponentControl::Mode::Strain,
                      c.value("target", 0.0)};
      else if (mode == "stress")
        p.comps[i] = {ComponentControl::Mode::Stress,
                      c.value("target", 0.0)};
      else if (mode == "stress_ratio")
        p.comps[i] = {ComponentControl::Mode::StressRatio, 0.0,
                      c.value("anchor", 0), c.value("ratio", 0.0)};
      else
        throw InvalidArgumentError("unknown component mode: " + mode);
    }
    return p;
  }
  throw InvalidArgumentError(
      "path block needs a preset, proportional, or components entry");
}

namespace {

const char* kRecordHeader =
    "step,eps11,eps22,eps33,eps12,eps23,eps13,"
    "sig11,sig22,sig33,sig12,sig23,sig13,"
    "ebar_p,D,h,eta,theta0,f_res,plastic,fractured";

void write_record_row(std::ostream& os, const SimRecord& r) {
  os << r.step;
  for (int i = 0; i < 6; ++i) os << ',' << format_g17(r.eps_total[i]);
  for (int i = 0; i < 6; ++i) os << ',' << format_g17(r.sigma[i]);
  os << ',' << format_g17(r.ebar_p) << ',' << format_g17(r.D) << ','
     << format_g17(r.h) << ',' << format_g17(r.eta) << ','
     << format_g17(r.theta0) << ',' << format_g17(r.f_residual) << ','
     << (r.plastic ? 1 : 0) << ',' << (r.fractured ? 1 : 0) << '\n';
}

json record_to_json(const SimRecord& r) {
  json o;
  o["step"] = r.step;
  o["eps"] = r.eps_total.c;
  o["sig"] = r.sigma.c;
  o["ebar_p"] = r.ebar_p;
  o["D"] = r.D;
  o["h"] = r.h;
  o["eta"] = r.eta;
  o["theta0"] = r.theta0;
  o["f_res"] = r.f_residual;
  o["plastic"] = r.plastic;
  o["fractured"] = r.fractured;
  return o;
}

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<SimRecord>& records,
                       const MaterialParams& p,
                       const std::string& truncation_note) {
  os << "# units: MPa, dimensionless strain\n" << param_echo(p) << '\n';
  os << kRecordHeader << '\n';
  for (const auto& r : records) write_record_row(os, r);
  if (!truncation_note.empty()) os << "# truncated: " << truncation_note << '\n';
}

void write_records_json(std::ostream& os, const std::vector<SimRecord>& records,
                        const MaterialParams& p,
                        const std::string& truncation_note) {
  json out;
  out["units"] = "MPa, dimensionless strain";
  out["params"] = param_echo(p);
  out["records"] = json::array();
  for (const auto& r : records) out["records"].push_back(record_to_json(r));
  if (!truncation_note.empty()) out["truncated"] = truncation_note;
  os << out.dump(1) << '\n';
}

std::vector<SimRecord> records_from_csv(std::istream& is) {
  std::vector<SimRecord> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kRecordHeader)
        throw InvalidArgumentError("records CSV: unexpected header");
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 21)
      throw InvalidArgumentError("records CSV: bad column count");
    SimRecord r;
    int k = 0;
    r.step = std::stoi(cells[k++]);
    for (int i = 0; i < 6; ++i) r.eps_total[i] = std::stod(cells[k++]);
    for (int i = 0; i < 6; ++i) r.sigma[i] = std::stod(cells[k++]);
    r.ebar_p = std::stod(cells[k++]);
    r.D = std::stod(cells[k++]);
    r.h = std::stod(cells[k++]);
    r.eta = std::stod(cells[k++]);
    r.theta0 = std::stod(cells[k++]);
    r.f_residual = std::stod(cells[k++]);
    r.plastic = cells[k++] == "1";
    r.fractured = cells[k++] == "1";
    out.push_back(r);
  }
  return out;
}

void write_yield_surface_csv(std::ostream& os,
                             const std::vector<YieldSurfacePoint>& points,
                             const MaterialParams& p) {
  os << "# units: MPa, dimensionless strain\n" << param_echo(p) << '\n';
  os << "theta0,lode_angle,radius\n";
  for (const auto& pt : points)
    os << format_g17(pt.theta0) << ',' << format_g17(pt.lode_angle) << ','
       << format_g17(pt.radius) << '\n';
}

void write_yield_surface_json(std::ostream& os,
                              const std::vector<YieldSurfacePoint>& points,
                              const MaterialParams& p) {
  json out;
  out["params"] = param_echo(p);
  out["points"] = json::array();
  for (const auto& pt : points)
    out["points"].push_back(
        {{"theta0", pt.theta0}, {"lode_angle", pt.lode_angle},
         {"radius", pt.radius}});
  os << out.dump(1) << '\n';
}

void write_locus_csv(std::ostream& os, const LocusTable& table,
                     const MaterialParams& p) {
  os << "# units: MPa, dimensionless strain\n" << param_echo(p) << '\n';
  os << "eta,theta0,h,ebar_f,ok,note\n";
  for (const auto& r : table.rows)
    os << format_g17(r.eta) << ',' << format_g17(r.theta0) << ','
       << format_g17(r.h) << ',' << format_g17(r.ebar_f) << ','
       << (r.ok ? 1 : 0) << ',' << r.note << '\n';
}

void write_locus_json(std::ostream& os, const LocusTable& table,
                      const MaterialParams& p) {
  json out;
  out["params"] = param_echo(p);
  out["rows"] = json::array();
  for (const auto& r : table.rows)
    out["rows"].push_back({{"eta", r.eta},
                           {"theta0", r.theta0},
                           {"h", r.h},
                           {"ebar_f", r.ebar_f},
                           {"ok", r.ok},
                           {"note", r.note}});
  os << out.dump(1) << '\n';
}

std::string stress_state_row(const SymTensor& sigma, bool with_header) {
  const StressState st = stress_state(sigma);
  std::ostringstream os;
  if (with_header) os << "sigma_m,sigma_eq,eta,chi,theta,theta0\n";
  os << format_g17(st.sigma_m) << ',' << format_g17(st.sigma_eq) << ','
     << format_g17(st.eta) << ',' << format_g17(st.chi) << ','
     << format_g17(st.theta) << ',' << format_g17(st.theta0);
  return os.str();
}

}  // namespace ssdam
