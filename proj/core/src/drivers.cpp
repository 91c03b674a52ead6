#include "ssdam/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ssdam/errors.hpp"

namespace ssdam {

namespace {

using Mode = ComponentControl::Mode;

constexpr double kEq38Coefficient = 0.44717;
constexpr double kEq38Exponent = -1.72555;

}  // namespace

PathSpec PathSpec::uniaxial_tension(double eps_max, int steps) {
  PathSpec p;
  p.steps = steps;
  p.comps[0] = {Mode::Strain, eps_max};
  p.comps[1] = {Mode::Stress, 0.0};
  p.comps[2] = {Mode::Stress, 0.0};
  return p;
}

PathSpec PathSpec::uniaxial_compression(double eps_max, int steps) {
  PathSpec p = uniaxial_tension(-std::abs(eps_max), steps);
  return p;
}

PathSpec PathSpec::simple_shear(double eps12_max, int steps) {
  PathSpec p;
  p.steps = steps;
  p.comps[3] = {Mode::Strain, eps12_max};
  return p;
}

PathSpec PathSpec::proportional_stress(double eta, double theta0,
                                       double eps_max, int steps) {
  // Principal stress direction with unit equivalent stress and the
  // requested (eta, theta0).
  const double theta = (1.0 - theta0) * std::numbers::pi / 6.0;
  const double s1 = 2.0 / 3.0 * std::cos(theta);
  const double s2 = 2.0 / 3.0 * std::cos(theta - 2.0 * std::numbers::pi / 3.0);
  const double s3 = 2.0 / 3.0 * std::cos(theta + 2.0 * std::numbers::pi / 3.0);
  const std::array<double, 3> T = {s1 + eta, s2 + eta, s3 + eta};
  int anchor = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(T[i]) > std::abs(T[anchor])) anchor = i;

  PathSpec p;
  p.steps = steps;
  for (int i = 0; i < 3; ++i) {
    if (i == anchor)
      p.comps[i] = {Mode::Strain, T[anchor] >= 0.0 ? eps_max : -eps_max};
    else
      p.comps[i] = {Mode::StressRatio, 0.0, anchor, T[i] / T[anchor]};
  }
  return p;
}

std::optional<PathSpec> PathSpec::preset(const std::string& name,
                                         double magnitude, int steps) {
  if (name == "uniaxial_tension") return uniaxial_tension(magnitude, steps);
  if (name == "uniaxial_compression")
    return uniaxial_compression(magnitude, steps);
  if (name == "simple_shear") return simple_shear(magnitude, steps);
  return std::nullopt;
}

void PathSpec::validate() const {
  if (steps < 1) throw InvalidArgumentError("path: steps must be >= 1");
  bool any_strain = false;
  for (const auto& c : comps) {
    if (c.mode == Mode::Strain) any_strain = true;
    if (c.mode == Mode::StressRatio && (c.anchor < 0 || c.anchor > 5))
      throw InvalidArgumentError("path: ratio anchor out of range");
  }
  if (!any_strain)
    throw InvalidArgumentError("path: at least one strain-controlled component");
}

namespace {

SimRecord make_record(int step, const SymTensor& eps_total,
                      const StepResult& res) {
  const StressState st = stress_state(res.state.sigma);
  SimRecord r;
  r.step = step;
  r.eps_total = eps_total;
  r.sigma = res.state.sigma;
  r.ebar_p = res.state.ebar_p;
  r.D = res.state.D;
  r.h = res.state.h;
  r.eta = st.eta;
  r.theta0 = st.theta0;
  r.f_residual = res.f_residual;
  r.plastic = res.plastic;
  r.fractured = res.state.fractured;
  return r;
}

/// Gaussian elimination with partial pivoting; k <= 5 here.
bool solve_dense(std::vector<std::vector<double>>& A, std::vector<double>& b) {
  const int k = static_cast<int>(b.size());
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-300) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < k; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int cc = col; cc < k; ++cc) A[r][cc] -= f * A[col][cc];
      b[r] -= f * b[col];
    }
  }
  for (int col = k - 1; col >= 0; --col) {
    for (int r = col + 1; r < k; ++r) b[col] -= A[col][r] * b[r];
    b[col] /= A[col][col];
  }
  return true;
}

}  // namespace

std::vector<SimRecord> run_path(const MaterialParams& params,
                                const PathSpec& path) {
  std::vector<SimRecord> records;
  run_path_into(params, path, records);
  return records;
}

void run_path_into(const MaterialParams& params, const PathSpec& path,
                   std::vector<SimRecord>& records) {
  params.validate();
  path.validate();

  std::vector<int> free_comps;
  for (int i = 0; i < 6; ++i)
    if (path.comps[i].mode != Mode::Strain) free_comps.push_back(i);
  const int nfree = static_cast<int>(free_comps.size());
  const double stress_tol = 1e-6 * params.E;

  records.reserve(records.size() + path.steps);
  MaterialState state;
  SymTensor eps_total;                 // converged total strain
  std::array<double, 6> free_inc{};    // warm start for the free components

  for (int step = 1; step <= path.steps; ++step) {
    SymTensor eps_target = eps_total;
    for (int i = 0; i < 6; ++i)
      if (path.comps[i].mode == Mode::Strain)
        eps_target[i] = path.comps[i].target * step / path.steps;
    for (int i : free_comps) eps_target[i] = eps_total[i] + free_inc[i];

    StepResult res;
    bool solved = false;
    double worst = 0.0;
    int worst_comp = -1;
    for (int it = 0; it < 60; ++it) {
      res = return_map(state, eps_target - eps_total, params);
      if (res.state.fractured) break;
      if (nfree == 0) {
        solved = true;
        break;
      }
      std::vector<double> rhs(nfree);
      worst = 0.0;
      for (int k = 0; k < nfree; ++k) {
        const auto& c = path.comps[free_comps[k]];
        const double sig = res.state.sigma[free_comps[k]];
        rhs[k] = (c.mode == Mode::Stress)
                     ? sig - c.target
                     : sig - c.ratio * res.state.sigma[c.anchor];
        if (std::abs(rhs[k]) > worst) {
          worst = std::abs(rhs[k]);
          worst_comp = free_comps[k];
        }
      }
      if (worst <= stress_tol) {
        solved = true;
        break;
      }
      std::vector<std::vector<double>> J(nfree, std::vector<double>(nfree));
      for (int k = 0; k < nfree; ++k) {
        const auto& c = path.comps[free_comps[k]];
        for (int l = 0; l < nfree; ++l) {
          double d = res.tangent.m[free_comps[k]][free_comps[l]];
          if (c.mode == Mode::StressRatio)
            d -= c.ratio * res.tangent.m[c.anchor][free_comps[l]];
          J[k][l] = d;
        }
      }
      if (!solve_dense(J, rhs))
        throw NonConvergenceError("run_path: singular mixed-control Jacobian",
                                  worst);
      for (int k = 0; k < nfree; ++k) eps_target[free_comps[k]] -= rhs[k];
    }
    if (res.state.fractured) {
      records.push_back(make_record(step, eps_target, res));
      return;
    }
    if (!solved)
      throw NonConvergenceError(
          "run_path: stress control failed on component " +
              std::to_string(worst_comp) + " at step " + std::to_string(step),
          worst);
    for (int i : free_comps) free_inc[i] = eps_target[i] - eps_total[i];
    eps_total = eps_target;
    state = res.state;
    records.push_back(make_record(step, eps_total, res));
  }
}

std::optional<double> fracture_strain(const std::vector<SimRecord>& records,
                                      const MaterialParams& params) {
  if (records.empty() || !records.back().fractured) return std::nullopt;
  const SimRecord& last = records.back();
  if (records.size() < 2) return last.ebar_p;
  const SimRecord& prev = records[records.size() - 2];
  const double dD = last.D - prev.D;
  if (dD <= 0.0 || last.D <= params.Dc) return last.ebar_p;
  const double t = (params.Dc - prev.D) / dD;
  return prev.ebar_p + t * (last.ebar_p - prev.ebar_p);
}

std::vector<YieldSurfacePoint> yield_surface_sweep(const MaterialParams& params,
                                                   double ebar_p, double eta,
                                                   int samples) {
  if (samples < 3)
    throw InvalidArgumentError("yield_surface_sweep: samples must be >= 3");
  const double sigma_bar = hardening(ebar_p, params).sigma_bar;
  std::vector<YieldSurfacePoint> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double theta0 = -1.0 + 2.0 * i / (samples - 1);
    const double theta = (1.0 - theta0) * std::numbers::pi / 6.0;
    out.push_back(
        {theta0, theta, yield_stress(ebar_p, eta, theta0, params) / sigma_bar});
  }
  return out;
}

double locus_from_h(double h) {
  if (h <= 0.0)
    throw InvalidArgumentError("locus_from_h: h must be positive");
  return kEq38Coefficient * std::pow(h, kEq38Exponent);
}

LocusTable damage_locus_sweep(const MaterialParams& params,
                              const std::vector<double>& eta_grid,
                              const std::vector<double>& theta0_grid,
                              LocusMode mode) {
  if (eta_grid.empty() || theta0_grid.empty())
    throw InvalidArgumentError("damage_locus_sweep: empty grid");
  LocusTable table;
  for (double theta0 : theta0_grid) {
    for (double eta : eta_grid) {
      LocusRow row{eta, theta0, stress_state_param_h(eta, theta0, params),
                   std::numeric_limits<double>::quiet_NaN(), false, ""};
      try {
        if (mode == LocusMode::PowerLaw) {
          row.ebar_f = locus_from_h(row.h);
          row.ok = true;
        } else {
          const PathSpec path =
              PathSpec::proportional_stress(eta, theta0, 4.0, 4000);
          const auto records = run_path(params, path);
          if (auto ef = fracture_strain(records, params)) {
            row.ebar_f = *ef;
            row.ok = true;
          } else {
            row.note = "no fracture within strain cap";
          }
        }
      } catch (const std::exception& ex) {
        row.note = ex.what();
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

PowerLawFit fit_power_law(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2)
    throw InvalidArgumentError("fit_power_law: need at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, ef] : points) {
    if (h <= 0.0 || ef <= 0.0)
      throw InvalidArgumentError("fit_power_law: points must be positive");
    const double x = std::log(h), y = std::log(ef);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-14 * std::max(1.0, n * sxx))
    throw InvalidArgumentError("fit_power_law: degenerate data (all h equal)");
  const double exponent = (n * sxy - sx * sy) / den;
  const double coefficient = std::exp((sy - exponent * sx) / n);
  return {coefficient, exponent};
}

HardeningFit fit_hardening(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw InvalidArgumentError("fit_hardening: need at least 3 points");
  for (const auto& [x, y] : points)
    if (x < 0.0)
      throw InvalidArgumentError("fit_hardening: negative plastic strain");

  double ymin = points[0].second, ymax = points[0].second;
  for (const auto& [x, y] : points) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  double A = ymin, B = std::max(ymax - ymin, 1e-6), n = 0.5;

  auto rss = [&](double a, double b, double nn) {
    double s = 0.0;
    for (const auto& [x, y] : points) {
      const double r = a + b * std::pow(x, nn) - y;
      s += r * r;
    }
    return s;
  };

  double damping = 1e-3;
  double cost = rss(A, B, n);
  for (int iter = 0; iter < 200; ++iter) {
    // Damped normal equations for residuals r_i = A + B x^n - y_i.
    double JtJ[3][3] = {};
    double Jtr[3] = {};
    for (const auto& [x, y] : points) {
      const double xn = x > 0.0 ? std::pow(x, n) : 0.0;
      const double dn = x > 0.0 ? B * xn * std::log(x) : 0.0;
      const double J[3] = {1.0, xn, dn};
      const double r = A + B * xn - y;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) JtJ[a][b] += J[a] * J[b];
        Jtr[a] += J[a] * r;
      }
    }
    std::vector<std::vector<double>> M(3, std::vector<double>(3));
    std::vector<double> g(3);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) M[a][b] = JtJ[a][b];
      M[a][a] *= 1.0 + damping;
      g[a] = -Jtr[a];
    }
    if (!solve_dense(M, g)) {
      damping *= 10.0;
      continue;
    }
    const double A2 = A + g[0], B2 = B + g[1];
    const double n2 = std::clamp(n + g[2], 1e-4, 10.0);
    const double cost2 = rss(A2, B2, n2);
    // Converged or stalled at floating-point resolution.
    if (std::fabs(cost2 - cost) <= 1e-14 * (cost + 1e-300) && iter > 2)
      break;
    if (cost2 < cost) {
      A = A2;
      B = B2;
      n = n2;
      damping = std::max(damping / 3.0, 1e-12);
      const double rel = (cost - cost2) / std::max(cost, 1e-300);
      cost = cost2;
      if (rel < 1e-15 && iter > 5) break;
    } else {
      damping *= 3.0;
      if (damping > 1e12)
        throw NonConvergenceError("fit_hardening: damping blow-up",
                                  std::sqrt(cost / points.size()));
    }
  }
  return {A, B, n, std::sqrt(cost / points.size())};
}

}  // namespace ssdam
