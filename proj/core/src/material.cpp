#include "ssdam/material.hpp"

#include <cmath>
#include <string>

#include "ssdam/errors.hpp"

namespace ssdam {

namespace {

constexpr double kSlopeRegularization = 1e-8;

double c_theta_ax(double theta0, const MaterialParams& p) {
  return theta0 >= 0.0 ? p.c_theta_t : p.c_theta_c;
}

double d_eta_ax(double theta0, const MaterialParams& p) {
  // theta0 = 0 multiplies g(0) = 0, so the branch choice is immaterial there.
  return theta0 >= 0.0 ? p.d_eta_t : p.d_eta_c;
}

void require_unsaturated(double hD, const char* where) {
  if (hD >= 1.0)
    throw SaturatedDamageError(std::string(where) + ": hD >= 1");
}

}  // namespace

void MaterialParams::validate() const {
  auto fail = [](const char* msg) { throw InvalidArgumentError(msg); };
  if (!(E > 0.0)) fail("E must be positive");
  if (!(nu > -1.0 && nu < 0.5)) fail("nu must lie in (-1, 0.5)");
  if (!(n > 0.0)) fail("n must be positive");
  if (!(alpha >= 0.0)) fail("alpha must be nonnegative");
  if (!(beta >= 0.0)) fail("beta must be nonnegative");
  if (!(gamma > 0.0)) fail("gamma must be positive");
  if (m < 1) fail("m must be >= 1");
  if (!(Dc > 0.0 && Dc <= 1.0)) fail("Dc must lie in (0, 1]");
  if (!(tol_f > 0.0)) fail("tol_f must be positive");
  if (max_iter < 1) fail("max_iter must be >= 1");
}

MaterialParams MaterialParams::lode_demo() {
  MaterialParams p;
  p.c_eta = 0.0;
  p.c_theta_t = 1.0;
  p.c_theta_s = 0.92;
  p.c_theta_c = 1.05;
  p.m = 6;
  return p;
}

MaterialParams MaterialParams::corrections_disabled() {
  MaterialParams p;
  p.c_eta = 0.0;
  p.c_theta_t = p.c_theta_s = p.c_theta_c = 1.0;
  p.d_eta_t = p.d_theta_s = p.d_eta_c = 0.0;
  return p;
}

LodeWeight lode_weight(double theta0, int m) {
  const double t2 = theta0 * theta0;
  const double t2m = std::pow(t2, m);
  return {t2 - t2m * t2 / (m + 1), 2.0 * theta0 * (1.0 - t2m)};
}

LameConstants elastic_constants(const MaterialParams& p) {
  return {p.nu * p.E / ((1.0 + p.nu) * (1.0 - 2.0 * p.nu)),
          p.E / (2.0 * (1.0 + p.nu))};
}

HardeningPoint hardening(double ebar_p, const MaterialParams& p) {
  if (ebar_p < 0.0)
    throw InvalidArgumentError("hardening: negative plastic strain");
  const double sigma_bar = p.A + p.B * std::pow(ebar_p, p.n);
  // Slope diverges at 0 for n < 1; evaluate at a floor instead.
  const double e = std::max(ebar_p, kSlopeRegularization);
  const double slope = p.n * p.B * std::pow(e, p.n - 1.0);
  return {sigma_bar, slope};
}

namespace {

double correction_factor(double eta, double theta0, const MaterialParams& p) {
  const LodeWeight w = lode_weight(theta0, p.m);
  return (1.0 - p.c_eta * (eta - p.eta0)) *
         (p.c_theta_s + (c_theta_ax(theta0, p) - p.c_theta_s) * w.g);
}

}  // namespace

double yield_stress(double ebar_p, double eta, double theta0,
                    const MaterialParams& p) {
  return hardening(ebar_p, p).sigma_bar * correction_factor(eta, theta0, p);
}

double stress_state_param_h(double eta, double theta0,
                            const MaterialParams& p) {
  const LodeWeight w = lode_weight(theta0, p.m);
  return 1.0 + p.d_theta_s +
         (d_eta_ax(theta0, p) * (eta - p.eta0) - p.d_theta_s) * w.g;
}

SymTensor elastic_stress(const SymTensor& eps_e, double D, double h,
                         const MaterialParams& p) {
  require_unsaturated(h * D, "elastic_stress");
  const auto [lambda_e, mu_e] = elastic_constants(p);
  const double damaged = 1.0 - h * D;
  return eps_e * (2.0 * mu_e * damaged) +
         SymTensor::identity() * (lambda_e * damaged * eps_e.trace());
}

double energy_release_Y(const SymTensor& eps_e, double h,
                        const MaterialParams& p) {
  const auto [lambda_e, mu_e] = elastic_constants(p);
  const double tr = eps_e.trace();
  return h * (mu_e * eps_e.ddot(eps_e) + 0.5 * lambda_e * tr * tr);
}

double yield_function_f(const SymTensor& sigma, double ebar_p, double D,
                        const MaterialParams& p) {
  const StressState st = stress_state(sigma);
  const double h = stress_state_param_h(st.eta, st.theta0, p);
  require_unsaturated(h * D, "yield_function_f");
  return st.sigma_eq / std::sqrt(1.0 - h * D) -
         yield_stress(ebar_p, st.eta, st.theta0, p);
}

double damage_potential_rate(double Y, double D, double h,
                             const MaterialParams& p) {
  require_unsaturated(h * D, "damage_potential_rate");
  const double drive = std::max(Y - p.Y0, 0.0) / p.gamma;
  return std::pow(drive, p.alpha) / std::pow(1.0 - h * D, p.beta);
}

double df_dD(const SymTensor& sigma, double D, const MaterialParams& p) {
  const StressState st = stress_state(sigma);
  const double h = stress_state_param_h(st.eta, st.theta0, p);
  require_unsaturated(h * D, "df_dD");
  const double u = 1.0 - h * D;
  return h * st.sigma_eq / (2.0 * u * std::sqrt(u));
}

double df_debar(double ebar_p, double eta, double theta0,
                const MaterialParams& p) {
  return -correction_factor(eta, theta0, p) * hardening(ebar_p, p).slope;
}

SymTensor df_dsigma(const SymTensor& sigma, double ebar_p, double D,
                    const MaterialParams& p) {
  const StressState st = stress_state(sigma);
  if (st.degenerate) throw DegenerateStressError("df_dsigma: sigma_eq ~ 0");
  const double h = stress_state_param_h(st.eta, st.theta0, p);
  require_unsaturated(h * D, "df_dsigma");

  const double u = 1.0 - h * D;
  const double df_dseq = 1.0 / std::sqrt(u);
  const double df_dh = D * st.sigma_eq / (2.0 * u * std::sqrt(u));

  const SymTensor dseq = dseq_dsigma(sigma);
  const SymTensor deta = deta_dsigma(sigma);
  const SymTensor lode = smoothed_lode_gradient(sigma, p.m);

  const LodeWeight w = lode_weight(st.theta0, p.m);
  const double dax = d_eta_ax(st.theta0, p);
  const double cax = c_theta_ax(st.theta0, p);
  const double sigma_bar = hardening(ebar_p, p).sigma_bar;
  const double eta_fac = 1.0 - p.c_eta * (st.eta - p.eta0);
  const double lode_fac = p.c_theta_s + (cax - p.c_theta_s) * w.g;

  const SymTensor dh =
      lode * (2.0 * st.theta0 * (dax * (st.eta - p.eta0) - p.d_theta_s)) +
      deta * (dax * w.g);
  const SymTensor dsy =
      lode * (sigma_bar * eta_fac * 2.0 * st.theta0 * (cax - p.c_theta_s)) -
      deta * (sigma_bar * p.c_eta * lode_fac);

  return dseq * df_dseq + dh * df_dh - dsy;
}

SymTensor df_dsigma_total(const SymTensor& sigma, double ebar_p, double D,
                          const MaterialParams& p) {
  const SymTensor dev = df_dsigma(sigma, ebar_p, D, p);
  const StressState st = stress_state(sigma);
  const double h = stress_state_param_h(st.eta, st.theta0, p);
  const double u = 1.0 - h * D;
  const double df_dh = D * st.sigma_eq / (2.0 * u * std::sqrt(u));

  const LodeWeight w = lode_weight(st.theta0, p.m);
  const double dax = d_eta_ax(st.theta0, p);
  const double cax = c_theta_ax(st.theta0, p);
  const double sigma_bar = hardening(ebar_p, p).sigma_bar;
  const double lode_fac = p.c_theta_s + (cax - p.c_theta_s) * w.g;

  // deta_dsigma keeps only the deviatoric part; the full triaxiality
  // gradient carries an extra I/(3 sigma_eq). Its coefficient collects the
  // eta chains through h and sigma_y.
  const double eta_coef =
      df_dh * (dax * w.g) + sigma_bar * p.c_eta * lode_fac;
  return dev + SymTensor::identity() * (eta_coef / (3.0 * st.sigma_eq));
}

}  // namespace ssdam
