#pragma once

#include "ssdam/sym_tensor.hpp"

namespace ssdam {

/// Constitutive constants plus numerical controls. Defaults are the
/// calibrated 2024-T351 aluminium set.
struct MaterialParams {
  // Elasticity
  double E = 71150.0;  ///< Young's modulus [MPa]
  double nu = 0.3;     ///< Poisson's ratio

  // Isotropic hardening sigma_bar = A + B ebar_p^n
  double A = 370.0;  ///< [MPa]
  double B = 620.0;  ///< [MPa]
  double n = 0.396;

  // Damage dissipation potential
  double Y0 = 0.0;  ///< damage threshold [MPa]
  double alpha = 2.0;
  double beta = 1.0;
  double gamma = 12.8;  ///< [MPa]

  // Flow-stress correction
  double c_eta = 0.09;
  double c_theta_t = 1.0;
  double c_theta_s = 0.855;
  double c_theta_c = 0.9;

  // Damage stress-state parameter h
  double d_eta_t = 1.3;
  double d_theta_s = 0.55;
  double d_eta_c = 0.6;

  int m = 6;          ///< Lode smoothing exponent
  double eta0 = 0.4;  ///< reference triaxiality

  // Numerical controls
  double Dc = 0.99;      ///< critical damage
  double tol_f = 1e-8;   ///< relative yield-residual tolerance
  int max_iter = 50;

  /// Throws InvalidArgumentError on an inadmissible parameter set.
  void validate() const;

  /// The calibrated 2024-T351 aluminium constants (the defaults, spelled out).
  static MaterialParams aa2024() { return {}; }

  /// Yield-surface demo constants: c_theta = (1, 0.92, 1.05), m = 6,
  /// triaxiality correction off.
  static MaterialParams lode_demo();

  /// Plain von Mises with power hardening: all stress-state corrections
  /// neutralized (c_eta = 0, c_theta = 1, d = 0, so h = 1 everywhere).
  static MaterialParams corrections_disabled();
};

/// Smoothed Lode shape function g(theta0) = theta0^2 - (theta0^2)^(m+1)/(m+1)
/// and its derivative 2 theta0 [1 - (theta0^2)^m].
struct LodeWeight {
  double g;
  double dg_dtheta0;
};
LodeWeight lode_weight(double theta0, int m);

struct LameConstants {
  double lambda_e;  ///< [MPa]
  double mu_e;      ///< shear modulus E / (2(1+nu)) [MPa]
};
LameConstants elastic_constants(const MaterialParams& p);

struct HardeningPoint {
  double sigma_bar;  ///< A + B ebar_p^n [MPa]
  double slope;      ///< d sigma_bar / d ebar_p, regularized at 0 [MPa]
};
HardeningPoint hardening(double ebar_p, const MaterialParams& p);

/// Corrected flow stress
/// sigma_y = sigma_bar(ebar_p) [1 - c_eta (eta - eta0)]
///           {c_theta_s + (c_theta_ax - c_theta_s) g(theta0)}.
double yield_stress(double ebar_p, double eta, double theta0,
                    const MaterialParams& p);

/// Stress-state parameter for damage,
/// h = 1 + d_theta_s + [d_eta_ax (eta - eta0) - d_theta_s] g(theta0),
/// with d_eta_ax = d_eta_t for theta0 > 0 and d_eta_c for theta0 < 0.
double stress_state_param_h(double eta, double theta0,
                            const MaterialParams& p);

/// sigma = 2 mu (1-hD) eps_e + lambda (1-hD) tr(eps_e) I.
SymTensor elastic_stress(const SymTensor& eps_e, double D, double h,
                         const MaterialParams& p);

/// Damage energy release rate Y = h [mu eps_e:eps_e + lambda/2 tr(eps_e)^2].
double energy_release_Y(const SymTensor& eps_e, double h,
                        const MaterialParams& p);

/// f = sigma_eq / sqrt(1 - hD) - sigma_y(ebar_p, eta, theta0).
double yield_function_f(const SymTensor& sigma, double ebar_p, double D,
                        const MaterialParams& p);

/// dF_Y/dY = (1-hD)^(-beta) <(Y-Y0)/gamma>^alpha, the damage rate per
/// unit plastic multiplier. The positive-part bracket guards Y < Y0.
double damage_potential_rate(double Y, double D, double h,
                             const MaterialParams& p);

/// df/dD at fixed stress: h sigma_eq / (2 (1-hD)^(3/2)).
double df_dD(const SymTensor& sigma, double D, const MaterialParams& p);

/// df/d(ebar_p) at fixed stress state: minus the corrected hardening slope.
double df_debar(double ebar_p, double eta, double theta0,
                const MaterialParams& p);

/// Deviatoric flow direction df/d(sigma) assembled from the sigma_eq, h and
/// sigma_y chains; the Lode chain uses the guarded smoothed product.
SymTensor df_dsigma(const SymTensor& sigma, double ebar_p, double D,
                    const MaterialParams& p);

/// Unprojected stress gradient of f: df_dsigma plus the volumetric part of
/// the triaxiality chain. The flow rule keeps the deviatoric direction; the
/// consistency condition in the tangent needs this total derivative.
SymTensor df_dsigma_total(const SymTensor& sigma, double ebar_p, double D,
                          const MaterialParams& p);

}  // namespace ssdam
