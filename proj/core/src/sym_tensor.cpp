#include "ssdam/sym_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ssdam/errors.hpp"

namespace ssdam {

namespace {

// sigma_eq below this (relative to the tensor magnitude) counts as degenerate.
constexpr double kDegenerateTol = 1e-12;

bool is_degenerate(double sigma_eq, const SymTensor& sigma) {
  return sigma_eq <= kDegenerateTol * std::max(1.0, sigma.norm());
}

}  // namespace

Invariants invariants(const SymTensor& sigma) {
  const SymTensor s = sigma.deviator();
  return {sigma.trace(), 0.5 * s.ddot(s), s.det()};
}

DerivedStress derived_quantities(const SymTensor& sigma) {
  const auto [I1, J2, J3] = invariants(sigma);
  return {I1 / 3.0, std::sqrt(3.0 * J2), std::cbrt(13.5 * J3)};
}

StressState stress_state(const SymTensor& sigma) {
  const auto d = derived_quantities(sigma);
  StressState st;
  st.sigma_m = d.sigma_m;
  st.sigma_eq = d.sigma_eq;
  st.r = d.r;
  if (is_degenerate(d.sigma_eq, sigma)) {
    st.degenerate = true;  // eta=0, chi=1, theta=0, theta0=1 defaults
    return st;
  }
  st.eta = d.sigma_m / d.sigma_eq;
  const double ratio = d.r / d.sigma_eq;
  st.chi = std::clamp(ratio * ratio * ratio, -1.0, 1.0);
  st.theta = std::acos(st.chi) / 3.0;
  st.theta0 = 1.0 - 6.0 * st.theta / std::numbers::pi;
  return st;
}

SymTensor dseq_dsigma(const SymTensor& sigma) {
  const auto d = derived_quantities(sigma);
  if (is_degenerate(d.sigma_eq, sigma))
    throw DegenerateStressError("dseq_dsigma: sigma_eq ~ 0");
  return sigma.deviator() * (1.5 / d.sigma_eq);
}

SymTensor deta_dsigma(const SymTensor& sigma) {
  const auto d = derived_quantities(sigma);
  if (is_degenerate(d.sigma_eq, sigma))
    throw DegenerateStressError("deta_dsigma: sigma_eq ~ 0");
  const double eta = d.sigma_m / d.sigma_eq;
  return sigma.deviator() * (-1.5 * eta / (d.sigma_eq * d.sigma_eq));
}

namespace {

// d(chi)/d(sigma) with chi = 27 J3 / (2 sigma_eq^3). Deviatoric.
SymTensor dchi_dsigma(const SymTensor& sigma) {
  const SymTensor s = sigma.deviator();
  const double J2 = 0.5 * s.ddot(s);
  const double J3 = s.det();
  const double seq = std::sqrt(3.0 * J2);
  const double seq3 = seq * seq * seq;
  const SymTensor dJ3 = s.square() - SymTensor::identity() * (2.0 / 3.0 * J2);
  return dJ3 * (13.5 / seq3) - s * (13.5 * 4.5 * J3 / (seq3 * seq * seq));
}

}  // namespace

SymTensor dtheta0_dsigma(const SymTensor& sigma) {
  const StressState st = stress_state(sigma);
  if (st.degenerate) throw DegenerateStressError("dtheta0_dsigma: sigma_eq ~ 0");
  const double sin3t = std::sin(3.0 * st.theta);
  if (std::abs(sin3t) <= kLodeGuard)
    throw NearSingularLodeError("dtheta0_dsigma: |sin 3theta| within guard");
  // theta0 = 1 - (2/pi) arccos(chi)  =>  dtheta0/dchi = 2 / (pi sin 3theta)
  return dchi_dsigma(sigma) * (2.0 / (std::numbers::pi * sin3t));
}

SymTensor smoothed_lode_gradient(const SymTensor& sigma, int m) {
  const StressState st = stress_state(sigma);
  if (st.degenerate)
    throw DegenerateStressError("smoothed_lode_gradient: sigma_eq ~ 0");
  const double sin3t = std::sin(3.0 * st.theta);
  if (std::abs(sin3t) <= kLodeGuard) return SymTensor{};
  const double t2 = st.theta0 * st.theta0;
  const double factor = 1.0 - std::pow(t2, m);
  return dtheta0_dsigma(sigma) * factor;
}

}  // namespace ssdam
