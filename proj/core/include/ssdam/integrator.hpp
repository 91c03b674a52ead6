#pragma once

#include <array>

#include "ssdam/material.hpp"
#include "ssdam/sym_tensor.hpp"

namespace ssdam {

/// 6x6 operator acting on Voigt vectors with tensor shear components
/// (same storage convention as SymTensor).
struct Matrix6 {
  std::array<std::array<double, 6>, 6> m{};

  SymTensor apply(const SymTensor& v) const {
    SymTensor r;
    for (int i = 0; i < 6; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 6; ++j) acc += m[i][j] * v[j];
      r[i] = acc;
    }
    return r;
  }

  Matrix6 operator*(double k) const {
    Matrix6 r;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) r.m[i][j] = m[i][j] * k;
    return r;
  }
};

/// Isotropic elastic stiffness (undamaged) in the Voigt convention above.
Matrix6 elastic_stiffness(const MaterialParams& p);

/// Internal state of one material point.
struct MaterialState {
  SymTensor eps_e;        ///< elastic strain
  double ebar_p = 0.0;    ///< equivalent plastic strain
  double D = 0.0;         ///< damage
  SymTensor sigma;        ///< cached converged stress [MPa]
  double h = 1.0;         ///< cached stress-state parameter
  bool fractured = false;
};

struct StepResult {
  MaterialState state;
  bool plastic = false;
  double delta_lambda = 0.0;
  int iterations = 0;
  double f_residual = 0.0;  ///< [MPa]
  bool softening = false;   ///< H_ep <= 0 at the converged point
  Matrix6 tangent;
};

struct TrialResult {
  SymTensor sigma_trial;
  double f_trial;
  double h_trial;
};

/// Elastic predictor: freezes (ebar_p, D), advances eps_e by delta_eps and
/// resolves the h <-> sigma coupling by fixed point.
TrialResult trial_step(const MaterialState& state, const SymTensor& delta_eps,
                       const MaterialParams& p);

/// Strain-driven update: elastic predictor plus, if the trial state is
/// outside the yield surface, a fully implicit return mapping solved by
/// Newton iteration on (delta_lambda, D) with line-search and bisection
/// safeguards. The consistent tangent is attached to the result.
StepResult return_map(const MaterialState& state, const SymTensor& delta_eps,
                      const MaterialParams& p);

/// Plastic hardening modulus
/// h_p = -df/debar * debar/dlambda - df/dD * dD/dlambda at a converged state.
double plastic_modulus(const MaterialState& state, const MaterialParams& p);

/// Elastoplastic tangent of a converged step (elastic branch: (1-hD) C_e).
Matrix6 consistent_tangent(const StepResult& step, const MaterialParams& p);

}  // namespace ssdam
