#include "ssdam/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssdam/errors.hpp"

namespace ssdam {

namespace {

constexpr double kSaturationEps = 1e-6;    // fracture when hD >= 1 - this
constexpr double kTrialHTol = 1e-10;
constexpr double kEpsFixedPointTol = 1e-15;
constexpr int kEpsFixedPointMax = 80;

double sqrt23_norm(const SymTensor& N) {
  return std::sqrt(2.0 / 3.0 * N.ddot(N));
}

/// One evaluation of the implicit residuals at a candidate (dlam, D).
struct LocalEval {
  SymTensor eps_e;
  SymTensor sigma;
  SymTensor N;
  double h = 1.0;
  double Y = 0.0;
  double ebar = 0.0;
  double rate = 0.0;
  double R1 = 0.0;  // yield residual [MPa]
  double R2 = 0.0;  // damage residual
  bool valid = false;
};

/// The coupled local problem at fixed trial elastic strain. All stress-state
/// quantities are evaluated at the end-of-step iterate (fully implicit).
class LocalProblem {
 public:
  LocalProblem(const MaterialState& state_n, const SymTensor& eps_e_trial,
               const MaterialParams& p)
      : state_n_(state_n), eps_e_trial_(eps_e_trial), p_(p) {
    eps_e_guess_ = eps_e_trial;
  }

  double saturation_bound(double h) const {
    return (1.0 - kSaturationEps) / std::max(h, 1e-12);
  }

  LocalEval evaluate(double dlam, double D) {
    LocalEval e;
    e.eps_e = eps_e_guess_;
    e.ebar = state_n_.ebar_p;
    try {
      for (int k = 0; k < kEpsFixedPointMax; ++k) {
        const SymTensor base = elastic_stress(e.eps_e, 0.0, 1.0, p_);
        const StressState st = stress_state(base);
        e.h = stress_state_param_h(st.eta, st.theta0, p_);
        const double hD = e.h * D;
        if (hD >= 1.0 - 0.5 * kSaturationEps) return e;  // invalid
        e.sigma = base * (1.0 - hD);
        e.N = df_dsigma(e.sigma, e.ebar, D, p_);
        e.ebar = state_n_.ebar_p + dlam * sqrt23_norm(e.N);
        const SymTensor next = eps_e_trial_ - e.N * dlam;
        const double delta = (next - e.eps_e).norm();
        e.eps_e = next;
        if (delta <= kEpsFixedPointTol * (1.0 + eps_e_trial_.norm())) break;
      }
      e.Y = energy_release_Y(e.eps_e, e.h, p_);
      e.rate = damage_potential_rate(e.Y, D, e.h, p_);
      e.R1 = yield_function_f(e.sigma, e.ebar, D, p_);
      e.R2 = D - state_n_.D - dlam * e.rate;
      e.valid = true;
      eps_e_guess_ = e.eps_e;  // warm start for the next candidate
    } catch (const DegenerateStressError&) {
    } catch (const SaturatedDamageError&) {
    }
    return e;
  }

 private:
  const MaterialState& state_n_;
  SymTensor eps_e_trial_;
  const MaterialParams& p_;
  SymTensor eps_e_guess_;
};

Matrix6 scaled_outer(const SymTensor& a, const SymTensor& b, double k) {
  // a (x) b with the contraction weights on b baked into the columns.
  Matrix6 r;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      r.m[i][j] = k * a[i] * b[j] * (j >= 3 ? 2.0 : 1.0);
  return r;
}

}  // namespace

Matrix6 elastic_stiffness(const MaterialParams& p) {
  const auto [lambda_e, mu_e] = elastic_constants(p);
  Matrix6 C;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) C.m[i][j] = lambda_e;
    C.m[i][i] += 2.0 * mu_e;
    C.m[i + 3][i + 3] = 2.0 * mu_e;
  }
  return C;
}

TrialResult trial_step(const MaterialState& state, const SymTensor& delta_eps,
                       const MaterialParams& p) {
  if (state.fractured)
    throw InvalidArgumentError("trial_step: state already fractured");
  const SymTensor eps_e_trial = state.eps_e + delta_eps;
  const SymTensor base = elastic_stress(eps_e_trial, 0.0, 1.0, p);
  // h depends only on the stress direction, which the (1-hD) scaling leaves
  // unchanged; the fixed point settles in one sweep but is kept as a check.
  double h = stress_state_param_h(0.0, 1.0, p);
  SymTensor sigma_trial = base;
  for (int k = 0; k < 5; ++k) {
    const StressState st = stress_state(sigma_trial);
    const double h_new = st.degenerate
                             ? stress_state_param_h(0.0, 1.0, p)
                             : stress_state_param_h(st.eta, st.theta0, p);
    const double hD = h_new * state.D;
    if (hD >= 1.0)
      throw SaturatedDamageError("trial_step: hD >= 1");
    sigma_trial = base * (1.0 - hD);
    const bool settled = std::abs(h_new - h) <= kTrialHTol;
    h = h_new;
    if (settled && k > 0) break;
  }
  const double f_trial = yield_function_f(sigma_trial, state.ebar_p, state.D, p);
  return {sigma_trial, f_trial, h};
}

namespace {

StepResult make_elastic_result(const MaterialState& state,
                               const SymTensor& eps_e_trial,
                               const TrialResult& trial,
                               const MaterialParams& p) {
  StepResult r;
  r.state = state;
  r.state.eps_e = eps_e_trial;
  r.state.sigma = trial.sigma_trial;
  r.state.h = trial.h_trial;
  r.plastic = false;
  r.f_residual = trial.f_trial;
  r.tangent = elastic_stiffness(p) * (1.0 - trial.h_trial * state.D);
  return r;
}

StepResult make_fractured_result(const MaterialState& state,
                                 const LocalEval& e, double dlam, double D,
                                 int iterations, const MaterialParams& p) {
  StepResult r;
  r.state = state;
  r.state.eps_e = e.eps_e;
  r.state.ebar_p = e.ebar;
  r.state.D = D;
  r.state.sigma = e.sigma;
  r.state.h = e.h;
  r.state.fractured = true;
  r.plastic = true;
  r.delta_lambda = dlam;
  r.iterations = iterations;
  r.f_residual = e.R1;
  r.softening = true;
  r.tangent = elastic_stiffness(p) * (1.0 - std::min(e.h * D, 1.0 - kSaturationEps));
  return r;
}

bool is_fracture(double h, double D, const MaterialParams& p) {
  return D >= p.Dc || h * D >= 1.0 - kSaturationEps;
}

}  // namespace

StepResult return_map(const MaterialState& state, const SymTensor& delta_eps,
                      const MaterialParams& p) {
  const TrialResult trial = trial_step(state, delta_eps, p);
  const SymTensor eps_e_trial = state.eps_e + delta_eps;
  const StressState st_trial = stress_state(trial.sigma_trial);
  const double sy_ref =
      yield_stress(state.ebar_p, st_trial.eta, st_trial.theta0, p);

  if (trial.f_trial <= 0.0)
    return make_elastic_result(state, eps_e_trial, trial, p);

  LocalProblem problem(state, eps_e_trial, p);
  const auto [lambda_e, mu_e] = elastic_constants(p);

  double dlam = trial.f_trial / (3.0 * mu_e);
  double D = state.D;
  const double f_tol = p.tol_f * std::max(sy_ref, 1.0);
  const double d_tol = 1e-12;

  LocalEval e = problem.evaluate(dlam, D);
  int iter = 0;
  int stuck_at_bound = 0;
  bool converged = false;

  auto merit = [&](const LocalEval& ev) {
    const double r1 = ev.R1 / std::max(sy_ref, 1.0);
    return r1 * r1 + ev.R2 * ev.R2;
  };

  for (; iter < p.max_iter && e.valid; ++iter) {
    if (std::abs(e.R1) <= f_tol && std::abs(e.R2) <= d_tol) {
      converged = true;
      break;
    }
    // Finite-difference Jacobian of the scaled residuals.
    const double d1 = std::max(1e-12, 1e-7 * std::abs(dlam));
    const double d2 = std::max(1e-12, 1e-7 * std::abs(D));
    LocalEval e1 = problem.evaluate(dlam + d1, D);
    LocalEval e2 = problem.evaluate(dlam, D + d2);
    if (!e1.valid || !e2.valid) break;
    const double j11 = (e1.R1 - e.R1) / d1, j12 = (e2.R1 - e.R1) / d2;
    const double j21 = (e1.R2 - e.R2) / d1, j22 = (e2.R2 - e.R2) / d2;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-30) break;
    double step1 = -(e.R1 * j22 - e.R2 * j12) / det;
    double step2 = -(j11 * e.R2 - j21 * e.R1) / det;

    const double m0 = merit(e);
    bool accepted = false;
    double cut = 1.0;
    for (int ls = 0; ls < 10; ++ls, cut *= 0.5) {
      double cand_dlam = std::max(dlam + cut * step1, 0.0);
      double cand_D = std::clamp(D + cut * step2, state.D,
                                 problem.saturation_bound(e.h));
      LocalEval cand = problem.evaluate(cand_dlam, cand_D);
      if (cand.valid && merit(cand) < m0) {
        dlam = cand_dlam;
        D = cand_D;
        e = cand;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (D >= problem.saturation_bound(e.h) - 1e-12) {
      if (++stuck_at_bound >= 2)
        return make_fractured_result(state, e, dlam, D, iter + 1, p);
    } else {
      stuck_at_bound = 0;
    }
  }

  if (!converged) {
    // Bisection fallback on dlam; D follows from its own residual by a
    // damped inner iteration. The (Y-Y0)^alpha pole near saturation makes
    // the Newton residual stiff there.
    auto solve_D = [&](double dl, bool& runaway) {
      double Dk = std::max(D, state.D);
      runaway = false;
      for (int k = 0; k < 200; ++k) {
        LocalEval ev = problem.evaluate(dl, Dk);
        if (!ev.valid) {
          runaway = true;
          return std::min(problem.saturation_bound(1.0), p.Dc);
        }
        const double D_next =
            std::clamp(state.D + dl * ev.rate, state.D,
                       problem.saturation_bound(ev.h));
        if (std::abs(D_next - Dk) <= 1e-14 * (1.0 + Dk)) return D_next;
        if (D_next >= problem.saturation_bound(ev.h) - 1e-12) {
          runaway = true;
          return D_next;
        }
        Dk = 0.5 * (Dk + D_next);
      }
      return Dk;
    };
    auto f_of = [&](double dl, bool& runaway) {
      const double Dl = solve_D(dl, runaway);
      LocalEval ev = problem.evaluate(dl, Dl);
      D = Dl;
      e = ev;
      return ev.valid ? ev.R1 : -1.0;
    };
    bool runaway_lo = false, runaway_hi = false;
    double lo = 0.0, hi = std::max(dlam, trial.f_trial / (3.0 * mu_e));
    double f_hi = f_of(hi, runaway_hi);
    int expand = 0;
    while (f_hi > 0.0 && !runaway_hi && expand++ < 60) {
      lo = hi;
      hi *= 2.0;
      f_hi = f_of(hi, runaway_hi);
    }
    if (f_hi > 0.0 && !runaway_hi)
      throw NonConvergenceError("return_map: cannot bracket the consistency "
                                "residual", e.R1);
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      bool runaway_mid = false;
      const double f_mid = f_of(mid, runaway_mid);
      if (!runaway_mid && std::abs(f_mid) <= f_tol) {
        dlam = mid;
        converged = true;
        break;
      }
      if (f_mid > 0.0 && !runaway_mid)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-16 * (1.0 + hi)) {
        dlam = mid;
        converged = std::abs(f_mid) <= std::max(f_tol, 1e-6 * sy_ref) ||
                    runaway_mid;
        if (runaway_mid)
          return make_fractured_result(state, e, mid, D, iter, p);
        break;
      }
    }
    (void)runaway_lo;
    if (!converged)
      throw NonConvergenceError("return_map: local solve did not converge",
                                e.R1);
  }

  StepResult r;
  r.state.eps_e = e.eps_e;
  r.state.ebar_p = e.ebar;
  r.state.D = D;
  r.state.sigma = e.sigma;
  r.state.h = e.h;
  r.state.fractured = is_fracture(e.h, D, p);
  r.plastic = true;
  r.delta_lambda = dlam;
  r.iterations = iter;
  r.f_residual = e.R1;
  r.tangent = consistent_tangent(r, p);
  const SymTensor N = df_dsigma(r.state.sigma, r.state.ebar_p, r.state.D, p);
  const SymTensor M =
      df_dsigma_total(r.state.sigma, r.state.ebar_p, r.state.D, p);
  const Matrix6 C_ed = elastic_stiffness(p) * (1.0 - e.h * D);
  const double H_ep = plastic_modulus(r.state, p) + M.ddot(C_ed.apply(N)) +
                      M.ddot(r.state.sigma) * (e.h / (1.0 - e.h * D)) * e.rate;
  r.softening = H_ep <= 0.0;
  return r;
}

double plastic_modulus(const MaterialState& state, const MaterialParams& p) {
  const StressState st = stress_state(state.sigma);
  const double h = stress_state_param_h(st.eta, st.theta0, p);
  if (h * state.D >= 1.0)
    throw SaturatedDamageError("plastic_modulus: hD >= 1");
  const SymTensor N = df_dsigma(state.sigma, state.ebar_p, state.D, p);
  const double debar_dlam = sqrt23_norm(N);
  const double Y = energy_release_Y(state.eps_e, h, p);
  const double dD_dlam = damage_potential_rate(Y, state.D, h, p);
  return -df_debar(state.ebar_p, st.eta, st.theta0, p) * debar_dlam -
         df_dD(state.sigma, state.D, p) * dD_dlam;
}

Matrix6 consistent_tangent(const StepResult& step, const MaterialParams& p) {
  const MaterialState& s = step.state;
  const double hD = std::min(s.h * s.D, 1.0 - kSaturationEps);
  const Matrix6 C_ed = elastic_stiffness(p) * (1.0 - hD);
  if (!step.plastic) return C_ed;

  const SymTensor N = df_dsigma(s.sigma, s.ebar_p, s.D, p);
  // The flow direction N is deviatoric; consistency feels the full stress
  // gradient M including the volumetric triaxiality chain.
  const SymTensor M = df_dsigma_total(s.sigma, s.ebar_p, s.D, p);
  const SymTensor a = C_ed.apply(N);
  const SymTensor b = C_ed.apply(M);
  const double Y = energy_release_Y(s.eps_e, s.h, p);
  const double rate = damage_potential_rate(Y, s.D, s.h, p);
  // d(sigma)/dD at fixed elastic strain: -h sigma / (1 - hD).
  const SymTensor dsig_dD = s.sigma * (-s.h / (1.0 - hD));
  const double hp = plastic_modulus(s, p);
  const double H_ep = hp + M.ddot(a) - M.ddot(dsig_dD) * rate;

  // sigma_dot = C_ed eps_dot_e + dsig_dD D_dot, with
  // eps_dot_e = eps_dot - lam_dot N and D_dot = lam_dot rate,
  // lam_dot = (M : C_ed : eps_dot) / H_ep.
  const SymTensor numerator = a - dsig_dD * rate;
  Matrix6 tangent = C_ed;
  const Matrix6 correction = scaled_outer(numerator, b, 1.0 / H_ep);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) tangent.m[i][j] -= correction.m[i][j];
  return tangent;
}

}  // namespace ssdam
