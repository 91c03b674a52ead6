#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ssdam {

/// Symmetric second-order tensor in Voigt order (11, 22, 33, 12, 23, 13).
/// Shear entries are tensor components, not doubled engineering shear;
/// the double contraction weights them by 2 explicitly.
struct SymTensor {
  std::array<double, 6> c{};

  static SymTensor identity() { return {{1.0, 1.0, 1.0, 0.0, 0.0, 0.0}}; }
  static SymTensor diag(double a, double b, double d) {
    return {{a, b, d, 0.0, 0.0, 0.0}};
  }

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  SymTensor operator+(const SymTensor& o) const {
    SymTensor r;
    for (int i = 0; i < 6; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  SymTensor operator-(const SymTensor& o) const {
    SymTensor r;
    for (int i = 0; i < 6; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  SymTensor operator*(double k) const {
    SymTensor r;
    for (int i = 0; i < 6; ++i) r.c[i] = c[i] * k;
    return r;
  }
  SymTensor operator-() const { return *this * -1.0; }
  SymTensor& operator+=(const SymTensor& o) {
    for (int i = 0; i < 6; ++i) c[i] += o.c[i];
    return *this;
  }
  SymTensor& operator-=(const SymTensor& o) {
    for (int i = 0; i < 6; ++i) c[i] -= o.c[i];
    return *this;
  }

  double trace() const { return c[0] + c[1] + c[2]; }

  SymTensor deviator() const {
    const double p = trace() / 3.0;
    SymTensor r = *this;
    r.c[0] -= p;
    r.c[1] -= p;
    r.c[2] -= p;
    return r;
  }

  /// a : b with the shear terms weighted by 2.
  double ddot(const SymTensor& o) const {
    return c[0] * o.c[0] + c[1] * o.c[1] + c[2] * o.c[2] +
           2.0 * (c[3] * o.c[3] + c[4] * o.c[4] + c[5] * o.c[5]);
  }

  double norm() const { return std::sqrt(ddot(*this)); }

  /// (a^2)_ij = a_ik a_kj, itself symmetric.
  SymTensor square() const {
    const double t11 = c[0], t22 = c[1], t33 = c[2];
    const double t12 = c[3], t23 = c[4], t13 = c[5];
    SymTensor r;
    r.c[0] = t11 * t11 + t12 * t12 + t13 * t13;
    r.c[1] = t12 * t12 + t22 * t22 + t23 * t23;
    r.c[2] = t13 * t13 + t23 * t23 + t33 * t33;
    r.c[3] = t11 * t12 + t12 * t22 + t13 * t23;
    r.c[4] = t12 * t13 + t22 * t23 + t23 * t33;
    r.c[5] = t11 * t13 + t12 * t23 + t13 * t33;
    return r;
  }

  double det() const {
    const double t11 = c[0], t22 = c[1], t33 = c[2];
    const double t12 = c[3], t23 = c[4], t13 = c[5];
    return t11 * (t22 * t33 - t23 * t23) - t12 * (t12 * t33 - t23 * t13) +
           t13 * (t12 * t23 - t22 * t13);
  }
};

inline SymTensor operator*(double k, const SymTensor& t) { return t * k; }

struct Invariants {
  double I1;  ///< trace of sigma [MPa]
  double J2;  ///< 1/2 s:s of the deviator [MPa^2]
  double J3;  ///< det of the deviator [MPa^3]
};

struct DerivedStress {
  double sigma_m;   ///< mean stress I1/3 [MPa]
  double sigma_eq;  ///< von Mises equivalent stress sqrt(3 J2) [MPa]
  double r;         ///< signed cube root of 27 J3 / 2 [MPa]
};

/// Scalar descriptors of a stress tensor's state.
struct StressState {
  double sigma_m = 0.0;
  double sigma_eq = 0.0;
  double r = 0.0;
  double eta = 0.0;     ///< triaxiality sigma_m / sigma_eq
  double chi = 1.0;     ///< (r/sigma_eq)^3, clamped to [-1, 1]
  double theta = 0.0;   ///< Lode angle, [0, pi/3]
  double theta0 = 1.0;  ///< normalized Lode angle 1 - 6 theta / pi, [-1, 1]
  bool degenerate = false;  ///< sigma_eq ~ 0; eta/chi/theta defaulted
};

Invariants invariants(const SymTensor& sigma);
DerivedStress derived_quantities(const SymTensor& sigma);
StressState stress_state(const SymTensor& sigma);

/// |sin 3theta| guard below which the raw Lode gradient is refused.
inline constexpr double kLodeGuard = 1e-6;

/// d(sigma_eq)/d(sigma) = 3/2 s / sigma_eq. Deviatoric.
SymTensor dseq_dsigma(const SymTensor& sigma);

/// Deviatoric part of the triaxiality gradient, -3 eta / (2 sigma_eq^2) s.
SymTensor deta_dsigma(const SymTensor& sigma);

/// Deviatoric gradient of the normalized Lode angle theta0, assembled by
/// the chain rule through chi = cos 3theta. Throws NearSingularLodeError
/// when |sin 3theta| <= kLodeGuard.
SymTensor dtheta0_dsigma(const SymTensor& sigma);

/// [1 - (theta0^2)^m] * dtheta0_dsigma, the product appearing in the
/// smoothed h and sigma_y gradients. Returns zero inside the singularity
/// guard, where the smoothing factor annihilates the term.
SymTensor smoothed_lode_gradient(const SymTensor& sigma, int m);

}  // namespace ssdam
