#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssdam/integrator.hpp"
#include "ssdam/material.hpp"

namespace ssdam {

/// How one strain component of a load path is controlled.
struct ComponentControl {
  enum class Mode {
    Strain,       ///< strain ramps linearly to `target`
    Stress,       ///< stress held at `target` [MPa]
    StressRatio,  ///< stress held at `ratio` times the anchor's stress
  };
  Mode mode = Mode::Strain;
  double target = 0.0;
  int anchor = 0;
  double ratio = 0.0;
};

/// Prescribed loading program for a single material point. Component order
/// matches SymTensor (11, 22, 33, 12, 23, 13).
struct PathSpec {
  int steps = 1000;
  std::array<ComponentControl, 6> comps{};

  static PathSpec uniaxial_tension(double eps_max = 0.7, int steps = 2000);
  static PathSpec uniaxial_compression(double eps_max = 0.7, int steps = 2000);
  static PathSpec simple_shear(double eps12_max = 0.5, int steps = 2000);

  /// Fixed stress direction with the requested (eta, theta0), magnitude
  /// driven by the largest-normal-component strain.
  static PathSpec proportional_stress(double eta, double theta0,
                                      double eps_max, int steps);

  static std::optional<PathSpec> preset(const std::string& name,
                                        double magnitude, int steps);

  void validate() const;
};

/// One output row of a path run.
struct SimRecord {
  int step = 0;
  SymTensor eps_total;
  SymTensor sigma;
  double ebar_p = 0.0;
  double D = 0.0;
  double h = 1.0;
  double eta = 0.0;
  double theta0 = 1.0;
  double f_residual = 0.0;
  bool plastic = false;
  bool fractured = false;
};

/// Runs the path step by step; stress-controlled components are driven to
/// their targets (to 1e-6 E) by Newton iteration on the free strain
/// components. Terminates early when the point fractures.
std::vector<SimRecord> run_path(const MaterialParams& params,
                                const PathSpec& path);

/// Same as run_path but appends into `out`; on a thrown error the rows
/// completed so far remain in `out`.
void run_path_into(const MaterialParams& params, const PathSpec& path,
                   std::vector<SimRecord>& out);

/// Fracture strain read from a record sequence, linearly interpolated in D
/// to the critical damage between the last two rows. Empty when the path
/// did not fracture.
std::optional<double> fracture_strain(const std::vector<SimRecord>& records,
                                      const MaterialParams& params);

struct YieldSurfacePoint {
  double theta0;
  double lode_angle;  ///< radians, for the polar unfolding
  double radius;      ///< sigma_y / sigma_bar
};

/// Normalized yield radius over theta0 in [-1, 1].
std::vector<YieldSurfacePoint> yield_surface_sweep(const MaterialParams& params,
                                                   double ebar_p, double eta,
                                                   int samples);

/// Fracture-strain power law ebar_f = 0.44717 h^(-1.72555).
double locus_from_h(double h);

struct LocusRow {
  double eta;
  double theta0;
  double h;
  double ebar_f;  ///< NaN when the cell failed
  bool ok;
  std::string note;
};

struct LocusTable {
  std::vector<LocusRow> rows;
};

enum class LocusMode { PowerLaw, Simulated };

/// Damage locus over a stress-state grid. PowerLaw composes the stress-state
/// parameter with the power law; Simulated runs proportional paths through
/// the integrator to fracture. Failed cells are marked, the sweep continues.
LocusTable damage_locus_sweep(const MaterialParams& params,
                              const std::vector<double>& eta_grid,
                              const std::vector<double>& theta0_grid,
                              LocusMode mode);

struct PowerLawFit {
  double coefficient;
  double exponent;
};

/// Log-log least squares of ebar_f = coefficient * h^exponent.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

struct HardeningFit {
  double A;
  double B;
  double n;
  double residual;  ///< root-mean-square misfit [MPa]
};

/// Damped (Levenberg-style) nonlinear least squares of A + B x^n.
HardeningFit fit_hardening(const std::vector<std::pair<double, double>>& points);

}  // namespace ssdam
