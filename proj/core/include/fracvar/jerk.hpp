#pragma once

#include "fracvar/noether.hpp"
#include "fracvar/varcalc.hpp"

#include <span>
#include <string>
#include <vector>

namespace fracvar::jerk {

/// Third-order systems x''' = J(x, x', x''):
///   C5 : x''' + A x''  + x'    = G(x)
///   C14: x''' + A x''  - x'^2  + x = 0
///   C15: x''' + A x''  - x x'  + x = 0
///   C16: x''' + A x x'' - x'^2 + x = 0
///   C21: x''' - 2 x''^2/x' - x'^2/x = 0   (needs x > 0, x' > 0)
enum class JerkId { C5, C14, C15, C16, C21 };

struct JerkSystem {
  JerkId id = JerkId::C5;
  double A = 0.0;
  ScalarFn G;     // C5 only
  ScalarFn Gint;  // antiderivative of G
};

JerkSystem make_c5(double A, ScalarFn G, ScalarFn Gint);
/// C5 with the one-nonlinearity polynomial forcing G(x) = x^2 - B.
JerkSystem make_c5_poly(double A, double B);
/// C5 with constant forcing G = g0 (G integral g0*x); g0 = 1, A = 0 with zero
/// initial data has the closed-form solution x = t - sin t.
JerkSystem make_c5_const(double A, double g0);
JerkSystem make_c14(double A);
JerkSystem make_c15(double A);
JerkSystem make_c16(double A);
JerkSystem make_c21();

/// Position, velocity and acceleration samples of one integrated run.
struct Trajectory {
  Grid grid;
  SampledFn x, v, acc;
};

enum class IntegrateStatus { Ok, DomainExit, BlowUp };

struct IntegrateResult {
  Trajectory traj;       // possibly on a truncated grid
  IntegrateStatus status = IntegrateStatus::Ok;
  double t_stop = 0.0;   // last valid node time
};

/// Classic RK4 on (x, v, a). States above 1e12 in magnitude (or non-finite)
/// stop the run with BlowUp; C21 runs stop with DomainExit when x or x'
/// reaches 0. The returned trajectory is truncated to the valid prefix.
IntegrateResult integrate(const JerkSystem& sys, double x0, double v0, double a0, const Grid& grid);

/// The alpha = 1/2 Lagrangian paired with each system.
LagrangianSpec lagrangian_for(const JerkSystem& sys);

/// Classical specs used for the alpha = 1 reduction checks.
LagrangianSpec harmonic_oscillator_spec();
LagrangianSpec free_particle_spec();

/// Build a trajectory from analytic samples.
Trajectory sample_trajectory(const Grid& g, const std::function<double(double)>& fx,
                             const std::function<double(double)>& fv,
                             const std::function<double(double)>& fa);

/// RK4 harmonic-oscillator run (x'' = -x), via the x''' = -x' embedding.
Trajectory oscillator_trajectory(double x0, double v0, const Grid& g);

/// Scale or otherwise remap the position channel, keeping v, acc consistent
/// (used by the scale-symmetry checks).
Trajectory scaled(const Trajectory& traj, double factor);

/// Total energy A/2 x'^2 - 1/2 (D^1/2 x')^2 + 1/2 (D^1/2 x)^2 - int G dx
/// along a trajectory.
SampledFn hamiltonian_c5(const Trajectory& traj, double A, const ScalarFn& Gint);

/// Time-translation invariant A/2 x'^2 - (D^1/2 x')^2 - int G dx of the C5
/// Lagrangian.
SampledFn conserved_c13(const Trajectory& traj, double A, const ScalarFn& Gint);

/// Time-translation invariants of the C14/C15/C16 Lagrangians (closed form;
/// cross-validated against the autonomous bracket in the tests).
SampledFn conserved_c17_c18_c19(const Trajectory& traj, JerkId id, double A);

/// Scale-symmetry invariant t + (x/x') Dright^1/2 [ Dcaputo^1/2 ln x' ] of
/// the C21 Lagrangian. Requires x' > 0 on the whole trajectory.
SampledFn scale_invariant_c22(const Trajectory& traj);

/// Short-window energy ratios: for each window [t0, t0+d],
///   ratio_c8  = 1/2 (Dcaputo^1/2 x |_{t0+d})^2  / ((2/pi) x'(t0)^2 d)
///   ratio_c8b = 1/2 (Dcaputo^1/2 x'|_{t0+d})^2  / ((2/pi) x''(t0)^2 d)
/// Both tend to 1 as d -> 0. Entries are NaN when the reference derivative
/// vanishes.
struct WindowEnergyResult {
  std::vector<double> ratios_c8;
  std::vector<double> ratios_c8b;
};
WindowEnergyResult window_energy_approx(const Trajectory& traj, double t0,
                                        std::span<const double> deltas, int nodes_per_window = 128);

/// Direct ODE residual x''' - J(x, x', x'') at t0 (x''' by differentiating
/// the sampled acceleration).
double ode_residual_at(const JerkSystem& sys, const Trajectory& traj, double t0);

/// Canonical-variable display row for the C5 Lagrangian: q1 = x', p1 = A x',
/// q_1/2 = D^1/2 x with p_1/2 = q_1/2, and q_3/2 = D^1/2 x' with
/// p_3/2 = -q_3/2.
struct CanonicalRow {
  double t, q1, p1, q_half, p_half, q_threehalf, p_threehalf;
};
std::vector<CanonicalRow> canonical_table(const Trajectory& traj, double A, int rows = 11);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace fracvar::jerk
