#pragma once

#include "fracvar/fracops.hpp"
#include "fracvar/numgrid.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fracvar {

using ScalarFn = std::function<double(double)>;

/// Lagrangian-style callable: (t, q, qn, u, v) -> real, where qn is the n-th
/// time derivative of q, u holds the Caputo derivatives of the f_i(q)
/// channels, and v is the Caputo derivative of g(qn).
using LagrangianFn =
    std::function<double(double t, double q, double qn, std::span<const double> u, double v)>;

/// Same shape with a single fractional-of-q slot, for the common case.
using ScalarLagrangianFn = std::function<double(double, double, double, double, double)>;

/// One fractional-of-q channel: its composition map f, df/dq, and the partial
/// of L with respect to this channel's value.
struct FracChannel {
  ScalarFn f;
  ScalarFn fprime;
  LagrangianFn dL;
};

/// The data defining an action  S = int L(t, q, q^(n), D^alpha f_i(q),
/// D^alpha g(q^(n))) dt  together with the analytic partials of L. Most
/// Lagrangians carry at most one f channel; a product of two distinct
/// fractional arguments of q needs two.
struct LagrangianSpec {
  int deriv_order = 1;  // n in {1,2,3}
  FracOrder alpha{0.5};
  LagrangianFn L;
  LagrangianFn dq;    // dL/dq
  LagrangianFn dqn;   // dL/dq^(n)
  LagrangianFn dv;    // dL/dv; null when there is no g channel
  std::vector<FracChannel> channels;
  ScalarFn g;       // null when there is no g channel
  ScalarFn gprime;
  bool time_dependent = false;

  bool has_g() const { return static_cast<bool>(g); }
};

/// Build a spec from the one-f-one-g tuple (n, alpha, L, dL/dq, dL/dqn,
/// dL/du, dL/dv, f, f', g, g'). Pass a null f or g to omit that channel.
LagrangianSpec make_lagrangian(int deriv_order, FracOrder alpha, ScalarLagrangianFn L,
                               ScalarLagrangianFn dq, ScalarLagrangianFn dqn,
                               ScalarLagrangianFn du, ScalarLagrangianFn dv, ScalarFn f,
                               ScalarFn fprime, ScalarFn g, ScalarFn gprime,
                               bool time_dependent = false);

/// A variation direction eta with eta and its first n derivatives vanishing
/// at both endpoints.
struct VariationField {
  SampledFn eta;
};

/// Throws unless eta(a), eta(b) and the endpoint values of its first n
/// finite-difference derivatives are below tol * scale(eta).
void validate_variation(const VariationField& var, int deriv_order, double tol = 1e-4);

/// Sampled quantities shared by the action, residual and bracket evaluators.
struct TrajectoryFields {
  SampledFn qn;               // q^(n)
  std::vector<SampledFn> u;   // Caputo derivative of each f_i(q)
  SampledFn v;                // Caputo derivative of g(qn); zeros when no g
};

/// Compute the sampled fields along q. qdot, when non-null, replaces the
/// finite-difference q^(n) (only meaningful for n = 1, e.g. to reuse an
/// integrator's velocity).
TrajectoryFields eval_fields(const LagrangianSpec& spec, const SampledFn& q,
                             const SampledFn* qdot = nullptr);

/// Evaluate a Lagrangian-style callable along q given precomputed fields.
SampledFn eval_along(const LagrangianFn& fn, const SampledFn& q, const TrajectoryFields& fields);

/// The action integral, by composite trapezoid.
double action(const LagrangianSpec& spec, const SampledFn& q);

/// Pointwise Euler-Lagrange residual
///   dL/dq + (-1)^n d^n/dt^n dL/dqn
///   + sum_i f_i'(q) Dright_alpha[dL/du_i]
///   + (-1)^n d^n/dt^n ( g'(q^(n)) Dright_alpha[dL/dv] ).
/// Zero (up to discretization) iff q is an extremal candidate. Masked
/// singular endpoints of the right RL derivative propagate into the output.
SampledFn el_residual(const LagrangianSpec& spec, const SampledFn& q,
                      const SampledFn* qdot = nullptr);

/// Residual split into its four signed terms (their sum is el_residual).
struct ElBreakdown {
  SampledFn total;
  SampledFn dq_term;
  SampledFn dqn_term;
  SampledFn f_term;
  SampledFn g_term;
};
ElBreakdown el_residual_terms(const LagrangianSpec& spec, const SampledFn& q,
                              const SampledFn* qdot = nullptr);

/// |dS_numeric - dS_analytic| where dS_numeric is the symmetric difference
/// quotient (S[q+eps*eta]-S[q-eps*eta])/(2 eps) with eps = 1e-5 scale(q), and
/// dS_analytic = int eta * el_residual dt.
double gateaux_defect(const LagrangianSpec& spec, const SampledFn& q, const VariationField& var);

/// Windowed evaluation of the composed operator Dright_alpha [ Dcaputo_alpha x ]
/// at the centre of nested windows around t0, plus a Richardson-extrapolated
/// window -> 0 limit. Extrapolation assumes first order in the window size
/// unless the measured order of the last three values says otherwise.
struct MidpointLimitResult {
  std::vector<double> values;  // one per window, widest first
  double extrapolated = 0.0;
  double measured_order = 1.0;
};
MidpointLimitResult midpoint_limit(const SampledFn& x, FracOrder alpha, double t0,
                                   std::span<const double> windows, int nodes_per_window = 256);

/// Euler-Lagrange residual evaluated at the midpoint of a window [t0-d/2,
/// t0+d/2], with all fractional operators taking the window as their
/// interval. max_term is the largest magnitude among the four residual terms
/// at the midpoint, the natural scale for "how close to zero" the residual is.
struct MidpointElResult {
  double residual = 0.0;
  double max_term = 0.0;
};
MidpointElResult el_residual_midpoint(const LagrangianSpec& spec, const SampledFn& x, double t0,
                                      double delta, int nodes_per_window = 256);

/// Probe ranges for the finite-difference audit of the declared partials.
struct ProbeBox {
  double t_lo = 0.25, t_hi = 1.75;
  double q_lo = 0.25, q_hi = 1.75;
  double qn_lo = 0.25, qn_hi = 1.75;
  double u_lo = -0.75, u_hi = 0.75;
  double v_lo = -0.75, v_hi = 0.75;
};

/// Max relative mismatch between each declared partial of L and a central
/// finite difference of L in that slot, over `count` seeded random probes.
double partials_audit(const LagrangianSpec& spec, const ProbeBox& box = {}, int count = 64,
                      std::uint64_t seed = 0x5eed5eedULL);

}  // namespace fracvar
