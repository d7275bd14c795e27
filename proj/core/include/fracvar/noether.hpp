#pragma once

#include "fracvar/varcalc.hpp"

namespace fracvar {

/// Infinitesimal generators of a one-parameter symmetry: f2(t,q) acts on
/// space, tau(t) on time. A null callable means that part is absent
/// (identically zero).
struct SymmetryGenerator {
  std::function<double(double, double)> f2;
  std::function<double(double)> tau;

  static SymmetryGenerator spatial(std::function<double(double, double)> f2_);
  static SymmetryGenerator time_translation();
};

/// Truncation policy for the transfer-formula series.
struct SeriesConfig {
  int max_order = 2;            // R, highest derivative order r kept (<= 6)
  double term_tol = 0.0;        // stop once a term's sup norm falls below this
  bool divergence_guard = true; // stop if the term magnitude grows twice in a row
};

struct TransferSeriesResult {
  SampledFn series;
  int terms_used = 0;
  bool guard_tripped = false;
};

/// The transfer-formula bracket
///   sum_{r=0}^{R} ( (-1)^r g^(r) . Jleft^{r+1-alpha}(f - f(a))
///                 + f^(r)        . Jright^{r+1-alpha} g )
/// whose time derivative equals g . Dcaputo_alpha f - f . Dright_alpha g when
/// the series converges (it terminates for polynomial f, g). Derivatives are
/// repeated first-order finite differences; the order-0 integral arising at
/// alpha = 1 is the identity.
TransferSeriesResult transfer_series(const SampledFn& f, const SampledFn& g, FracOrder alpha,
                                     const SeriesConfig& cfg);

/// Conserved bracket for a purely spatial symmetry (n = 1):
///   f2 (dL/dqn + g'(qdot) Dright_alpha[dL/dv]) + transfer_series(f2, dL/du_i)
/// summed over f channels. qdot, when non-null, replaces finite_diff(q,1).
SampledFn invariant_no_time(const LagrangianSpec& spec, const SampledFn& q,
                            const SymmetryGenerator& gen, const SeriesConfig& cfg,
                            const SampledFn* qdot = nullptr);

/// Full conserved bracket with both space and time generators (n = 1): the
/// spatial bracket plus
///   tau ( L - qdot dL/dqn - alpha (sum_i dL/du_i . u_i + dL/dv . v)
///         - dL/dv . Dcaputo_alpha[qdot g'(qdot)] ).
SampledFn invariant_general(const LagrangianSpec& spec, const SampledFn& q,
                            const SymmetryGenerator& gen, const SeriesConfig& cfg,
                            const SampledFn* qdot = nullptr);

/// The time-translation bracket for autonomous Lagrangians (the tau part of
/// invariant_general with tau = 1). Requires spec.time_dependent == false.
SampledFn autonomous_bracket(const LagrangianSpec& spec, const SampledFn& q,
                             const SampledFn* qdot = nullptr);

/// Off-shell check of the invariance necessary condition: for a spatially
/// invariant Lagrangian (dL/dq = 0 along q), a constant spatial generator and
/// an identity-like f channel, d/dt[invariant_no_time] + f2 * el_residual
/// vanishes identically in the continuum for ANY q, extremal or not. Returns
/// the max over interior nodes of that sum, normalized by the scale of the
/// two cancelling terms.
double offshell_defect(const LagrangianSpec& spec, const SampledFn& q,
                       const SymmetryGenerator& gen, const SeriesConfig& cfg,
                       double burn_in = 0.05);

/// Drift of a supposedly conserved series: max deviation from the first
/// retained node after trimming burn_in of the nodes at each end (plus any
/// masked nodes).
struct DriftReport {
  double max_drift = 0.0;
  double rel_drift = 0.0;
  int retained = 0;
};
DriftReport drift(const SampledFn& series, double burn_in);

}  // namespace fracvar
