#include "fracvar/noether.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracvar {

namespace {

double sup_unmasked(const SampledFn& x) {
  double s = 0.0;
  for (int j = 0; j <= x.grid.n; ++j) {
    if (!x.masked(j)) s = std::max(s, std::abs(x.values[static_cast<size_t>(j)]));
  }
  return s;
}

void require_first_order(const LagrangianSpec& spec, const char* op) {
  if (spec.deriv_order != 1) {
    throw std::invalid_argument(std::string(op) + ": only n = 1 Lagrangians are supported");
  }
}

SampledFn add(const SampledFn& a, const SampledFn& b) {
  return zip(a, b, std::plus<double>());
}

SampledFn sample_f2(const SymmetryGenerator& gen, const SampledFn& q) {
  SampledFn out(q.grid);
  if (!gen.f2) return out;
  for (int j = 0; j <= q.grid.n; ++j) {
    out.values[static_cast<size_t>(j)] = gen.f2(q.t(j), q.values[static_cast<size_t>(j)]);
  }
  return out;
}

// Fractional integral of order beta >= 0 as used by the series; order 0 is
// the identity (the alpha = 1, r = 0 term).
SampledFn series_integral(const SampledFn& x, double beta, bool right) {
  if (beta == 0.0) return x;
  return right ? rl_integral_right(x, FracOrder{beta}) : rl_integral_left(x, FracOrder{beta});
}

// The tau-multiplied content of the general bracket.
SampledFn time_bracket(const LagrangianSpec& spec, const SampledFn& q,
                       const TrajectoryFields& fields) {
  const double al = spec.alpha.alpha;
  SampledFn lsamp = eval_along(spec.L, q, fields);
  SampledFn dqn = eval_along(spec.dqn, q, fields);
  SampledFn out = zip(lsamp, zip(fields.qn, dqn, std::multiplies<double>()),
                      [](double l, double p) { return l - p; });
  for (size_t i = 0; i < spec.channels.size(); ++i) {
    SampledFn du = eval_along(spec.channels[i].dL, q, fields);
    out = zip(out, zip(du, fields.u[i], std::multiplies<double>()),
              [al](double acc, double term) { return acc - al * term; });
  }
  if (spec.has_g()) {
    SampledFn dv = eval_along(spec.dv, q, fields);
    out = zip(out, zip(dv, fields.v, std::multiplies<double>()),
              [al](double acc, double term) { return acc - al * term; });
    SampledFn qg = zip(fields.qn, map(fields.qn, spec.gprime), std::multiplies<double>());
    SampledFn cap = caputo_left(qg, spec.alpha);
    out = zip(out, zip(dv, cap, std::multiplies<double>()),
              [](double acc, double term) { return acc - term; });
  }
  return out;
}

SampledFn spatial_bracket(const LagrangianSpec& spec, const SampledFn& q,
                          const TrajectoryFields& fields, const SymmetryGenerator& gen,
                          const SeriesConfig& cfg) {
  // An absent spatial generator contributes exactly nothing.
  if (!gen.f2) return SampledFn(q.grid);
  const SampledFn f2 = sample_f2(gen, q);

  SampledFn inner = eval_along(spec.dqn, q, fields);
  if (spec.has_g()) {
    SampledFn rd = rl_deriv_right(eval_along(spec.dv, q, fields), spec.alpha);
    SampledFn gp = map(fields.qn, spec.gprime);
    inner = add(inner, zip(gp, rd, std::multiplies<double>()));
  }
  SampledFn out = zip(f2, inner, std::multiplies<double>());

  for (const auto& ch : spec.channels) {
    SampledFn du = eval_along(ch.dL, q, fields);
    out = add(out, transfer_series(f2, du, spec.alpha, cfg).series);
  }
  return out;
}

}  // namespace

SymmetryGenerator SymmetryGenerator::spatial(std::function<double(double, double)> f2_) {
  SymmetryGenerator g;
  g.f2 = std::move(f2_);
  return g;
}

SymmetryGenerator SymmetryGenerator::time_translation() {
  SymmetryGenerator g;
  g.tau = [](double) { return 1.0; };
  return g;
}

TransferSeriesResult transfer_series(const SampledFn& f, const SampledFn& g, FracOrder alpha,
                                     const SeriesConfig& cfg) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("transfer_series: grid mismatch");
  if (cfg.max_order < 0 || cfg.max_order > 6) {
    throw std::invalid_argument("transfer_series: max_order must be in [0,6]");
  }
  if (!(alpha.alpha > 0.0 && alpha.alpha <= 1.0)) {
    throw std::invalid_argument("transfer_series: requires 0 < alpha <= 1");
  }

  const double fa = f.values.front();
  const SampledFn fshift = map(f, [fa](double v) { return v - fa; });

  TransferSeriesResult out;
  out.series = SampledFn(f.grid);

  SampledFn fr = f;
  SampledFn gr = g;
  double prev1 = -1.0, prev2 = -1.0;
  for (int r = 0; r <= cfg.max_order; ++r) {
    if (r > 0) {
      fr = finite_diff(fr, 1);
      gr = finite_diff(gr, 1);
    }
    const double beta = r + 1.0 - alpha.alpha;
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    SampledFn term = zip(map(gr, [sign](double v) { return sign * v; }),
                         series_integral(fshift, beta, /*right=*/false), std::multiplies<double>());
    term = add(term, zip(fr, series_integral(g, beta, /*right=*/true), std::multiplies<double>()));

    const double mag = sup_unmasked(term);
    if (cfg.divergence_guard && r >= 2 && mag > prev1 && prev1 > prev2) {
      out.guard_tripped = true;
      break;
    }
    out.series = add(out.series, term);
    out.terms_used = r + 1;
    if (cfg.term_tol > 0.0 && mag < cfg.term_tol) break;
    prev2 = prev1;
    prev1 = mag;
  }
  return out;
}

SampledFn invariant_no_time(const LagrangianSpec& spec, const SampledFn& q,
                            const SymmetryGenerator& gen, const SeriesConfig& cfg,
                            const SampledFn* qdot) {
  require_first_order(spec, "invariant_no_time");
  if (gen.tau) {
    for (int j = 0; j <= q.grid.n; ++j) {
      if (gen.tau(q.t(j)) != 0.0) {
        throw std::invalid_argument("invariant_no_time: generator must have tau == 0");
      }
    }
  }
  const TrajectoryFields fields = eval_fields(spec, q, qdot);
  return spatial_bracket(spec, q, fields, gen, cfg);
}

SampledFn invariant_general(const LagrangianSpec& spec, const SampledFn& q,
                            const SymmetryGenerator& gen, const SeriesConfig& cfg,
                            const SampledFn* qdot) {
  require_first_order(spec, "invariant_general");
  const TrajectoryFields fields = eval_fields(spec, q, qdot);
  SampledFn out = spatial_bracket(spec, q, fields, gen, cfg);
  if (gen.tau) {
    SampledFn tb = time_bracket(spec, q, fields);
    SampledFn tau(q.grid);
    for (int j = 0; j <= q.grid.n; ++j) tau.values[static_cast<size_t>(j)] = gen.tau(q.t(j));
    out = add(out, zip(tau, tb, std::multiplies<double>()));
  }
  return out;
}

SampledFn autonomous_bracket(const LagrangianSpec& spec, const SampledFn& q,
                             const SampledFn* qdot) {
  require_first_order(spec, "autonomous_bracket");
  if (spec.time_dependent) {
    throw std::invalid_argument("autonomous_bracket: Lagrangian depends explicitly on time");
  }
  const TrajectoryFields fields = eval_fields(spec, q, qdot);
  return time_bracket(spec, q, fields);
}

double offshell_defect(const LagrangianSpec& spec, const SampledFn& q,
                       const SymmetryGenerator& gen, const SeriesConfig& cfg, double burn_in) {
  require_first_order(spec, "offshell_defect");
  if (gen.tau) throw std::invalid_argument("offshell_defect: requires tau == 0");
  if (!gen.f2) throw std::invalid_argument("offshell_defect: requires a spatial generator");

  const TrajectoryFields fields = eval_fields(spec, q);

  // Preconditions for the continuum identity: dL/dq vanishes along q, f2 is
  // constant along the trajectory, and every f channel has f' == 1 along q
  // (or a zero partial).
  const SampledFn dq = eval_along(spec.dq, q, fields);
  if (sup_unmasked(dq) > 1e-12) {
    throw std::invalid_argument("offshell_defect: Lagrangian is not space-translation invariant");
  }
  const SampledFn f2 = sample_f2(gen, q);
  double f2lo = f2.values.front(), f2hi = f2.values.front();
  for (double v : f2.values) {
    f2lo = std::min(f2lo, v);
    f2hi = std::max(f2hi, v);
  }
  if (f2hi - f2lo > 1e-12 * std::max(1.0, std::abs(f2hi))) {
    throw std::invalid_argument("offshell_defect: generator f2 must be constant");
  }
  for (const auto& ch : spec.channels) {
    for (int j = 0; j <= q.grid.n; ++j) {
      if (std::abs(ch.fprime(q.values[static_cast<size_t>(j)]) - 1.0) > 1e-12) {
        throw std::invalid_argument("offshell_defect: f channel must be identity-like");
      }
    }
  }

  const SampledFn bracket = spatial_bracket(spec, q, fields, gen, cfg);
  const SampledFn rate = finite_diff(bracket, 1);
  const SampledFn rho = el_residual(spec, q);

  const int n = q.grid.n;
  const int trim = static_cast<int>(std::ceil(burn_in * (n + 1)));
  double worst = 0.0, scale = 0.0;
  for (int j = trim; j <= n - trim; ++j) {
    if (rate.masked(j) || rho.masked(j) || f2.masked(j)) continue;
    const double a = rate.values[static_cast<size_t>(j)];
    const double b = f2.values[static_cast<size_t>(j)] * rho.values[static_cast<size_t>(j)];
    worst = std::max(worst, std::abs(a + b));
    scale = std::max({scale, std::abs(a), std::abs(b)});
  }
  return worst / std::max(scale, 1e-300);
}

DriftReport drift(const SampledFn& series, double burn_in) {
  if (burn_in < 0.0 || burn_in >= 0.5) throw std::invalid_argument("drift: burn_in must be in [0, 0.5)");
  const int n = series.grid.n;
  const int trim = static_cast<int>(std::ceil(burn_in * (n + 1)));

  DriftReport out;
  bool have_ref = false;
  double ref = 0.0;
  for (int j = trim; j <= n - trim; ++j) {
    if (series.masked(j)) continue;
    const double v = series.values[static_cast<size_t>(j)];
    if (!have_ref) {
      ref = v;
      have_ref = true;
    }
    out.max_drift = std::max(out.max_drift, std::abs(v - ref));
    ++out.retained;
  }
  if (out.retained < 10) {
    throw std::domain_error("drift: fewer than 10 unmasked nodes after burn-in");
  }
  out.rel_drift = out.max_drift / std::max(1.0, std::abs(ref));
  return out;
}

}  // namespace fracvar
