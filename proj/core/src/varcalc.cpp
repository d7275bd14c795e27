#include "fracvar/varcalc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fracvar {

namespace {

double sup_norm(const SampledFn& x) {
  double s = 0.0;
  for (int j = 0; j <= x.grid.n; ++j) {
    if (!x.masked(j)) s = std::max(s, std::abs(x.values[static_cast<size_t>(j)]));
  }
  return s;
}

void require_spec(const LagrangianSpec& spec) {
  if (spec.deriv_order < 1 || spec.deriv_order > 3) {
    throw std::invalid_argument("LagrangianSpec: deriv_order must be 1, 2 or 3");
  }
  if (!(spec.alpha.alpha > 0.0 && spec.alpha.alpha <= 1.0)) {
    throw std::invalid_argument("LagrangianSpec: requires 0 < alpha <= 1");
  }
  if (!spec.L || !spec.dq || !spec.dqn) {
    throw std::invalid_argument("LagrangianSpec: L, dq, dqn must be set");
  }
  if (spec.has_g() && (!spec.gprime || !spec.dv)) {
    throw std::invalid_argument("LagrangianSpec: g channel needs gprime and dv");
  }
  for (const auto& ch : spec.channels) {
    if (!ch.f || !ch.fprime || !ch.dL) {
      throw std::invalid_argument("LagrangianSpec: incomplete f channel");
    }
  }
}

LagrangianFn wrap(ScalarLagrangianFn fn) {
  if (!fn) return {};
  return [fn = std::move(fn)](double t, double q, double qn, std::span<const double> u, double v) {
    return fn(t, q, qn, u.empty() ? 0.0 : u[0], v);
  };
}

}  // namespace

LagrangianSpec make_lagrangian(int deriv_order, FracOrder alpha, ScalarLagrangianFn L,
                               ScalarLagrangianFn dq, ScalarLagrangianFn dqn,
                               ScalarLagrangianFn du, ScalarLagrangianFn dv, ScalarFn f,
                               ScalarFn fprime, ScalarFn g, ScalarFn gprime, bool time_dependent) {
  LagrangianSpec spec;
  spec.deriv_order = deriv_order;
  spec.alpha = alpha;
  spec.L = wrap(std::move(L));
  spec.dq = wrap(std::move(dq));
  spec.dqn = wrap(std::move(dqn));
  spec.dv = wrap(std::move(dv));
  if (f) {
    if (!fprime || !du) throw std::invalid_argument("make_lagrangian: f channel needs fprime and du");
    spec.channels.push_back({std::move(f), std::move(fprime), wrap(std::move(du))});
  }
  spec.g = std::move(g);
  spec.gprime = std::move(gprime);
  spec.time_dependent = time_dependent;
  require_spec(spec);
  return spec;
}

void validate_variation(const VariationField& var, int deriv_order, double tol) {
  const SampledFn& eta = var.eta;
  const double bound = tol * std::max(1.0, sup_norm(eta));
  auto check = [&](const SampledFn& f, int level) {
    if (std::abs(f.values.front()) > bound || std::abs(f.values.back()) > bound) {
      throw std::invalid_argument("variation: derivative " + std::to_string(level) +
                                  " does not vanish at the endpoints");
    }
  };
  check(eta, 0);
  SampledFn d = eta;
  for (int i = 1; i <= deriv_order; ++i) {
    d = finite_diff(d, 1);
    check(d, i);
  }
}

TrajectoryFields eval_fields(const LagrangianSpec& spec, const SampledFn& q,
                             const SampledFn* qdot) {
  require_spec(spec);
  TrajectoryFields out;
  if (qdot != nullptr) {
    if (!(qdot->grid == q.grid)) throw std::invalid_argument("eval_fields: qdot grid mismatch");
    out.qn = *qdot;
  } else {
    out.qn = finite_diff(q, spec.deriv_order);
  }
  out.u.reserve(spec.channels.size());
  for (const auto& ch : spec.channels) {
    out.u.push_back(caputo_left(map(q, ch.f), spec.alpha));
  }
  if (spec.has_g()) {
    out.v = caputo_left(map(out.qn, spec.g), spec.alpha);
  } else {
    out.v = SampledFn(q.grid);
  }
  return out;
}

SampledFn eval_along(const LagrangianFn& fn, const SampledFn& q, const TrajectoryFields& fields) {
  SampledFn out(q.grid);
  std::vector<double> ubuf(fields.u.size());
  for (int j = 0; j <= q.grid.n; ++j) {
    bool m = q.masked(j) || fields.qn.masked(j) || fields.v.masked(j);
    for (const auto& u : fields.u) m = m || u.masked(j);
    if (m) {
      out.set_mask(j);
      continue;
    }
    for (size_t i = 0; i < fields.u.size(); ++i) ubuf[i] = fields.u[i].values[static_cast<size_t>(j)];
    out.values[static_cast<size_t>(j)] =
        fn(q.t(j), q.values[static_cast<size_t>(j)], fields.qn.values[static_cast<size_t>(j)],
           ubuf, fields.v.values[static_cast<size_t>(j)]);
  }
  return out;
}

double action(const LagrangianSpec& spec, const SampledFn& q) {
  const TrajectoryFields fields = eval_fields(spec, q);
  return trapezoid(eval_along(spec.L, q, fields));
}

ElBreakdown el_residual_terms(const LagrangianSpec& spec, const SampledFn& q,
                              const SampledFn* qdot) {
  const TrajectoryFields fields = eval_fields(spec, q, qdot);
  const int n = spec.deriv_order;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;

  ElBreakdown out;
  out.dq_term = eval_along(spec.dq, q, fields);

  out.dqn_term = finite_diff(eval_along(spec.dqn, q, fields), n);
  out.dqn_term = map(out.dqn_term, [sign](double v) { return sign * v; });

  out.f_term = SampledFn(q.grid);
  for (size_t i = 0; i < spec.channels.size(); ++i) {
    const auto& ch = spec.channels[i];
    SampledFn rd = rl_deriv_right(eval_along(ch.dL, q, fields), spec.alpha);
    SampledFn fp = map(q, ch.fprime);
    out.f_term = zip(out.f_term, zip(fp, rd, std::multiplies<double>()),
                     [](double a, double b) { return a + b; });
  }

  if (spec.has_g()) {
    SampledFn rd = rl_deriv_right(eval_along(spec.dv, q, fields), spec.alpha);
    SampledFn gp = map(fields.qn, spec.gprime);
    out.g_term = finite_diff(zip(gp, rd, std::multiplies<double>()), n);
    out.g_term = map(out.g_term, [sign](double v) { return sign * v; });
  } else {
    out.g_term = SampledFn(q.grid);
  }

  out.total = zip(zip(out.dq_term, out.dqn_term, std::plus<double>()),
                  zip(out.f_term, out.g_term, std::plus<double>()), std::plus<double>());
  return out;
}

SampledFn el_residual(const LagrangianSpec& spec, const SampledFn& q, const SampledFn* qdot) {
  return el_residual_terms(spec, q, qdot).total;
}

double gateaux_defect(const LagrangianSpec& spec, const SampledFn& q, const VariationField& var) {
  if (!(var.eta.grid == q.grid)) throw std::invalid_argument("gateaux_defect: grid mismatch");
  validate_variation(var, spec.deriv_order);

  const double eps = 1e-5 * std::max(1.0, sup_norm(q));
  auto shifted = [&](double s) {
    SampledFn qs = q;
    for (int j = 0; j <= q.grid.n; ++j) {
      qs.values[static_cast<size_t>(j)] += s * var.eta.values[static_cast<size_t>(j)];
    }
    return qs;
  };
  const double ds_numeric = (action(spec, shifted(eps)) - action(spec, shifted(-eps))) / (2.0 * eps);

  const SampledFn rho = el_residual(spec, q);
  SampledFn integrand(q.grid);
  for (int j = 0; j <= q.grid.n; ++j) {
    // eta vanishes (with its derivatives) at the ends, where the only masked
    // residual nodes can live; the product's limit there is 0.
    integrand.values[static_cast<size_t>(j)] =
        rho.masked(j) ? 0.0
                      : rho.values[static_cast<size_t>(j)] * var.eta.values[static_cast<size_t>(j)];
  }
  const double ds_analytic = trapezoid(integrand);
  return std::abs(ds_numeric - ds_analytic);
}

namespace {

Grid window_grid(const SampledFn& x, double t0, double delta, int m) {
  const double lo = t0 - delta / 2.0;
  const double hi = t0 + delta / 2.0;
  const double tol = 1e-12 * (x.grid.b - x.grid.a);
  if (lo < x.grid.a - tol || hi > x.grid.b + tol) {
    throw std::domain_error("window does not fit inside the sampled domain");
  }
  return Grid(std::max(lo, x.grid.a), std::min(hi, x.grid.b), m);
}

}  // namespace

MidpointLimitResult midpoint_limit(const SampledFn& x, FracOrder alpha, double t0,
                                   std::span<const double> windows, int nodes_per_window) {
  if (windows.empty()) throw std::invalid_argument("midpoint_limit: no windows");
  for (size_t i = 1; i < windows.size(); ++i) {
    if (!(windows[i] < windows[i - 1])) {
      throw std::invalid_argument("midpoint_limit: windows must be strictly decreasing");
    }
  }
  const int m = nodes_per_window + (nodes_per_window % 2);  // even, so t0 is a node

  MidpointLimitResult out;
  for (double delta : windows) {
    const SampledFn xw = resample(x, window_grid(x, t0, delta, m));
    const SampledFn composed = rl_deriv_right(caputo_left(xw, alpha), alpha);
    out.values.push_back(composed.values[static_cast<size_t>(m / 2)]);
  }

  const size_t k = out.values.size();
  double p = 1.0;
  if (k >= 3) {
    const double r1 = windows[k - 3] / windows[k - 2];
    const double r2 = windows[k - 2] / windows[k - 1];
    const double d1 = out.values[k - 3] - out.values[k - 2];
    const double d2 = out.values[k - 2] - out.values[k - 1];
    if (std::abs(r1 - r2) < 1e-6 * r1 && d2 != 0.0 && d1 / d2 > 0.0) {
      const double est = std::log(d1 / d2) / std::log(r2);
      if (std::isfinite(est) && est > 0.25 && est < 4.0) p = est;
    }
  }
  out.measured_order = p;
  if (k >= 2) {
    const double rho = windows[k - 2] / windows[k - 1];
    out.extrapolated =
        out.values[k - 1] + (out.values[k - 1] - out.values[k - 2]) / (std::pow(rho, p) - 1.0);
  } else {
    out.extrapolated = out.values.back();
  }
  return out;
}

MidpointElResult el_residual_midpoint(const LagrangianSpec& spec, const SampledFn& x, double t0,
                                      double delta, int nodes_per_window) {
  const int m = nodes_per_window + (nodes_per_window % 2);
  const SampledFn xw = resample(x, window_grid(x, t0, delta, m));
  const ElBreakdown b = el_residual_terms(spec, xw);
  const int mid = m / 2;
  auto at = [&](const SampledFn& f) {
    return f.masked(mid) ? 0.0 : std::abs(f.values[static_cast<size_t>(mid)]);
  };
  MidpointElResult out;
  out.residual = b.total.masked(mid) ? std::numeric_limits<double>::quiet_NaN()
                                     : b.total.values[static_cast<size_t>(mid)];
  out.max_term = std::max({at(b.dq_term), at(b.dqn_term), at(b.f_term), at(b.g_term)});
  return out;
}

double partials_audit(const LagrangianSpec& spec, const ProbeBox& box, int count,
                      std::uint64_t seed) {
  require_spec(spec);
  std::mt19937_64 rng(seed);
  auto draw = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const size_t nu = spec.channels.size();
  double worst = 0.0;
  for (int it = 0; it < count; ++it) {
    const double t = draw(box.t_lo, box.t_hi);
    const double q = draw(box.q_lo, box.q_hi);
    const double qn = draw(box.qn_lo, box.qn_hi);
    std::vector<double> u(nu);
    for (auto& ui : u) ui = draw(box.u_lo, box.u_hi);
    const double v = draw(box.v_lo, box.v_hi);

    auto value = [&](double tq, double tqn, std::span<const double> tu, double tv) {
      return spec.L(t, tq, tqn, tu, tv);
    };
    auto compare = [&](double declared, double plus, double minus, double step) {
      const double fd = (plus - minus) / (2.0 * step);
      const double rel = std::abs(fd - declared) / std::max({1.0, std::abs(fd), std::abs(declared)});
      worst = std::max(worst, rel);
    };

    const double hq = 1e-5 * std::max(1.0, std::abs(q));
    compare(spec.dq(t, q, qn, u, v), value(q + hq, qn, u, v), value(q - hq, qn, u, v), hq);
    const double hn = 1e-5 * std::max(1.0, std::abs(qn));
    compare(spec.dqn(t, q, qn, u, v), value(q, qn + hn, u, v), value(q, qn - hn, u, v), hn);
    for (size_t i = 0; i < nu; ++i) {
      const double hu = 1e-5 * std::max(1.0, std::abs(u[i]));
      std::vector<double> up = u, um = u;
      up[i] += hu;
      um[i] -= hu;
      compare(spec.channels[i].dL(t, q, qn, u, v), value(q, qn, up, v), value(q, qn, um, v), hu);
    }
    if (spec.has_g()) {
      const double hv = 1e-5 * std::max(1.0, std::abs(v));
      compare(spec.dv(t, q, qn, u, v), value(q, qn, u, v + hv), value(q, qn, u, v - hv), hv);
    }
  }
  return worst;
}

}  // namespace fracvar
