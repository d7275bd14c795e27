#include "fracvar/jerk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fracvar::jerk {

namespace {

constexpr double kBlowUp = 1e12;

double jerk_rhs(const JerkSystem& sys, double x, double v, double a) {
  switch (sys.id) {
    case JerkId::C5:
      return sys.G(x) - sys.A * a - v;
    case JerkId::C14:
      return -sys.A * a + v * v - x;
    case JerkId::C15:
      return -sys.A * a + x * v - x;
    case JerkId::C16:
      return -sys.A * x * a + v * v - x;
    case JerkId::C21:
      return 2.0 * a * a / v + v * v / x;
  }
  throw std::logic_error("jerk_rhs: unknown system");
}

bool in_domain(const JerkSystem& sys, double x, double v) {
  if (sys.id != JerkId::C21) return true;
  return x > 0.0 && v > 0.0;
}

bool finite_state(double x, double v, double a) {
  return std::isfinite(x) && std::isfinite(v) && std::isfinite(a) &&
         std::abs(x) < kBlowUp && std::abs(v) < kBlowUp && std::abs(a) < kBlowUp;
}

}  // namespace

JerkSystem make_c5(double A, ScalarFn G, ScalarFn Gint) {
  return {JerkId::C5, A, std::move(G), std::move(Gint)};
}

JerkSystem make_c5_poly(double A, double B) {
  return make_c5(
      A, [B](double x) { return x * x - B; },
      [B](double x) { return x * x * x / 3.0 - B * x; });
}

JerkSystem make_c5_const(double A, double g0) {
  return {JerkId::C5, A, [g0](double) { return g0; }, [g0](double x) { return g0 * x; }};
}

JerkSystem make_c14(double A) { return {JerkId::C14, A, {}, {}}; }
JerkSystem make_c15(double A) { return {JerkId::C15, A, {}, {}}; }
JerkSystem make_c16(double A) { return {JerkId::C16, A, {}, {}}; }
JerkSystem make_c21() { return {JerkId::C21, 0.0, {}, {}}; }

IntegrateResult integrate(const JerkSystem& sys, double x0, double v0, double a0,
                          const Grid& grid) {
  if (sys.id == JerkId::C5 && (!sys.G || !sys.Gint)) {
    throw std::invalid_argument("integrate: C5 needs G and its antiderivative");
  }
  if (sys.id == JerkId::C21 && (x0 <= 0.0 || v0 <= 0.0)) {
    throw std::invalid_argument("integrate: C21 requires x0 > 0 and v0 > 0");
  }

  const int n = grid.n;
  const double h = grid.h;
  std::vector<double> xs(static_cast<size_t>(n) + 1), vs(xs.size()), as(xs.size());
  xs[0] = x0;
  vs[0] = v0;
  as[0] = a0;

  IntegrateStatus status = IntegrateStatus::Ok;
  int last = 0;
  for (int k = 0; k < n; ++k) {
    const double x = xs[static_cast<size_t>(k)];
    const double v = vs[static_cast<size_t>(k)];
    const double a = as[static_cast<size_t>(k)];

    auto stage_ok = [&](double sx, double sv) { return in_domain(sys, sx, sv); };

    const double j1 = jerk_rhs(sys, x, v, a);
    const double x2 = x + 0.5 * h * v, v2 = v + 0.5 * h * a, a2 = a + 0.5 * h * j1;
    if (!stage_ok(x2, v2)) {
      status = IntegrateStatus::DomainExit;
      break;
    }
    const double j2 = jerk_rhs(sys, x2, v2, a2);
    const double x3 = x + 0.5 * h * v2, v3 = v + 0.5 * h * a2, a3 = a + 0.5 * h * j2;
    if (!stage_ok(x3, v3)) {
      status = IntegrateStatus::DomainExit;
      break;
    }
    const double j3 = jerk_rhs(sys, x3, v3, a3);
    const double x4 = x + h * v3, v4 = v + h * a3, a4 = a + h * j3;
    if (!stage_ok(x4, v4)) {
      status = IntegrateStatus::DomainExit;
      break;
    }
    const double j4 = jerk_rhs(sys, x4, v4, a4);

    const double xn = x + h / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
    const double vn = v + h / 6.0 * (a + 2.0 * a2 + 2.0 * a3 + a4);
    const double an = a + h / 6.0 * (j1 + 2.0 * j2 + 2.0 * j3 + j4);

    if (!finite_state(xn, vn, an)) {
      status = IntegrateStatus::BlowUp;
      break;
    }
    if (!in_domain(sys, xn, vn)) {
      status = IntegrateStatus::DomainExit;
      break;
    }
    xs[static_cast<size_t>(k) + 1] = xn;
    vs[static_cast<size_t>(k) + 1] = vn;
    as[static_cast<size_t>(k) + 1] = an;
    last = k + 1;
  }

  if (last < 2) throw std::domain_error("integrate: fewer than 3 valid nodes before stopping");

  IntegrateResult out;
  out.status = status;
  out.t_stop = grid.node(last);
  const Grid g = (last == n) ? grid : Grid(grid.a, grid.node(last), last);
  out.traj.grid = g;
  out.traj.x = SampledFn(g);
  out.traj.v = SampledFn(g);
  out.traj.acc = SampledFn(g);
  for (int j = 0; j <= last; ++j) {
    out.traj.x.values[static_cast<size_t>(j)] = xs[static_cast<size_t>(j)];
    out.traj.v.values[static_cast<size_t>(j)] = vs[static_cast<size_t>(j)];
    out.traj.acc.values[static_cast<size_t>(j)] = as[static_cast<size_t>(j)];
  }
  return out;
}

LagrangianSpec lagrangian_for(const JerkSystem& sys) {
  const double A = sys.A;
  const FracOrder half{0.5};
  auto id = [](double s) { return s; };
  auto one = [](double) { return 1.0; };
  auto sq = [](double s) { return s * s; };
  auto two_s = [](double s) { return 2.0 * s; };

  switch (sys.id) {
    case JerkId::C5: {
      const ScalarFn G = sys.G, Gint = sys.Gint;
      return make_lagrangian(
          1, half,
          [A, Gint](double, double q, double qn, double u, double v) {
            return A / 2.0 * qn * qn - 0.5 * v * v + 0.5 * u * u + Gint(q);
          },
          [G](double, double q, double, double, double) { return G(q); },
          [A](double, double, double qn, double, double) { return A * qn; },
          [](double, double, double, double u, double) { return u; },
          [](double, double, double, double, double v) { return -v; }, id, one, id, one);
    }
    case JerkId::C14:
      return make_lagrangian(
          1, half,
          [A](double, double q, double qn, double u, double v) {
            return A / 2.0 * qn * qn - 0.5 * v * v + 0.5 * u * v - q * q / 2.0;
          },
          [](double, double q, double, double, double) { return -q; },
          [A](double, double, double qn, double, double) { return A * qn; },
          [](double, double, double, double, double v) { return 0.5 * v; },
          [](double, double, double, double u, double v) { return -v + 0.5 * u; }, sq, two_s, id,
          one);
    case JerkId::C15: {
      // Two fractional arguments of q (q^2 and q) share one product term.
      LagrangianSpec spec;
      spec.deriv_order = 1;
      spec.alpha = half;
      spec.L = [A](double, double q, double qn, std::span<const double> u, double v) {
        return A / 2.0 * qn * qn - 0.5 * v * v - 0.25 * u[0] * u[1] - q * q / 2.0;
      };
      spec.dq = [](double, double q, double, std::span<const double>, double) { return -q; };
      spec.dqn = [A](double, double, double qn, std::span<const double>, double) { return A * qn; };
      spec.dv = [](double, double, double, std::span<const double>, double v) { return -v; };
      spec.channels.push_back(
          {sq, two_s,
           [](double, double, double, std::span<const double> u, double) { return -0.25 * u[1]; }});
      spec.channels.push_back(
          {id, one,
           [](double, double, double, std::span<const double> u, double) { return -0.25 * u[0]; }});
      spec.g = id;
      spec.gprime = one;
      return spec;
    }
    case JerkId::C16: {
      const double c = (A + 2.0) / 4.0;
      return make_lagrangian(
          1, half,
          [A, c](double, double q, double qn, double u, double v) {
            return A / 2.0 * q * qn * qn - 0.5 * v * v + c * u * v - q * q / 2.0;
          },
          [A](double, double q, double qn, double, double) { return A / 2.0 * qn * qn - q; },
          [A](double, double q, double qn, double, double) { return A * q * qn; },
          [c](double, double, double, double, double v) { return c * v; },
          [c](double, double, double, double u, double v) { return -v + c * u; }, sq, two_s, id,
          one);
    }
    case JerkId::C21:
      return make_lagrangian(
          1, half,
          [](double t, double q, double qn, double, double v) {
            return 0.5 * v * v + t * qn / q;
          },
          [](double t, double q, double qn, double, double) { return -t * qn / (q * q); },
          [](double t, double q, double, double, double) { return t / q; }, nullptr,
          [](double, double, double, double, double v) { return v; }, nullptr, nullptr,
          [](double s) { return std::log(s); }, [](double s) { return 1.0 / s; },
          /*time_dependent=*/true);
  }
  throw std::logic_error("lagrangian_for: unknown system");
}

LagrangianSpec harmonic_oscillator_spec() {
  return make_lagrangian(
      1, FracOrder{1.0},
      [](double, double q, double qn, double, double) { return 0.5 * qn * qn - 0.5 * q * q; },
      [](double, double q, double, double, double) { return -q; },
      [](double, double, double qn, double, double) { return qn; }, nullptr, nullptr, nullptr,
      nullptr, nullptr, nullptr);
}

LagrangianSpec free_particle_spec() {
  return make_lagrangian(
      1, FracOrder{1.0},
      [](double, double, double qn, double, double) { return 0.5 * qn * qn; },
      [](double, double, double, double, double) { return 0.0; },
      [](double, double, double qn, double, double) { return qn; }, nullptr, nullptr, nullptr,
      nullptr, nullptr, nullptr);
}

Trajectory sample_trajectory(const Grid& g, const std::function<double(double)>& fx,
                             const std::function<double(double)>& fv,
                             const std::function<double(double)>& fa) {
  Trajectory out;
  out.grid = g;
  out.x = sample(g, fx);
  out.v = sample(g, fv);
  out.acc = sample(g, fa);
  return out;
}

Trajectory oscillator_trajectory(double x0, double v0, const Grid& g) {
  // x''' = -x' preserves x'' = -x when started on that manifold.
  const auto sys = make_c5_const(0.0, 0.0);
  auto r = integrate(sys, x0, v0, -x0, g);
  if (r.status != IntegrateStatus::Ok) throw std::runtime_error("oscillator_trajectory: run stopped");
  return std::move(r.traj);
}

Trajectory scaled(const Trajectory& traj, double factor) {
  Trajectory out = traj;
  auto sc = [factor](double s) { return factor * s; };
  out.x = map(traj.x, sc);
  out.v = map(traj.v, sc);
  out.acc = map(traj.acc, sc);
  return out;
}

SampledFn hamiltonian_c5(const Trajectory& traj, double A, const ScalarFn& Gint) {
  const FracOrder half{0.5};
  const SampledFn cx = caputo_left(traj.x, half);
  const SampledFn cv = caputo_left(traj.v, half);
  SampledFn out(traj.grid);
  for (int j = 0; j <= traj.grid.n; ++j) {
    const size_t k = static_cast<size_t>(j);
    out.values[k] = A / 2.0 * traj.v.values[k] * traj.v.values[k] -
                    0.5 * cv.values[k] * cv.values[k] + 0.5 * cx.values[k] * cx.values[k] -
                    Gint(traj.x.values[k]);
  }
  return out;
}

SampledFn conserved_c13(const Trajectory& traj, double A, const ScalarFn& Gint) {
  const SampledFn cv = caputo_left(traj.v, FracOrder{0.5});
  SampledFn out(traj.grid);
  for (int j = 0; j <= traj.grid.n; ++j) {
    const size_t k = static_cast<size_t>(j);
    out.values[k] = A / 2.0 * traj.v.values[k] * traj.v.values[k] -
                    cv.values[k] * cv.values[k] - Gint(traj.x.values[k]);
  }
  return out;
}

SampledFn conserved_c17_c18_c19(const Trajectory& traj, JerkId id, double A) {
  const FracOrder half{0.5};
  const SampledFn cv = caputo_left(traj.v, half);
  SampledFn cx2;
  if (id == JerkId::C14 || id == JerkId::C16) {
    cx2 = caputo_left(map(traj.x, [](double s) { return s * s; }), half);
  }
  SampledFn out(traj.grid);
  for (int j = 0; j <= traj.grid.n; ++j) {
    const size_t k = static_cast<size_t>(j);
    const double x = traj.x.values[k];
    const double v = traj.v.values[k];
    switch (id) {
      case JerkId::C14:
        out.values[k] = A / 2.0 * v * v - cv.values[k] * cv.values[k] +
                        0.5 * cx2.values[k] * cv.values[k] + x * x / 2.0;
        break;
      case JerkId::C15:
        out.values[k] = A / 2.0 * v * v - cv.values[k] * cv.values[k] + x * x / 2.0;
        break;
      case JerkId::C16:
        out.values[k] = A / 2.0 * x * v * v - cv.values[k] * cv.values[k] +
                        (A + 2.0) / 4.0 * cx2.values[k] * cv.values[k] + x * x / 2.0;
        break;
      default:
        throw std::invalid_argument("conserved_c17_c18_c19: id must be C14, C15 or C16");
    }
  }
  return out;
}

SampledFn scale_invariant_c22(const Trajectory& traj) {
  for (int j = 0; j <= traj.grid.n; ++j) {
    if (!(traj.v.values[static_cast<size_t>(j)] > 0.0)) {
      throw std::domain_error("scale_invariant_c22: requires x' > 0 along the trajectory");
    }
  }
  const FracOrder half{0.5};
  const SampledFn lnv = map(traj.v, [](double s) { return std::log(s); });
  const SampledFn composed = rl_deriv_right(caputo_left(lnv, half), half);
  SampledFn out(traj.grid);
  for (int j = 0; j <= traj.grid.n; ++j) {
    if (composed.masked(j)) {
      out.set_mask(j);
      continue;
    }
    const size_t k = static_cast<size_t>(j);
    out.values[k] =
        traj.grid.node(j) + traj.x.values[k] / traj.v.values[k] * composed.values[k];
  }
  return out;
}

WindowEnergyResult window_energy_approx(const Trajectory& traj, double t0,
                                        std::span<const double> deltas, int nodes_per_window) {
  const double tol = 1e-12 * (traj.grid.b - traj.grid.a);
  WindowEnergyResult out;
  const double v0 = interp_at(traj.v, t0);
  const double a0 = interp_at(traj.acc, t0);
  const FracOrder half{0.5};
  for (double d : deltas) {
    if (t0 < traj.grid.a - tol || t0 + d > traj.grid.b + tol) {
      throw std::domain_error("window_energy_approx: window outside trajectory domain");
    }
    const Grid wg(t0, t0 + d, nodes_per_window);
    const double cx_end = caputo_left(resample(traj.x, wg), half).values.back();
    const double cv_end = caputo_left(resample(traj.v, wg), half).values.back();
    const double denom_x = 2.0 / M_PI * v0 * v0 * d;
    const double denom_v = 2.0 / M_PI * a0 * a0 * d;
    out.ratios_c8.push_back(denom_x == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                           : 0.5 * cx_end * cx_end / denom_x);
    out.ratios_c8b.push_back(denom_v == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                            : 0.5 * cv_end * cv_end / denom_v);
  }
  return out;
}

double ode_residual_at(const JerkSystem& sys, const Trajectory& traj, double t0) {
  const SampledFn jrk = finite_diff(traj.acc, 1);
  return interp_at(jrk, t0) -
         jerk_rhs(sys, interp_at(traj.x, t0), interp_at(traj.v, t0), interp_at(traj.acc, t0));
}

std::vector<CanonicalRow> canonical_table(const Trajectory& traj, double A, int rows) {
  const FracOrder half{0.5};
  const SampledFn cx = caputo_left(traj.x, half);
  const SampledFn cv = caputo_left(traj.v, half);
  std::vector<CanonicalRow> out;
  const int n = traj.grid.n;
  const int count = std::min(rows, n + 1);
  for (int i = 0; i < count; ++i) {
    const int j = (count == 1) ? 0 : static_cast<int>(std::llround(static_cast<double>(i) * n / (count - 1)));
    const size_t k = static_cast<size_t>(j);
    CanonicalRow row;
    row.t = traj.grid.node(j);
    row.q1 = traj.v.values[k];
    row.p1 = A * traj.v.values[k];
    row.q_half = cx.values[k];
    row.p_half = cx.values[k];
    row.q_threehalf = cv.values[k];
    row.p_threehalf = -cv.values[k];
    out.push_back(row);
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
  f << "t,x,v,acc\n";
  char buf[64];
  for (int j = 0; j <= traj.grid.n; ++j) {
    const size_t k = static_cast<size_t>(j);
    std::snprintf(buf, sizeof buf, "%.17g", traj.grid.node(j));
    f << buf;
    for (double v : {traj.x.values[k], traj.v.values[k], traj.acc.values[k]}) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      f << buf;
    }
    f << '\n';
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_trajectory_csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("read_trajectory_csv: empty file");
  std::vector<double> ts, xs, vs, as;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    double t, x, v, a;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &x, &v, &a) != 4) {
      throw std::runtime_error("read_trajectory_csv: malformed row");
    }
    ts.push_back(t);
    xs.push_back(x);
    vs.push_back(v);
    as.push_back(a);
  }
  if (ts.size() < 3) throw std::runtime_error("read_trajectory_csv: need at least 3 rows");
  const int n = static_cast<int>(ts.size()) - 1;
  Grid g(ts.front(), ts.back(), n);
  Trajectory out;
  out.grid = g;
  out.x = SampledFn(g);
  out.v = SampledFn(g);
  out.acc = SampledFn(g);
  out.x.values = xs;
  out.v.values = vs;
  out.acc.values = as;
  return out;
}

}  // namespace fracvar::jerk
