#include "fracvar/fracops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracvar {

namespace {

void require_derivative_order(FracOrder a) {
  if (!(a.alpha > 0.0 && a.alpha <= 1.0)) {
    throw std::invalid_argument("fractional derivative: order must satisfy 0 < alpha <= 1, got " +
                                std::to_string(a.alpha));
  }
}

void require_integral_order(FracOrder a) {
  if (!(a.alpha > 0.0)) {
    throw std::invalid_argument("fractional integral: order must satisfy alpha > 0, got " +
                                std::to_string(a.alpha));
  }
}

void require_unmasked(const SampledFn& x, const char* op) {
  if (x.any_masked()) throw std::domain_error(std::string(op) + ": masked nodes in operand");
}

}  // namespace

SampledFn rl_integral_left(const SampledFn& x, FracOrder order) {
  require_integral_order(order);
  require_unmasked(x, "rl_integral_left");
  const double al = order.alpha;
  const int n = x.grid.n;
  const double h = x.grid.h;

  // Exact kernel moments over [m-1,m] in units of h:
  //   A_m = int s^(al-1) ds,  B_m = int s^al ds.
  std::vector<double> pa(static_cast<size_t>(n) + 1), pb(static_cast<size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    pa[static_cast<size_t>(m)] = std::pow(static_cast<double>(m), al);
    pb[static_cast<size_t>(m)] = std::pow(static_cast<double>(m), al + 1.0);
  }
  const double c = std::pow(h, al) / gamma(al);

  SampledFn out(x.grid);
  for (int j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (int m = 1; m <= j; ++m) {
      const double am = (pa[static_cast<size_t>(m)] - pa[static_cast<size_t>(m - 1)]) / al;
      const double bm = (pb[static_cast<size_t>(m)] - pb[static_cast<size_t>(m - 1)]) / (al + 1.0);
      acc += (bm - (m - 1) * am) * x.values[static_cast<size_t>(j - m)] +
             (m * am - bm) * x.values[static_cast<size_t>(j - m + 1)];
    }
    out.values[static_cast<size_t>(j)] = c * acc;
  }
  return out;
}

SampledFn rl_integral_right(const SampledFn& x, FracOrder order) {
  return reflect(rl_integral_left(reflect(x), order));
}

SampledFn caputo_left(const SampledFn& x, FracOrder order) {
  require_derivative_order(order);
  require_unmasked(x, "caputo_left");
  if (order.alpha == 1.0) return finite_diff(x, 1);

  const double al = order.alpha;
  const int n = x.grid.n;
  const double h = x.grid.h;

  // L1 weights b_m = (m+1)^(1-al) - m^(1-al) applied to increments.
  std::vector<double> pw(static_cast<size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) pw[static_cast<size_t>(m)] = std::pow(static_cast<double>(m), 1.0 - al);
  const double c = 1.0 / (gamma(2.0 - al) * std::pow(h, al));

  std::vector<double> dx(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    dx[static_cast<size_t>(k)] = x.values[static_cast<size_t>(k) + 1] - x.values[static_cast<size_t>(k)];
  }

  SampledFn out(x.grid);
  for (int j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < j; ++k) {
      const int m = j - k - 1;
      acc += (pw[static_cast<size_t>(m) + 1] - pw[static_cast<size_t>(m)]) * dx[static_cast<size_t>(k)];
    }
    out.values[static_cast<size_t>(j)] = c * acc;
  }
  return out;
}

SampledFn caputo_right(const SampledFn& x, FracOrder order) {
  return reflect(caputo_left(reflect(x), order));
}

SampledFn rl_deriv_left(const SampledFn& x, FracOrder order) {
  require_derivative_order(order);
  SampledFn out = caputo_left(x, order);
  if (order.alpha == 1.0) return out;

  const double xa = x.values.front();
  if (xa == 0.0) return out;

  const double al = order.alpha;
  const double g1 = gamma(1.0 - al);
  for (int j = 1; j <= x.grid.n; ++j) {
    out.values[static_cast<size_t>(j)] += xa * std::pow(x.t(j) - x.grid.a, -al) / g1;
  }
  out.set_mask(0);
  return out;
}

SampledFn rl_deriv_right(const SampledFn& x, FracOrder order) {
  return reflect(rl_deriv_left(reflect(x), order));
}

SampledFn gl_derivative(const SampledFn& x, FracOrder order, Side side) {
  require_derivative_order(order);
  if (side == Side::Right) return reflect(gl_derivative(reflect(x), order, Side::Left));
  require_unmasked(x, "gl_derivative");

  const double al = order.alpha;
  const int n = x.grid.n;
  const double c = std::pow(x.grid.h, -al);

  std::vector<double> g(static_cast<size_t>(n) + 1);
  g[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    g[static_cast<size_t>(k)] = g[static_cast<size_t>(k - 1)] * (k - 1.0 - al) / k;
  }

  SampledFn out(x.grid);
  for (int j = 0; j <= n; ++j) {
    double acc = 0.0;
    for (int k = 0; k <= j; ++k) acc += g[static_cast<size_t>(k)] * x.values[static_cast<size_t>(j - k)];
    out.values[static_cast<size_t>(j)] = c * acc;
  }
  return out;
}

double ibp_defect(const SampledFn& x, const SampledFn& y, FracOrder order, IbpForm form) {
  require_derivative_order(order);
  if (!(x.grid == y.grid)) throw std::invalid_argument("ibp_defect: grid mismatch");

  double scale = 0.0;
  for (double v : x.values) scale = std::max(scale, std::abs(v));
  const double tol = 1e-9 * std::max(1.0, scale);
  if (std::abs(x.values.front()) > tol || std::abs(x.values.back()) > tol) {
    throw std::invalid_argument("ibp_defect: requires x(a) = x(b) = 0");
  }

  const SampledFn cap = form == IbpForm::CaputoLeft ? caputo_left(x, order) : caputo_right(x, order);
  const SampledFn rld = form == IbpForm::CaputoLeft ? rl_deriv_right(y, order) : rl_deriv_left(y, order);

  const SampledFn lhs_integrand = zip(y, cap, [](double u, double v) { return u * v; });

  // x vanishes at the masked singular endpoint, so the product tends to 0.
  SampledFn rhs_integrand(x.grid);
  for (int j = 0; j <= x.grid.n; ++j) {
    if (rld.masked(j)) {
      rhs_integrand.values[static_cast<size_t>(j)] = 0.0;
    } else {
      rhs_integrand.values[static_cast<size_t>(j)] =
          x.values[static_cast<size_t>(j)] * rld.values[static_cast<size_t>(j)];
    }
  }

  const double lhs = trapezoid(lhs_integrand);
  const double rhs = trapezoid(rhs_integrand);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

}  // namespace fracvar
