#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fracvar {

/// Euler gamma function via a fixed-coefficient Lanczos approximation
/// (g=7, 9 terms; ~15 significant digits). Throws std::domain_error at the
/// poles x = 0, -1, -2, ...
double gamma(double x);

/// Uniform time mesh over [a,b] with n subintervals. node(0) == a and
/// node(n) == b exactly; interior nodes are a + j*h with h = (b-a)/n.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int n = 2;
  double h = 0.5;

  Grid() = default;
  Grid(double a_, double b_, int n_);

  double node(int j) const { return j == n ? b : a + j * h; }
  int size() const { return n + 1; }

  friend bool operator==(const Grid& x, const Grid& y) {
    return x.a == y.a && x.b == y.b && x.n == y.n;
  }
};

/// Real-valued function tabulated on a Grid. Individual nodes may be masked
/// (e.g. the singular endpoint of a Riemann-Liouville derivative); masked
/// nodes hold NaN and are excluded from reductions by the callers that
/// understand them.
struct SampledFn {
  Grid grid;
  std::vector<double> values;    // size grid.n + 1
  std::vector<std::uint8_t> mask;  // empty, or size grid.n + 1 (1 = masked)

  SampledFn() = default;
  explicit SampledFn(const Grid& g);

  double t(int j) const { return grid.node(j); }
  bool masked(int j) const { return !mask.empty() && mask[static_cast<size_t>(j)] != 0; }
  bool any_masked() const;
  void set_mask(int j);

  /// Throws if any unmasked value is non-finite.
  void check_finite() const;
};

/// Tabulate fn on the grid nodes.
SampledFn sample(const Grid& g, const std::function<double(double)>& fn);

/// Pointwise map, preserving masks.
SampledFn map(const SampledFn& x, const std::function<double(double)>& fn);

/// Pointwise combination of two functions on the same grid; masks are OR-ed.
SampledFn zip(const SampledFn& x, const SampledFn& y,
              const std::function<double(double, double)>& fn);

/// Reflect about the interval midpoint: result value at node j is
/// x(a + b - t_j), i.e. the sample vector reversed on the same grid.
SampledFn reflect(const SampledFn& x);

/// k-th derivative (k in {1,2,3}) by second-order finite differences:
/// central stencils in the interior, one-sided stencils of the same order at
/// the k nodes nearest each end. Masked input nodes mask every output node
/// whose stencil touches them. Requires at least k+2 nodes.
SampledFn finite_diff(const SampledFn& x, int order);

/// Composite trapezoid rule over [a,b]. Throws on masked nodes.
double trapezoid(const SampledFn& x);

/// Local cubic (4-point Lagrange) interpolation onto a target grid contained
/// in the source interval. Values at coinciding nodes are copied exactly.
SampledFn resample(const SampledFn& x, const Grid& target);

/// Single-point local cubic interpolation; t must lie in [a,b].
double interp_at(const SampledFn& x, double t);

/// CSV serialization: header "t,value", one row per node, 17 significant
/// digits (round-trip exact). Masked nodes are written as "nan".
void write_csv(const SampledFn& x, const std::string& path);
SampledFn read_csv(const std::string& path);

/// Finite-difference weights for the m-th derivative at x0 over the given
/// nodes (Fornberg's recurrence). Exposed for tests.
std::vector<double> fd_weights(double x0, std::span<const double> xs, int m);

/// Least-squares slope of log(err) against log(h); entries with non-positive
/// error are skipped. Used to fit observed convergence orders.
double fit_order(std::span<const double> h, std::span<const double> err);

}  // namespace fracvar
