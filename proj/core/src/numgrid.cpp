#include "fracvar/numgrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracvar {

double gamma(double x) {
  // Lanczos, g = 7, 9 coefficients.
  static const double coef[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

  if (x <= 0.0 && x == std::floor(x)) {
    throw std::domain_error("gamma: pole at non-positive integer " + std::to_string(x));
  }
  if (x < 0.5) {
    // Reflection formula.
    return M_PI / (std::sin(M_PI * x) * gamma(1.0 - x));
  }
  const double z = x - 1.0;
  double s = coef[0];
  for (int i = 1; i < 9; ++i) s += coef[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * s;
}

Grid::Grid(double a_, double b_, int n_) : a(a_), b(b_), n(n_) {
  if (!(b > a)) throw std::invalid_argument("Grid: requires b > a");
  if (n < 2) throw std::invalid_argument("Grid: requires n >= 2");
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("Grid: non-finite endpoint");
  h = (b - a) / n;
}

SampledFn::SampledFn(const Grid& g) : grid(g), values(static_cast<size_t>(g.n) + 1, 0.0) {}

bool SampledFn::any_masked() const {
  return std::any_of(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; });
}

void SampledFn::set_mask(int j) {
  if (mask.empty()) mask.assign(values.size(), 0);
  mask[static_cast<size_t>(j)] = 1;
  values[static_cast<size_t>(j)] = std::numeric_limits<double>::quiet_NaN();
}

void SampledFn::check_finite() const {
  for (size_t j = 0; j < values.size(); ++j) {
    if (!masked(static_cast<int>(j)) && !std::isfinite(values[j])) {
      throw std::domain_error("SampledFn: non-finite value at unmasked node " + std::to_string(j));
    }
  }
}

SampledFn sample(const Grid& g, const std::function<double(double)>& fn) {
  SampledFn out(g);
  for (int j = 0; j <= g.n; ++j) out.values[static_cast<size_t>(j)] = fn(g.node(j));
  return out;
}

SampledFn map(const SampledFn& x, const std::function<double(double)>& fn) {
  SampledFn out = x;
  for (int j = 0; j <= x.grid.n; ++j) {
    if (!x.masked(j)) out.values[static_cast<size_t>(j)] = fn(x.values[static_cast<size_t>(j)]);
  }
  return out;
}

SampledFn zip(const SampledFn& x, const SampledFn& y,
              const std::function<double(double, double)>& fn) {
  if (!(x.grid == y.grid)) throw std::invalid_argument("zip: grid mismatch");
  SampledFn out(x.grid);
  for (int j = 0; j <= x.grid.n; ++j) {
    if (x.masked(j) || y.masked(j)) {
      out.set_mask(j);
    } else {
      out.values[static_cast<size_t>(j)] =
          fn(x.values[static_cast<size_t>(j)], y.values[static_cast<size_t>(j)]);
    }
  }
  return out;
}

SampledFn reflect(const SampledFn& x) {
  SampledFn out(x.grid);
  const int n = x.grid.n;
  for (int j = 0; j <= n; ++j) {
    if (x.masked(n - j)) {
      out.set_mask(j);
    } else {
      out.values[static_cast<size_t>(j)] = x.values[static_cast<size_t>(n - j)];
    }
  }
  return out;
}

std::vector<double> fd_weights(double x0, std::span<const double> xs, int m) {
  // Fornberg (1988), weights for derivatives 0..m at x0; returns order m row.
  const int nd = static_cast<int>(xs.size()) - 1;
  if (nd < m) throw std::invalid_argument("fd_weights: not enough nodes");
  std::vector<std::vector<double>> c(static_cast<size_t>(nd) + 1,
                                     std::vector<double>(static_cast<size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[static_cast<size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[static_cast<size_t>(i)][static_cast<size_t>(k)] =
              c1 * (k * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                    c5 * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) / c2;
        }
        c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[static_cast<size_t>(j)][static_cast<size_t>(k)] =
            (c4 * c[static_cast<size_t>(j)][static_cast<size_t>(k)] -
             k * c[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) / c3;
      }
      c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) w[i] = c[i][static_cast<size_t>(m)];
  return w;
}

namespace {

// Stencil description: node indices relative to the evaluated node.
struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;  // already divided by h^k
};

Stencil make_stencil(const std::vector<int>& offsets, double eval_at, int k, double h) {
  std::vector<double> xs(offsets.size());
  for (size_t i = 0; i < offsets.size(); ++i) xs[i] = static_cast<double>(offsets[i]);
  auto w = fd_weights(eval_at, xs, k);
  const double scale = std::pow(h, -k);
  for (auto& v : w) v *= scale;
  return {offsets, w};
}

}  // namespace

SampledFn finite_diff(const SampledFn& x, int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("finite_diff: order must be 1, 2 or 3");
  const int n = x.grid.n;
  if (n + 1 < k + 2) throw std::invalid_argument("finite_diff: grid too small for requested order");
  const double h = x.grid.h;

  // Interior central stencil (width k+1 for odd k handled by 2*floor(k/2)+1).
  const int half = (k == 3) ? 2 : 1;
  std::vector<int> central;
  for (int o = -half; o <= half; ++o) central.push_back(o);
  const Stencil interior = make_stencil(central, 0.0, k, h);

  // One-sided stencils over the k+2 nodes nearest the end, one per boundary node.
  std::vector<Stencil> left, right;
  for (int j = 0; j < k; ++j) {
    std::vector<int> offs;
    for (int i = 0; i <= k + 1; ++i) offs.push_back(i - j);
    left.push_back(make_stencil(offs, 0.0, k, h));
  }
  for (int j = 0; j < k; ++j) {
    std::vector<int> offs;
    for (int i = 0; i <= k + 1; ++i) offs.push_back(-i + j);
    std::sort(offs.begin(), offs.end());
    right.push_back(make_stencil(offs, 0.0, k, h));
  }

  SampledFn out(x.grid);
  for (int j = 0; j <= n; ++j) {
    const Stencil* st;
    if (j < k) {
      st = &left[static_cast<size_t>(j)];
    } else if (j > n - k) {
      st = &right[static_cast<size_t>(n - j)];
    } else {
      st = &interior;
    }
    double acc = 0.0;
    bool m = false;
    for (size_t i = 0; i < st->offsets.size(); ++i) {
      const int jj = j + st->offsets[i];
      if (x.masked(jj)) {
        m = true;
        break;
      }
      acc += st->weights[i] * x.values[static_cast<size_t>(jj)];
    }
    if (m) {
      out.set_mask(j);
    } else {
      out.values[static_cast<size_t>(j)] = acc;
    }
  }
  return out;
}

double trapezoid(const SampledFn& x) {
  if (x.any_masked()) throw std::domain_error("trapezoid: masked nodes in integrand");
  const int n = x.grid.n;
  double acc = 0.5 * (x.values.front() + x.values.back());
  for (int j = 1; j < n; ++j) acc += x.values[static_cast<size_t>(j)];
  return acc * x.grid.h;
}

namespace {

// Cubic Lagrange value at one point; sets *is_masked when a stencil node is
// masked.
double interp_point(const SampledFn& x, double t, bool* is_masked) {
  const Grid& g = x.grid;
  *is_masked = false;
  const double pos = (t - g.a) / g.h;
  const int near = static_cast<int>(std::lround(pos));
  if (near >= 0 && near <= g.n && std::abs(pos - near) < 1e-9) {
    if (x.masked(near)) {
      *is_masked = true;
      return 0.0;
    }
    return x.values[static_cast<size_t>(near)];
  }
  const int cell = std::clamp(static_cast<int>(std::floor(pos)), 0, g.n - 1);
  const int npts = std::min(4, g.n + 1);
  const int base = std::clamp(cell - 1, 0, g.n + 1 - npts);
  double acc = 0.0;
  for (int p = 0; p < npts; ++p) {
    if (x.masked(base + p)) {
      *is_masked = true;
      return 0.0;
    }
    double w = 1.0;
    const double tp = g.node(base + p);
    for (int q = 0; q < npts; ++q) {
      if (q == p) continue;
      w *= (t - g.node(base + q)) / (tp - g.node(base + q));
    }
    acc += w * x.values[static_cast<size_t>(base + p)];
  }
  return acc;
}

}  // namespace

SampledFn resample(const SampledFn& x, const Grid& target) {
  const Grid& g = x.grid;
  const double tol = 1e-12 * (g.b - g.a);
  if (target.a < g.a - tol || target.b > g.b + tol) {
    throw std::domain_error("resample: target interval not contained in source");
  }
  SampledFn out(target);
  for (int i = 0; i <= target.n; ++i) {
    const double t = std::clamp(target.node(i), g.a, g.b);
    bool m = false;
    const double v = interp_point(x, t, &m);
    if (m) {
      out.set_mask(i);
    } else {
      out.values[static_cast<size_t>(i)] = v;
    }
  }
  return out;
}

double interp_at(const SampledFn& x, double t) {
  const double tol = 1e-12 * (x.grid.b - x.grid.a);
  if (t < x.grid.a - tol || t > x.grid.b + tol) {
    throw std::domain_error("interp_at: point outside the sampled interval");
  }
  bool m = false;
  const double v = interp_point(x, std::clamp(t, x.grid.a, x.grid.b), &m);
  if (m) throw std::domain_error("interp_at: stencil touches a masked node");
  return v;
}

void write_csv(const SampledFn& x, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  f << "t,value\n";
  char buf[64];
  for (int j = 0; j <= x.grid.n; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", x.t(j));
    f << buf << ',';
    if (x.masked(j)) {
      f << "nan";
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", x.values[static_cast<size_t>(j)]);
      f << buf;
    }
    f << '\n';
  }
}

SampledFn read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("read_csv: empty file " + path);
  std::vector<double> ts, vs;
  std::vector<std::uint8_t> ms;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("read_csv: malformed row in " + path);
    ts.push_back(std::stod(line.substr(0, comma)));
    const std::string v = line.substr(comma + 1);
    if (v == "nan" || v == "NaN") {
      vs.push_back(std::numeric_limits<double>::quiet_NaN());
      ms.push_back(1);
    } else {
      vs.push_back(std::stod(v));
      ms.push_back(0);
    }
  }
  if (ts.size() < 3) throw std::runtime_error("read_csv: need at least 3 rows");
  const int n = static_cast<int>(ts.size()) - 1;
  Grid g(ts.front(), ts.back(), n);
  for (int j = 0; j <= n; ++j) {
    if (std::abs(ts[static_cast<size_t>(j)] - g.node(j)) > 1e-9 * (g.b - g.a)) {
      throw std::runtime_error("read_csv: nodes are not uniformly spaced");
    }
  }
  SampledFn out(g);
  out.values = vs;
  if (std::any_of(ms.begin(), ms.end(), [](std::uint8_t m) { return m != 0; })) out.mask = ms;
  return out;
}

double fit_order(std::span<const double> h, std::span<const double> err) {
  if (h.size() != err.size()) throw std::invalid_argument("fit_order: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    if (!(err[i] > 0.0) || !(h[i] > 0.0)) continue;
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw std::domain_error("fit_order: need at least two positive errors");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace fracvar
