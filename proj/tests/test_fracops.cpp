#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fracvar/fracops.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace fracvar;

namespace {

double sup_diff(const SampledFn& a, const SampledFn& b, int lo = 0, int hi = -1) {
  if (hi < 0) hi = a.grid.n;
  double worst = 0;
  for (int j = lo; j <= hi; ++j) {
    if (a.masked(j) || b.masked(j)) continue;
    worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
  }
  return worst;
}

}  // namespace

TEST_CASE("rl_integral_left: power-law oracles") {
  Grid g(0, 1, 1024);
  const FracOrder half{0.5};

  // Exact (up to rounding) on piecewise-linear inputs.
  auto j_one = rl_integral_left(sample(g, [](double) { return 1.0; }), half);
  CHECK(j_one.values.back() == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(j_one.values.front() == 0.0);

  auto j_t = rl_integral_left(sample(g, [](double t) { return t; }), half);
  CHECK(j_t.values.back() == doctest::Approx(oracles::rl_integral_power(1, 0.5, 1)).epsilon(1e-12));

  // alpha = 1 reduces to the running integral.
  auto j1 = rl_integral_left(sample(g, [](double t) { return t; }), FracOrder{1.0});
  for (int j = 0; j <= g.n; ++j) {
    const double t = g.node(j);
    CHECK(std::abs(j1.values[j] - t * t / 2) < 1e-10);
  }

  CHECK_THROWS_AS(rl_integral_left(j_t, FracOrder{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(rl_integral_left(j_t, FracOrder{-0.5}), std::invalid_argument);
}

TEST_CASE("rl_integral_right mirrors the left operator") {
  Grid g(0, 1, 512);
  const FracOrder half{0.5};
  auto x = sample(g, [](double t) { return std::cos(3 * t); });
  auto lhs = rl_integral_right(x, half);
  auto rhs = reflect(rl_integral_left(reflect(x), half));
  CHECK(sup_diff(lhs, rhs) == 0.0);

  auto r_one = rl_integral_right(sample(g, [](double) { return 1.0; }), half);
  CHECK(r_one.values.front() == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-12));

  auto r1 = rl_integral_right(sample(g, [](double) { return 1.0; }), FracOrder{1.0});
  for (int j = 0; j <= g.n; ++j) CHECK(std::abs(r1.values[j] - (1.0 - g.node(j))) < 1e-12);
}

TEST_CASE("caputo_left: L1 scheme") {
  Grid g(0, 1, 1024);
  const FracOrder half{0.5};

  SUBCASE("annihilates constants") {
    auto c = caputo_left(sample(g, [](double) { return 4.2; }), half);
    for (double v : c.values) CHECK(v == 0.0);
  }
  SUBCASE("x = t, exact for piecewise-linear input") {
    auto c = caputo_left(sample(g, [](double t) { return t; }), half);
    CHECK(c.values.back() == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(c.values.front() == 0.0);
  }
  SUBCASE("x = t^2 against the power-law oracle") {
    auto c = caputo_left(sample(g, [](double t) { return t * t; }), half);
    CHECK(c.values.back() ==
          doctest::Approx(oracles::caputo_power(2, 0.5, 1)).epsilon(1e-3));
  }
  SUBCASE("brute-force quadrature cross-check on sin") {
    Grid g2(0, 1, 2048);
    auto c = caputo_left(sample(g2, [](double t) { return std::sin(t); }), half);
    const double ref =
        oracles::caputo_half_bruteforce([](double s) { return std::cos(s); }, 0.0, 1.0);
    CHECK(c.values.back() == doctest::Approx(ref).epsilon(1e-4));
  }
  SUBCASE("alpha = 1 reduces to finite_diff") {
    auto x = sample(g, [](double t) { return t * t; });
    CHECK(sup_diff(caputo_left(x, FracOrder{1.0}), finite_diff(x, 1)) == 0.0);
  }
  SUBCASE("empirical convergence order is 2 - alpha") {
    for (double alpha : {0.3, 0.5, 0.7}) {
      std::vector<double> hs, errs;
      for (int n : {128, 256, 512, 1024}) {
        Grid gn(0, 1, n);
        auto c = caputo_left(sample(gn, [](double t) { return t * t; }), FracOrder{alpha});
        hs.push_back(gn.h);
        errs.push_back(std::abs(c.values.back() - oracles::caputo_power(2, alpha, 1)));
      }
      const double p = fit_order(hs, errs);
      CHECK(p > 2 - alpha - 0.2);
      CHECK(p < 2 - alpha + 0.2);
    }
  }
  SUBCASE("invalid order") {
    auto x = sample(g, [](double t) { return t; });
    CHECK_THROWS_AS(caputo_left(x, FracOrder{1.5}), std::invalid_argument);
    CHECK_THROWS_AS(caputo_left(x, FracOrder{0.0}), std::invalid_argument);
  }
}

TEST_CASE("caputo_right mirrors") {
  Grid g(0, 1, 512);
  const FracOrder half{0.5};
  auto c0 = caputo_right(sample(g, [](double) { return 2.0; }), half);
  for (double v : c0.values) CHECK(v == 0.0);

  auto c = caputo_right(sample(g, [](double t) { return 1.0 - t; }), half);
  CHECK(c.values.front() == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(c.values.back() == 0.0);

  auto c1 = caputo_right(sample(g, [](double t) { return t; }), FracOrder{1.0});
  for (double v : c1.values) CHECK(v == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("rl_deriv_left") {
  Grid g(0, 1, 1024);
  const FracOrder half{0.5};

  SUBCASE("equals caputo when x(a) = 0") {
    auto x = sample(g, [](double t) { return t * (1 - t); });
    CHECK(sup_diff(rl_deriv_left(x, half), caputo_left(x, half)) == 0.0);
  }
  SUBCASE("constant: the boundary term alone") {
    auto d = rl_deriv_left(sample(g, [](double) { return 1.0; }), half);
    CHECK(d.masked(0));
    CHECK(d.values.back() == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(d.values[512] == doctest::Approx(oracles::rl_const(1.0, 0.5, 0.5)).epsilon(1e-12));
  }
  SUBCASE("alpha = 1 classical reduction") {
    auto d = rl_deriv_left(sample(g, [](double t) { return t * t; }), FracOrder{1.0});
    for (int j = 0; j <= g.n; ++j) CHECK(std::abs(d.values[j] - 2 * g.node(j)) < 1e-9);
  }
}

TEST_CASE("rl_deriv_right") {
  Grid g(0, 1, 1024);
  const FracOrder half{0.5};

  SUBCASE("equals caputo_right when x(b) = 0") {
    auto x = sample(g, [](double t) { return t * (1 - t); });
    CHECK(sup_diff(rl_deriv_right(x, half), caputo_right(x, half)) == 0.0);
  }
  SUBCASE("constant") {
    auto d = rl_deriv_right(sample(g, [](double) { return 1.0; }), half);
    CHECK(d.masked(g.n));
    CHECK(d.values.front() == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
  }
  SUBCASE("alpha = 1 gives -x'") {
    auto d = rl_deriv_right(sample(g, [](double t) { return std::sin(t); }), FracOrder{1.0});
    double worst = 0;
    for (int j = 0; j <= g.n; ++j) worst = std::max(worst, std::abs(d.values[j] + std::cos(g.node(j))));
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("grunwald-letnikov cross-checks") {
  Grid g(0, 1, 1024);
  const FracOrder half{0.5};

  SUBCASE("alpha = 1 weights collapse to a two-point difference") {
    auto x = sample(g, [](double t) { return std::sin(2 * t); });
    auto d = gl_derivative(x, FracOrder{1.0}, Side::Left);
    for (int j = 1; j <= g.n; ++j) {
      CHECK(d.values[j] ==
            doctest::Approx((x.values[j] - x.values[j - 1]) / g.h).epsilon(1e-12));
    }
  }
  SUBCASE("constant reproduces the RL singular term") {
    auto d = gl_derivative(sample(g, [](double) { return 1.0; }), half, Side::Left);
    for (double t : {0.25, 0.5, 1.0}) {
      const int j = static_cast<int>(std::lround(t / g.h));
      const double ref = oracles::rl_const(1.0, 0.5, t);
      CHECK(std::abs(d.values[j] - ref) / ref < 5e-2);
    }
  }
  SUBCASE("agreement with the composite RL derivative on t^2") {
    auto x = sample(g, [](double t) { return t * t; });
    auto rl = rl_deriv_left(x, half);
    auto glv = gl_derivative(x, half, Side::Left);
    double scale = 0;
    for (int j = 0; j <= g.n; ++j) {
      if (!rl.masked(j)) scale = std::max(scale, std::abs(rl.values[j]));
    }
    CHECK(sup_diff(glv, rl) / scale < 1e-2);
  }
  SUBCASE("right side mirrors") {
    auto x = sample(g, [](double t) { return (1 - t) * (1 - t); });
    auto lhs = gl_derivative(x, half, Side::Right);
    auto rhs = reflect(gl_derivative(reflect(x), half, Side::Left));
    CHECK(sup_diff(lhs, rhs) == 0.0);
  }
}

TEST_CASE("operator linearity to machine precision") {
  Grid g(0, 1, 257);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dist(-1, 1);
  SampledFn x(g), y(g);
  for (auto& v : x.values) v = dist(rng);
  for (auto& v : y.values) v = dist(rng);
  const double a = 0.8, b = -2.3;
  const SampledFn mix = zip(x, y, [&](double u, double v) { return a * u + b * v; });
  const FracOrder order{0.6};

  auto check_linear = [&](auto&& op) {
    auto lhs = op(mix);
    auto rhs = zip(op(x), op(y), [&](double u, double v) { return a * u + b * v; });
    double scale = 1;
    for (int j = 0; j <= g.n; ++j) {
      if (!lhs.masked(j)) scale = std::max(scale, std::abs(lhs.values[j]));
    }
    CHECK(sup_diff(lhs, rhs) <= 1e-11 * scale);
  };
  check_linear([&](const SampledFn& f) { return rl_integral_left(f, order); });
  check_linear([&](const SampledFn& f) { return rl_integral_right(f, order); });
  check_linear([&](const SampledFn& f) { return caputo_left(f, order); });
  check_linear([&](const SampledFn& f) { return caputo_right(f, order); });
  check_linear([&](const SampledFn& f) { return gl_derivative(f, order, Side::Left); });
}

TEST_CASE("semigroup spot-check for the fractional integral") {
  const FracOrder a{0.4}, b{0.35}, ab{0.75};
  auto err_at = [&](int n) {
    Grid g(0, 1, n);
    auto x = sample(g, [](double t) { return std::sin(2 * t); });
    auto once = rl_integral_left(rl_integral_left(x, a), b);
    auto direct = rl_integral_left(x, ab);
    double worst = 0, scale = 0;
    for (int j = 0; j <= g.n; ++j) {
      worst = std::max(worst, std::abs(once.values[j] - direct.values[j]));
      scale = std::max(scale, std::abs(direct.values[j]));
    }
    return worst / scale;
  };
  const double e512 = err_at(512), e2048 = err_at(2048);
  CHECK(e512 < 5e-3);
  CHECK(e2048 < e512);
}

TEST_CASE("caputo/RL consistency against the boundary-term identity") {
  Grid g(0, 1, 512);
  const FracOrder order{0.4};
  auto x = sample(g, [](double t) { return 1.5 + t * t; });
  auto rl = rl_deriv_left(x, order);
  auto cap = caputo_left(x, order);
  for (int j = 1; j <= g.n; ++j) {
    const double boundary = oracles::rl_const(1.5, 0.4, g.node(j));
    CHECK(rl.values[j] - cap.values[j] == doctest::Approx(boundary).epsilon(1e-10));
  }
}

TEST_CASE("reflection duality is exact") {
  Grid g(0.5, 2.5, 300);
  auto x = sample(g, [](double t) { return std::exp(-t) + 0.3 * t; });
  const FracOrder order{0.55};
  CHECK(sup_diff(rl_deriv_right(x, order), reflect(rl_deriv_left(reflect(x), order))) == 0.0);
  CHECK(sup_diff(caputo_right(x, order), reflect(caputo_left(reflect(x), order))) == 0.0);
}

TEST_CASE("integration by parts defect") {
  const FracOrder half{0.5};
  SUBCASE("polynomial pair at n = 1024") {
    Grid g(0, 1, 1024);
    auto x = sample(g, [](double t) { return t * (1 - t); });
    auto y = sample(g, [](double t) { return t; });
    CHECK(ibp_defect(x, y, half) < 1e-2);
    CHECK(ibp_defect(x, y, half, IbpForm::CaputoRight) < 1e-2);
  }
  SUBCASE("zero x gives zero defect") {
    Grid g(0, 1, 128);
    auto x = sample(g, [](double) { return 0.0; });
    auto y = sample(g, [](double t) { return std::cos(t); });
    CHECK(ibp_defect(x, y, half) == 0.0);
  }
  SUBCASE("classical alpha = 1 limit") {
    Grid g(0, 1, 1024);
    auto x = sample(g, [](double t) { return t * (1 - t); });
    auto y = sample(g, [](double t) { return t; });
    CHECK(ibp_defect(x, y, FracOrder{1.0}) < 1e-6);
  }
  SUBCASE("hypothesis violation") {
    Grid g(0, 1, 128);
    auto x = sample(g, [](double t) { return t; });
    auto y = sample(g, [](double t) { return t; });
    CHECK_THROWS_AS(ibp_defect(x, y, half), std::invalid_argument);
  }
  SUBCASE("defect decreases under refinement") {
    std::vector<double> defects;
    for (int n : {256, 512, 1024}) {
      Grid g(0, 1, n);
      defects.push_back(ibp_defect(sample(g, [](double t) { return t * (1 - t); }),
                                   sample(g, [](double t) { return t; }), half));
    }
    CHECK(defects[1] < defects[0]);
    CHECK(defects[2] < defects[1]);
  }
}
