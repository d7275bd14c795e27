#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fracvar/numgrid.hpp"

#include <cmath>
#include <cstdio>
#include <random>

using namespace fracvar;

TEST_CASE("grid invariants") {
  Grid g(0.0, 1.0, 10);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(10) == 1.0);
  CHECK(g.h == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(g.size() == 11);

  Grid odd(-2.5, 7.25, 3);
  CHECK(odd.node(0) == -2.5);
  CHECK(odd.node(3) == 7.25);
  CHECK(odd.h * odd.n == doctest::Approx(odd.b - odd.a).epsilon(1e-15));

  CHECK_THROWS_AS(Grid(1.0, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(Grid(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("gamma values and poles") {
  CHECK(fracvar::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  // Reflection-formula oracle: Gamma(1/2)^2 = pi.
  CHECK(fracvar::gamma(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(fracvar::gamma(2.5) == doctest::Approx(1.5 * 0.5 * std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(fracvar::gamma(6.0) == doctest::Approx(120.0).epsilon(1e-13));

  for (double x : {1e-3, 0.37, 1.9, 4.5, 11.25, 40.0, -0.5, -3.7}) {
    CHECK(fracvar::gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(fracvar::gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(fracvar::gamma(-2.0), std::domain_error);
}

TEST_CASE("finite_diff matches analytic derivatives") {
  SUBCASE("constant") {
    Grid g(0, 1, 50);
    auto d = finite_diff(sample(g, [](double) { return 3.25; }), 1);
    for (double v : d.values) CHECK(std::abs(v) < 1e-12);
  }
  SUBCASE("t^2, first derivative is stencil-exact") {
    Grid g(0, 1, 100);
    auto d = finite_diff(sample(g, [](double t) { return t * t; }), 1);
    for (int j = 0; j <= g.n; ++j) CHECK(std::abs(d.values[j] - 2 * g.node(j)) < 1e-10);
  }
  SUBCASE("sin, second derivative") {
    Grid g(0, M_PI, 1024);
    auto d = finite_diff(sample(g, [](double t) { return std::sin(t); }), 2);
    double worst = 0;
    for (int j = 0; j <= g.n; ++j) worst = std::max(worst, std::abs(d.values[j] + std::sin(g.node(j))));
    CHECK(worst < 1e-4);
  }
  SUBCASE("third derivative of sin") {
    Grid g(0, 2, 2048);
    auto d = finite_diff(sample(g, [](double t) { return std::sin(t); }), 3);
    double worst = 0;
    for (int j = 0; j <= g.n; ++j) worst = std::max(worst, std::abs(d.values[j] + std::cos(g.node(j))));
    CHECK(worst < 5e-4);
  }
  SUBCASE("grid too small") {
    Grid g(0, 1, 2);
    CHECK_THROWS_AS(finite_diff(sample(g, [](double t) { return t; }), 2), std::invalid_argument);
  }
}

TEST_CASE("finite_diff properties") {
  Grid g(0, 2, 257);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1, 1);
  SampledFn x(g), y(g);
  for (auto& v : x.values) v = dist(rng);
  for (auto& v : y.values) v = dist(rng);

  SUBCASE("linearity to machine precision") {
    const double a = 1.7, b = -0.3;
    for (int k = 1; k <= 3; ++k) {
      auto lhs = finite_diff(zip(x, y, [&](double u, double v) { return a * u + b * v; }), k);
      auto rhs = zip(finite_diff(x, k), finite_diff(y, k),
                     [&](double u, double v) { return a * u + b * v; });
      double scale = 0, worst = 0;
      for (int j = 0; j <= g.n; ++j) {
        scale = std::max(scale, std::abs(lhs.values[j]));
        worst = std::max(worst, std::abs(lhs.values[j] - rhs.values[j]));
      }
      CHECK(worst <= 1e-12 * std::max(1.0, scale));
    }
  }
  SUBCASE("D1 twice agrees with D2 on smooth input") {
    auto s = sample(g, [](double t) { return std::exp(-t) * std::sin(3 * t); });
    auto dd = finite_diff(finite_diff(s, 1), 1);
    auto d2 = finite_diff(s, 2);
    double worst = 0;
    for (int j = 2; j <= g.n - 2; ++j) worst = std::max(worst, std::abs(dd.values[j] - d2.values[j]));
    CHECK(worst < 5e-3);  // O(h^2) with an exp(3t)-ish constant
  }
  SUBCASE("fundamental theorem: trapezoid of D1") {
    auto s = sample(g, [](double t) { return std::cos(2 * t) + t; });
    const double integral = trapezoid(finite_diff(s, 1));
    const double exact = s.values.back() - s.values.front();
    CHECK(integral == doctest::Approx(exact).epsilon(1e-4));
  }
}

TEST_CASE("trapezoid") {
  Grid g10(0, 1, 10);
  CHECK(trapezoid(sample(g10, [](double) { return 1.0; })) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(trapezoid(sample(g10, [](double t) { return t; })) == doctest::Approx(0.5).epsilon(1e-15));
  Grid g1000(0, 1, 1000);
  CHECK(trapezoid(sample(g1000, [](double t) { return t * t; })) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("resample") {
  SUBCASE("identical grid copies values") {
    Grid g(0.25, 1.75, 97);
    auto x = sample(g, [](double t) { return std::sin(5 * t); });
    auto r = resample(x, g);
    for (int j = 0; j <= g.n; ++j) CHECK(r.values[j] == x.values[j]);
  }
  SUBCASE("exact on cubics") {
    Grid g(0, 1, 64), fine(0, 1, 128);
    auto x = sample(g, [](double t) { return t * t * t; });
    auto r = resample(x, fine);
    for (int j = 0; j <= fine.n; ++j) {
      const double t = fine.node(j);
      CHECK(std::abs(r.values[j] - t * t * t) < 1e-12);
    }
  }
  SUBCASE("sin refinement error") {
    Grid g(0, 1, 256), fine(0, 1, 512);
    auto r = resample(sample(g, [](double t) { return std::sin(t); }), fine);
    double worst = 0;
    for (int j = 0; j <= fine.n; ++j) worst = std::max(worst, std::abs(r.values[j] - std::sin(fine.node(j))));
    CHECK(worst < 1e-8);
  }
  SUBCASE("out of range") {
    Grid g(0, 1, 16);
    auto x = sample(g, [](double t) { return t; });
    CHECK_THROWS_AS(resample(x, Grid(-0.1, 0.5, 8)), std::domain_error);
  }
  SUBCASE("interp_at hits nodes and midpoints") {
    Grid g(0, 2, 40);
    auto x = sample(g, [](double t) { return t * t; });
    CHECK(interp_at(x, g.node(7)) == x.values[7]);
    CHECK(interp_at(x, 0.33) == doctest::Approx(0.33 * 0.33).epsilon(1e-12));
  }
}

TEST_CASE("csv round trip is exact") {
  Grid g(-1.0, 2.0, 37);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  SampledFn x(g);
  for (auto& v : x.values) v = dist(rng) * std::pow(10.0, std::uniform_int_distribution<int>(-8, 8)(rng));
  x.set_mask(5);

  const std::string path = "numgrid_roundtrip.csv";
  write_csv(x, path);
  auto y = read_csv(path);
  REQUIRE(y.grid == g);
  for (int j = 0; j <= g.n; ++j) {
    if (j == 5) {
      CHECK(y.masked(j));
    } else {
      CHECK(y.values[j] == x.values[j]);
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("fit_order recovers a synthetic slope") {
  std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> err;
  for (double v : h) err.push_back(3.7 * std::pow(v, 1.5));
  CHECK(fit_order(h, err) == doctest::Approx(1.5).epsilon(1e-10));
}
