#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "simplexia/quadrature.hpp"
#include "simplexia/radial.hpp"

using namespace simplexia;

namespace {

Simplex corner2() {
  Matrix v(3, 2);
  v << 0, 0, 1, 0, 0, 1;
  return Simplex(v);
}

Simplex interval() {
  Matrix v(2, 1);
  v << 0, 1;
  return Simplex(v);
}

// All exponent vectors of length n with total degree <= deg.
void exponents(int n, int deg, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int e : cur) used += e;
  for (int e = 0; e + used <= deg; ++e) {
    cur.push_back(e);
    exponents(n, deg, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TEST_CASE("Grundmann-Moller weights sum to one and the rule is exact to degree 2s+1") {
  for (int d = 1; d <= 4; ++d)
    for (int s = 0; s <= 3; ++s) {
      const QuadratureRule rule = grundmann_moller(d, s);
      CHECK(rule.degree == 2 * s + 1);
      CHECK(std::abs(rule.weights.sum() - 1.0) < 1e-14);
      const Simplex t = random_unit_simplex(d, 100 + d).scaled(0.9);
      const double vol = oracle::det_volume(t.vertices());
      std::vector<std::vector<int>> all;
      std::vector<int> cur;
      exponents(d + 1, 2 * s + 1, cur, all);
      for (const auto& a : all) {
        const double exact = oracle::barycentric_moment(vol, d, a);
        double q = 0.0;
        for (Eigen::Index i = 0; i < rule.nodes.rows(); ++i) {
          double term = 1.0;
          for (int j = 0; j <= d; ++j) term *= std::pow(rule.nodes(i, j), a[j]);
          q += rule.weights(i) * term;
        }
        CHECK(vol * q == doctest::Approx(exact).epsilon(1e-12));
      }
    }
}

TEST_CASE("rule construction and application errors") {
  CHECK_THROWS_AS((void)grundmann_moller(0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)grundmann_moller(2, -1), std::invalid_argument);
  const QuadratureRule r3 = grundmann_moller(3, 1);
  CHECK_THROWS_AS((void)apply_rule(r3, corner2(), [](const Vector&) { return 1.0; }), std::invalid_argument);
}

TEST_CASE("barycentric monomials") {
  CHECK(integrate_barycentric_monomial(corner2(), {0, 0, 0}) == doctest::Approx(0.5));
  // lambda_1 lambda_2 on any unit-area triangle: 2! * 1 * 1 / 4! = 1/12.
  const Simplex t = random_unit_simplex(2, 6);
  CHECK(integrate_barycentric_monomial(t, {0, 1, 1}) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  const IntegralEstimate est = integrate_adaptive(
      [&](const Vector& x) {
        const Vector lam = barycentric(t, x);
        return lam(1) * lam(2);
      },
      t, 1e-12);
  CHECK(est.value == doctest::Approx(1.0 / 12.0).epsilon(1e-10));
  CHECK_THROWS_AS((void)integrate_barycentric_monomial(corner2(), {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS((void)integrate_barycentric_monomial(corner2(), {1, -1, 0}), std::invalid_argument);
}

TEST_CASE("Cartesian monomials") {
  const double xy = integrate_monomial(corner2(), {1, 1});
  CHECK(xy == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  const auto mc = oracle::monte_carlo(corner2().vertices(), [](const Vector& x) { return x(0) * x(1); }, 400000, 5);
  CHECK(std::abs(xy - mc.mean) < 1e-3);
  CHECK(integrate_monomial(interval(), {4}) == doctest::Approx(0.2));
  CHECK_THROWS_AS((void)integrate_monomial(corner2(), {1}), std::invalid_argument);
  CHECK_THROWS_AS((void)integrate_monomial(corner2(), {-1, 0}), std::invalid_argument);
}

TEST_CASE("products of affine forms") {
  const Simplex t = random_unit_simplex(3, 11);
  Matrix forms(2, 4);
  forms << 1, 2, 3, 4, 0.5, -1, 0, 2;
  const QuadratureRule rule = grundmann_moller(3, 1);
  const double q = apply_rule(rule, t, [&](const Vector& x) {
    const Vector lam = barycentric(t, x);
    return forms.row(0).dot(lam) * forms.row(1).dot(lam);
  });
  CHECK(integrate_affine_product(t, forms) == doctest::Approx(q).epsilon(1e-12));
  CHECK_THROWS_AS((void)integrate_affine_product(t, Matrix(2, 3)), std::invalid_argument);
}

TEST_CASE("adaptive integration") {
  SUBCASE("constant on a unit-volume simplex") {
    const auto est = integrate_adaptive([](const Vector&) { return 1.0; }, random_unit_simplex(3, 3), 1e-12);
    CHECK(std::abs(est.value - 1.0) < 1e-12);
    CHECK(est.error_estimate >= 0.0);
    CHECK(est.cells_used >= 1);
  }
  SUBCASE("degree-5 polynomial against the exact monomial formula") {
    const Simplex t = random_unit_simplex(2, 8);
    auto f = [](const Vector& x) { return 3.0 * std::pow(x(0), 3) * x(1) * x(1) - x(1) * x(1) * x(1) + 0.5; };
    const double exact = 3.0 * integrate_monomial(t, {3, 2}) - integrate_monomial(t, {0, 3}) + 0.5 * volume(t);
    CHECK(integrate_adaptive(f, t, 1e-12).value == doctest::Approx(exact).epsilon(1e-10));
  }
  SUBCASE("cap of a paraboloid cut by the sphere, against Monte Carlo") {
    const Simplex t = random_unit_simplex(2, 14);
    const Vector x0 = t.vertex(0);
    const double r2 = 0.6 * (t.vertex(1) - x0).squaredNorm();
    auto f = [&](const Vector& x) { return std::max(0.0, r2 - (x - x0).squaredNorm()); };
    const auto est = integrate_adaptive(f, t, 1e-9);
    const auto mc = oracle::monte_carlo(t.vertices(), f, 400000, 17);
    CHECK(std::abs(est.value - mc.mean) < 3.0 * mc.stderr_);
  }
  SUBCASE("budget exhaustion is reported, not hidden") {
    auto f = [](const Vector& x) { return std::sqrt(std::abs(x(0) - 0.3)); };
    const auto est = integrate_adaptive(f, corner2(), 1e-15, 8);
    CHECK(est.budget_exhausted);
    CHECK(est.cells_used <= 8);
  }
  SUBCASE("tolerance must be positive") {
    CHECK_THROWS_AS((void)integrate_adaptive([](const Vector&) { return 1.0; }, corner2(), 0.0), std::invalid_argument);
  }
}

TEST_CASE("asymmetric power integral on the unit interval against the piecewise antiderivative") {
  // int_0^1 |(x - 1/2)^2 - 1/16| dx, roots at 1/4 and 3/4.
  auto G = [](double x) { return std::pow(x - 0.5, 3) / 3.0 - x / 16.0; };
  const double exact = (G(0.25) - G(0.0)) - (G(0.75) - G(0.25)) + (G(1.0) - G(0.75));
  Vector c(1);
  c << 0.5;
  const auto est = integrate_asym_power(c, 1.0 / 16.0, {1.0, 1.0, 1.0}, interval(), 1e-12);
  CHECK(est.value == doctest::Approx(exact).epsilon(1e-13));
  const auto cells = integrate_asym_power_cells(c, 1.0 / 16.0, {1.0, 1.0, 1.0}, interval(), 1e-12);
  CHECK(cells.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("radial integrator agrees with Monte Carlo and the cell reference") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.6);
  for (int d = 2; d <= 3; ++d)
    for (double p : {1.0, 1.5, 3.0}) {
      const Simplex t = random_unit_simplex(d, 30 + d);
      Vector c = t.centroid();
      for (int i = 0; i < d; ++i) c(i) += g(rng);
      double hi = 0.0;
      for (int i = 0; i <= d; ++i) hi = std::max(hi, (t.vertex(i) - c).squaredNorm());
      const double rho = 0.5 * hi;
      const AsymParams params{p, 1.0, 2.5};
      auto f = [&](const Vector& x) {
        const double e = (x - c).squaredNorm() - rho;
        return e >= 0.0 ? std::pow(params.alpha * e, p) : std::pow(-params.beta * e, p);
      };
      const auto mc = oracle::monte_carlo(t.vertices(), f, 200000, 50 + d);
      const double radial = integrate_asym_power(c, rho, params, t, 1e-10).value;
      CHECK(std::abs(radial - mc.mean) < 4.0 * mc.stderr_);
      if (d == 2) {
        const auto cells = integrate_asym_power_cells(c, rho, params, t, 1e-9);
        CHECK(radial == doctest::Approx(cells.value).epsilon(1e-7));
      }
    }
}

TEST_CASE("one-sided kernel integrates over the exterior only and decreases in the level") {
  const Simplex t = random_unit_simplex(2, 19);
  const RadialIntegrator ri(t);
  const RadialKernel outside{1.0, 0.0, 1.0};
  const Vector c = t.centroid();
  double prev = 1e300;
  for (double rho : {0.0, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 10.0}) {
    const double v = ri.integrate(outside, c, rho);
    const auto cells = integrate_asym_power_cells(c, rho, {1.0, 1.0, 1e-300}, t, 1e-11);
    CHECK(v == doctest::Approx(cells.value).epsilon(1e-9));
    if (rho == 0.4) {
      auto f = [&](const Vector& x) { return std::max(0.0, (x - c).squaredNorm() - rho); };
      const auto mc = oracle::monte_carlo(t.vertices(), f, 400000, 6);
      CHECK(std::abs(v - mc.mean) < 4.0 * mc.stderr_);
    }
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  CHECK(prev == 0.0);
}

TEST_CASE("facet flux is the negative center gradient") {
  const Simplex t = random_unit_simplex(3, 23);
  const RadialIntegrator ri(t);
  const RadialKernel k{1.0, 3.0, 2.0};
  Vector c = t.centroid();
  c(0) += 0.3;
  const double rho = 0.4;
  const Vector flux = ri.facet_flux(k, c, rho);
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i) {
    Vector cp = c, cm = c;
    cp(i) += h;
    cm(i) -= h;
    const double fd = (ri.integrate(k, cp, rho) - ri.integrate(k, cm, rho)) / (2 * h);
    CHECK(-flux(i) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("asym power integral rejects infinite settings") {
  Vector c(1);
  c << 0.5;
  CHECK_THROWS_AS((void)integrate_asym_power(c, 0.1, {kInf, 1.0, 1.0}, interval(), 1e-9), std::invalid_argument);
  CHECK_THROWS_AS((void)integrate_asym_power(c, 0.1, {2.0, kInf, 1.0}, interval(), 1e-9), std::invalid_argument);
  CHECK_THROWS_AS((void)integrate_asym_power(c, 0.1, {0.5, 1.0, 1.0}, interval(), 1e-9), std::invalid_argument);
}
