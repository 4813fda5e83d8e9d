#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "simplexia/simplex.hpp"

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

}  // namespace

TEST_CASE("volume of the corner triangle and the unit interval") {
  CHECK(volume(corner2()) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(volume(interval()) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("volume agrees with hit counting on a random tetrahedron") {
  const Simplex s = random_unit_simplex(3, 5).scaled(0.8);
  const double mc = oracle::rejection_volume(s.vertices(), 4000000, 99);
  CHECK(std::abs(volume(s) - mc) / mc < 0.01);
}

TEST_CASE("volume is unchanged by relabeling and rigid motions") {
  std::mt19937_64 rng(3);
  for (int d = 1; d <= 5; ++d) {
    const Simplex s = random_unit_simplex(d, 40 + d);
    std::vector<int> perm(d + 1);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix pv(d + 1, d);
    for (int i = 0; i <= d; ++i) pv.row(i) = s.vertices().row(perm[i]);
    CHECK(std::abs(volume(Simplex(pv)) - volume(s)) < 1e-12);

    const Matrix Q = oracle::random_orthogonal(d, rng);
    const Simplex moved = s.transformed(Q, Vector::Constant(d, 2.5));
    CHECK(std::abs(volume(moved) - volume(s)) < 1e-12);
  }
}

TEST_CASE("signed volume flips under a swap of two vertices") {
  const Simplex s = corner2();
  Matrix v = s.vertices();
  v.row(0).swap(v.row(1));
  CHECK(signed_volume(Simplex(v)) == doctest::Approx(-signed_volume(s)));
}

TEST_CASE("degenerate and malformed vertex sets are rejected") {
  Matrix flat(3, 2);
  flat << 0, 0, 1, 1, 2, 2;
  CHECK_THROWS_AS(Simplex{flat}, DegenerateSimplexError);

  Matrix nearly(3, 2);
  nearly << 0, 0, 1, 0, 0.5, 1e-16;
  CHECK_THROWS_AS(Simplex{nearly}, DegenerateSimplexError);

  Matrix repeated(2, 1);
  repeated << 3, 3;
  CHECK_THROWS_AS(Simplex{repeated}, DegenerateSimplexError);

  CHECK_THROWS_AS(Simplex{Matrix(2, 2)}, std::invalid_argument);
  CHECK_THROWS_AS(Simplex{Matrix(1, 0)}, std::invalid_argument);

  Matrix nan(3, 2);
  nan << 0, 0, 1, 0, 0, std::nan("");
  CHECK_THROWS_AS(Simplex{nan}, std::invalid_argument);
}

TEST_CASE("diameter") {
  CHECK(diameter(corner2()) == doctest::Approx(std::sqrt(2.0)));
  const Simplex r = regular_unit_simplex(2);
  const auto edges = edge_lengths(r);
  CHECK(diameter(r) == doctest::Approx(edges.front()).epsilon(1e-14));
}

TEST_CASE("regular unit simplices") {
  SUBCASE("d = 1 is an interval of length one") {
    const Simplex r = regular_unit_simplex(1);
    CHECK(std::abs(r.vertex(1)(0) - r.vertex(0)(0)) == doctest::Approx(1.0));
  }
  SUBCASE("d = 2 is equilateral with sqrt(3)/4 s^2 = 1") {
    const double side = std::sqrt(4.0 / std::sqrt(3.0));
    for (double e : edge_lengths(regular_unit_simplex(2))) CHECK(e == doctest::Approx(side).epsilon(1e-13));
  }
  SUBCASE("d = 5 has unit volume and fifteen equal edges") {
    const Simplex r = regular_unit_simplex(5);
    CHECK(oracle::det_volume(r.vertices()) == doctest::Approx(1.0).epsilon(1e-12));
    const auto edges = edge_lengths(r);
    REQUIRE(edges.size() == 15);
    const auto [lo, hi] = std::minmax_element(edges.begin(), edges.end());
    CHECK(*hi - *lo < 1e-12);
  }
}

TEST_CASE("random unit simplices are deterministic, unit volume and non-degenerate") {
  for (int d = 1; d <= 6; ++d)
    for (std::uint64_t seed : {0ULL, 1ULL, 77ULL}) {
      const Simplex s = random_unit_simplex(d, seed);
      CHECK(std::abs(volume(s) - 1.0) < 1e-10);
      CHECK(random_unit_simplex(d, seed).vertices() == s.vertices());
    }
  for (std::uint64_t seed = 0; seed < 1000; ++seed) CHECK_NOTHROW((void)random_unit_simplex(3, seed));
  CHECK(random_unit_simplex(3, 1).vertices() != random_unit_simplex(3, 2).vertices());
}

TEST_CASE("normalized rescales about the centroid") {
  const Simplex s = corner2();
  const Simplex n = normalized(s);
  CHECK(volume(n) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((n.centroid() - s.centroid()).norm() < 1e-14);
}

TEST_CASE("barycentric coordinates and projection") {
  const Simplex s = corner2();
  Vector x(2);
  x << 0.25, 0.5;
  const Vector lam = barycentric(s, x);
  CHECK(lam.sum() == doctest::Approx(1.0));
  CHECK((s.vertices().transpose() * lam - x).norm() < 1e-15);

  CHECK(squared_distance(s, x) == 0.0);
  Vector out(2);
  out << 1.0, 1.0;  // closest point (1/2, 1/2) on the hypotenuse
  CHECK(squared_distance(s, out) == doctest::Approx(0.5));
  Vector below(2);
  below << -1.0, -2.0;  // nearest is the corner
  CHECK(closest_point(s, below).norm() < 1e-15);
}

TEST_CASE("projection matches a brute-force search over a fine grid") {
  const Simplex s = random_unit_simplex(2, 12);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(2);
    x << g(rng), g(rng);
    double best = 1e300;
    const int n = 400;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) {
        const Vector lam = (Vector(3) << double(i) / n, double(j) / n, double(n - i - j) / n).finished();
        best = std::min(best, (s.vertices().transpose() * lam - x).squaredNorm());
      }
    CHECK(squared_distance(s, x) <= best + 1e-12);
    CHECK(squared_distance(s, x) >= best - 1e-3);
  }
}

TEST_CASE("circumsphere is equidistant and the minimal ball contains all vertices") {
  for (int d = 1; d <= 4; ++d) {
    const Simplex s = random_unit_simplex(d, 9 + d);
    const Ball cs = circumsphere(s);
    for (int i = 0; i <= d; ++i) CHECK((s.vertex(i) - cs.center).squaredNorm() == doctest::Approx(cs.radius_sq));
    const Ball mb = min_enclosing_ball(s);
    CHECK(mb.radius_sq <= cs.radius_sq * (1 + 1e-14));
    for (int i = 0; i <= d; ++i) CHECK((s.vertex(i) - mb.center).squaredNorm() <= mb.radius_sq * (1 + 1e-12));
  }
  // Obtuse triangle: the minimal ball is the one on the long edge.
  Matrix v(3, 2);
  v << -1, 0, 1, 0, 0, 0.1;
  const Ball mb = min_enclosing_ball(Simplex(v));
  CHECK(mb.radius_sq == doctest::Approx(1.0));
  CHECK(mb.center.norm() < 1e-15);
}

TEST_CASE("canonical frame of an isosceles triangle has b = 0") {
  Matrix v(3, 2);
  v << -1, 0, 1, 0, 0.3, 2.0;
  Matrix w = v;
  w.row(2) << 0.0, 2.0;
  const CanonicalFrame iso = canonicalize(Simplex(w), {0, 1});
  CHECK(std::abs(iso.b(0)) < 1e-14);
  const CanonicalFrame skew = canonicalize(Simplex(v), {0, 1});
  CHECK(std::abs(skew.b(0)) > 1e-3);
}

TEST_CASE("canonical frame layout and inverse motion") {
  const Simplex s = random_unit_simplex(4, 21);
  const CanonicalFrame f = canonicalize(s, {1, 3});
  CHECK(f.others == std::vector<int>{0, 2, 4});
  CHECK(f.delta == doctest::Approx(0.5 * (s.vertex(1) - s.vertex(3)).norm()));
  for (int j = 0; j < 3; ++j) {
    CHECK(f.A(j, j) > 0.0);
    for (int i = j + 1; i < 3; ++i) CHECK(f.A(i, j) == 0.0);
  }
  const Simplex fs = f.frame_simplex();
  std::vector<int> order{1, 3, 0, 2, 4};
  for (int k = 0; k < 5; ++k) {
    CHECK((f.motion.inverse(fs.vertex(k)) - s.vertex(order[k])).norm() < 1e-10);
    CHECK((f.motion.apply(s.vertex(order[k])) - fs.vertex(k)).norm() < 1e-10);
  }
  CHECK((f.motion.rotation.transpose() * f.motion.rotation - Matrix::Identity(4, 4)).norm() < 1e-12);
  CHECK(std::abs(volume(fs) - volume(s)) < 1e-12);
}

TEST_CASE("canonicalize rejects bad pairs") {
  const Simplex s = random_unit_simplex(3, 2);
  CHECK_THROWS_AS((void)canonicalize(s, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS((void)canonicalize(s, {0, 4}), std::invalid_argument);
  CHECK_THROWS_AS((void)canonicalize(s, {-1, 2}), std::invalid_argument);
}

TEST_CASE("shape distance") {
  std::mt19937_64 rng(8);
  const Simplex s = random_unit_simplex(3, 4);
  const Simplex moved = s.transformed(oracle::random_orthogonal(3, rng), Vector::Constant(3, -1.0));
  CHECK(shape_distance(s, moved) < 1e-10);
  CHECK(shape_distance(s, s.scaled(3.0)) < 1e-10);
  CHECK(shape_distance(regular_unit_simplex(2), normalized(corner2())) > 0.1);
  CHECK_THROWS_AS((void)shape_distance(regular_unit_simplex(2), regular_unit_simplex(3)), std::invalid_argument);
}
