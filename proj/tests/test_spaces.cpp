#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace semicyclic;
using fx::interval;
using fx::v1;
using fx::v2;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector random_vec(std::mt19937_64& rng, std::size_t dim, double lo, double hi) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (auto& c : v) c = uniform(rng, lo, hi);
  return v;
}

ConvexRegion triangle() {
  Matrix a(3, 2);
  a << -1, 0, 0, -1, 1, 1;
  Vector b(3);
  b << 0, 0, 1;
  return ConvexRegion::polytope(a, b, v2(0.2, 0.2));
}

}  // namespace

TEST_CASE("metric distance examples") {
  const auto e = NormSpec::euclidean();
  CHECK(metric_distance(e, Point{0.0, 0.0}, Point{3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(metric_distance(e, Point{1.7, -2.0}, Point{1.7, -2.0}) == 0.0);
  CHECK(metric_distance(NormSpec::lp(3), Point{0.0}, Point{2.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(metric_distance(e, Point{0.0}, Point{0.0, 1.0}), InvalidInput);
}

TEST_CASE("points and norms reject invalid values") {
  CHECK_THROWS_AS(Point{std::nan("")}, InvalidInput);
  CHECK_THROWS_AS(Point{Vector(0)}, InvalidInput);
  CHECK_THROWS_AS(NormSpec::lp(1.0), InvalidInput);
  CHECK_THROWS_AS(NormSpec::lp(std::numeric_limits<double>::infinity()), InvalidInput);
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(11);
  for (const auto& norm : {NormSpec::euclidean(), NormSpec::lp(3), NormSpec::lp(1.5)}) {
    for (int t = 0; t < 1000; ++t) {
      const std::size_t dim = 1 + t % 3;
      const Point x(random_vec(rng, dim, -5, 5));
      const Point y(random_vec(rng, dim, -5, 5));
      const Point z(random_vec(rng, dim, -5, 5));
      const double dxy = metric_distance(norm, x, y);
      CHECK(dxy >= 0.0);
      CHECK(dxy == metric_distance(norm, y, x));
      CHECK(metric_distance(norm, x, x) <= 1e-12);
      CHECK(dxy <= metric_distance(norm, x, z) + metric_distance(norm, z, y) + 1e-12);
    }
  }
}

TEST_CASE("projection examples") {
  const auto e = NormSpec::euclidean();
  CHECK(project(e, interval(1, 2), Point{0.0})[0] == 1.0);
  const Point p = project(e, ConvexRegion::ball(v2(0, 0), 1.0), Point{3.0, 4.0});
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-14));
  // Dense boundary sampling: nothing on the circle is closer than p.
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100000; ++t) {
    const double th = 2 * M_PI * t / 100000.0;
    best = std::min(best, std::hypot(3 - std::cos(th), 4 - std::sin(th)));
  }
  CHECK(metric_distance(e, p, Point{3.0, 4.0}) <= best + 1e-12);

  const Point inside{1.5};
  CHECK(project(e, interval(1, 2), inside)[0] == 1.5);
}

TEST_CASE("projection support depends on norm and shape") {
  const auto q3 = NormSpec::lp(3);
  CHECK(project(q3, ConvexRegion::box(v2(0, 0), v2(1, 1)), Point{2.0, -1.0})[0] == 1.0);
  CHECK_THROWS_AS(project(q3, ConvexRegion::ball(v2(0, 0), 1.0), Point{2.0, 0.0}), UnsupportedCapability);
  CHECK_THROWS_AS(project(q3, triangle(), Point{2.0, 0.0}), UnsupportedCapability);
}

TEST_CASE("projection optimality against sampled region points") {
  std::mt19937_64 rng(5);
  std::mt19937_64 sampler(6);
  const auto e = NormSpec::euclidean();
  for (int c = 0; c < 100; ++c) {
    ConvexRegion region = c % 3 == 0   ? ConvexRegion::box(v2(-1, 0), v2(1, 2))
                          : c % 3 == 1 ? ConvexRegion::ball(v2(0.5, -0.5), 1.5)
                                       : triangle();
    const Point x(random_vec(rng, 2, -4, 4));
    const Point p = project(e, region, x);
    CHECK(contains(region, p));
    const double dp = metric_distance(e, x, p);
    double worst = -1.0;
    for (int s = 0; s < 1000; ++s) {
      const Point q = sample_in_region(region, sampler);
      worst = std::max(worst, dp - metric_distance(e, x, q));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("region distance examples") {
  const auto e = NormSpec::euclidean();
  const double d = region_distance(e, interval(1, 2), interval(-2, -1));
  // Lattice brute force with spacing 1e-4.
  double brute = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 10000; i += 50) {
    for (int j = 0; j <= 10000; j += 50) brute = std::min(brute, (1 + i * 1e-4) - (-2 + j * 1e-4));
  }
  CHECK(d == doctest::Approx(brute).epsilon(1e-12));
  CHECK(d == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(region_distance(e, interval(1, 2), interval(1, 2)) == 0.0);

  const auto a = ConvexRegion::ball(v2(0, 0), 1.0);
  const auto b = ConvexRegion::ball(v2(5, 0), 1.0);
  CHECK(region_distance(e, a, b) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("region distance is symmetric and exact for intervals") {
  std::mt19937_64 rng(21);
  const auto e = NormSpec::euclidean();
  for (int t = 0; t < 200; ++t) {
    double a0 = uniform(rng, -5, 5);
    double a1 = a0 + uniform(rng, 0, 2);
    double b0 = uniform(rng, -5, 5);
    double b1 = b0 + uniform(rng, 0, 2);
    const auto a = interval(a0, a1);
    const auto b = interval(b0, b1);
    const double gap = std::max({0.0, b0 - a1, a0 - b1});
    CHECK(region_distance(e, a, b) == region_distance(e, b, a));
    CHECK(std::abs(region_distance(e, a, b) - gap) <= 1e-12);
    CHECK(region_distance(e, a, a) == 0.0);
  }
  const auto ball = ConvexRegion::ball(v2(4, 1), 1.0);
  CHECK(region_distance(e, triangle(), ball) == region_distance(e, ball, triangle()));
}

TEST_CASE("membership examples") {
  CHECK(contains(interval(1, 2), Point{1.5}, 0.0));
  CHECK(contains(interval(1, 2), Point{2.0 + 1e-12}, 1e-9));
  CHECK_FALSE(contains(ConvexRegion::ball(v2(0, 0), 1.0), Point{2.0, 0.0}, 1e-9));
}

TEST_CASE("region validation") {
  CHECK_THROWS_AS(interval(2, 1), InvalidInput);
  CHECK_THROWS_AS(ConvexRegion::ball(v2(0, 0), 0.0), InvalidInput);
  Matrix a(1, 2);
  a << 1, 0;
  // Interior point violates the constraint.
  CHECK_THROWS_AS(ConvexRegion::polytope(a, v1(0), v2(1, 0)), InvalidInput);
}

TEST_CASE("cyclic successor wraps") {
  CHECK(cyclic_successor(0, 3) == 1);
  CHECK(cyclic_successor(2, 3) == 0);
  CHECK(cyclic_successor(1, 2) == 0);
  CHECK(cyclic_predecessor(0, 3) == 2);
  CHECK_THROWS_AS(cyclic_successor(3, 3), InvalidInput);
}

TEST_CASE("cycle partition distances") {
  const CyclePartition part(NormSpec::euclidean(),
                            {ConvexRegion::box(v2(0, 0), v2(1, 1)), ConvexRegion::box(v2(2, 0), v2(3, 1)),
                             ConvexRegion::ball(v2(1.5, -3), 1.0)});
  const Matrix& m = part.distance_matrix();
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(m(i, i) == 0.0);
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(m(i, j) == m(j, i));
      CHECK(m(i, j) >= 0.0);
    }
  }
  CHECK(part.adjacent_gap(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(part.adjacent_gap(2) == part.distance(2, 0));
  CHECK_FALSE(part.intersecting());
  CHECK(fx::intersecting().partition().intersecting());
  CHECK_THROWS_AS(CyclePartition(NormSpec::euclidean(), {interval(0, 1)}), InvalidInput);
}

TEST_CASE("locate prefers the given region on overlaps") {
  const CyclePartition part(NormSpec::euclidean(), {interval(0, 2), interval(-2, 0)});
  CHECK(part.locate(Point{0.0}) == 0u);
  CHECK(part.locate(Point{0.0}, 1) == 1u);
  CHECK_FALSE(part.locate(Point{5.0}).has_value());
}
