#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "regtsp/errors.hpp"
#include "regtsp/rng.hpp"
#include "regtsp/space.hpp"

using namespace regtsp;

namespace {

SpaceSpec unit_square() {
  SpaceConfig config;
  config.kind = SpaceKind::UnitCube;
  config.ambient_dim = 2;
  return SpaceSpec::make(config);
}

SpaceSpec gasket(int depth = 30) {
  SpaceConfig config = sierpinski_gasket_config();
  config.address_depth = depth;
  return SpaceSpec::make(config);
}

// Box-counting oracle: occupancy of a base^k x base^k grid over the
// attractor's bounding box, regressed against k. Independent of both the
// closed-form dimension and the regularity estimator. Base matches the
// attractor's subdivision (2 for the gasket, 3 for the carpet) so the grids
// track the self-similar cells.
double box_counting_dimension(const PointSet& points, int k_min, int k_max,
                              double base = 2.0) {
  std::vector<double> xs, ys;
  std::vector<double> lo, hi;
  points.space().bounding_box(lo, hi);
  const double span_x = hi[0] - lo[0];
  const double span_y = hi[1] - lo[1];
  for (int k = k_min; k <= k_max; ++k) {
    const double cells = std::pow(base, k);
    const long last = static_cast<long>(cells) - 1;
    std::set<std::pair<long, long>> occupied;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto p = points.point(i);
      const long cx = std::min(
          static_cast<long>((p[0] - lo[0]) / span_x * cells), last);
      const long cy = std::min(
          static_cast<long>((p[1] - lo[1]) / span_y * cells), last);
      occupied.insert({cx, cy});
    }
    xs.push_back(k * std::log(base));
    ys.push_back(std::log(static_cast<double>(occupied.size())));
  }
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= xs.size();
  mean_y /= xs.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("make_space computes diameters") {
  CHECK(unit_square().diameter() == doctest::Approx(std::sqrt(2.0)));

  SpaceConfig cube3;
  cube3.kind = SpaceKind::UnitCube;
  cube3.ambient_dim = 3;
  CHECK(SpaceSpec::make(cube3).diameter() == doctest::Approx(std::sqrt(3.0)));

  SpaceConfig torus;
  torus.kind = SpaceKind::FlatTorus;
  torus.ambient_dim = 2;
  CHECK(SpaceSpec::make(torus).diameter() ==
        doctest::Approx(std::sqrt(2.0) / 2.0));

  // Unit-side gasket: farthest fixed points are the triangle vertices.
  CHECK(gasket().diameter() == doctest::Approx(1.0));
}

TEST_CASE("make_space rejects invalid configs") {
  SpaceConfig bad_dim;
  bad_dim.ambient_dim = 0;
  CHECK_THROWS_AS(SpaceSpec::make(bad_dim), ConfigError);

  SpaceConfig unequal = sierpinski_gasket_config();
  unequal.maps[1].ratio = 1.0 / 3.0;
  CHECK_THROWS_AS(SpaceSpec::make(unequal), ConfigError);

  SpaceConfig empty_ifs;
  empty_ifs.kind = SpaceKind::IfsAttractor;
  empty_ifs.ambient_dim = 2;
  CHECK_THROWS_AS(SpaceSpec::make(empty_ifs), ConfigError);

  SpaceConfig one_map;
  one_map.kind = SpaceKind::IfsAttractor;
  one_map.ambient_dim = 2;
  one_map.maps.push_back({0.5, {0.0, 0.0}});
  CHECK_THROWS_AS(SpaceSpec::make(one_map), ConfigError);
}

TEST_CASE("similarity dimension closed forms") {
  CHECK(unit_square().similarity_dimension() == 2.0);
  CHECK(gasket().similarity_dimension() ==
        doctest::Approx(std::log(3.0) / std::log(2.0)).epsilon(1e-12));
  const SpaceSpec carpet = SpaceSpec::make(sierpinski_carpet_config());
  CHECK(carpet.similarity_dimension() ==
        doctest::Approx(std::log(8.0) / std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("similarity dimension agrees with box counting") {
  const PointSet gasket_points = sample(gasket(), 100000, 41);
  const double gasket_slope = box_counting_dimension(gasket_points, 2, 7);
  CHECK(gasket_slope ==
        doctest::Approx(std::log(3.0) / std::log(2.0)).epsilon(0.05 / 1.58));

  const SpaceSpec carpet = SpaceSpec::make(sierpinski_carpet_config());
  const PointSet carpet_points = sample(carpet, 100000, 42);
  const double carpet_slope =
      box_counting_dimension(carpet_points, 1, 4, 3.0);
  CHECK(carpet_slope ==
        doctest::Approx(std::log(8.0) / std::log(3.0)).epsilon(0.05 / 1.89));
}

TEST_CASE("sampling is deterministic") {
  const SpaceSpec square = unit_square();
  const PointSet a = sample(square, 4, 7);
  const PointSet b = sample(square, 4, 7);
  CHECK(a.coords() == b.coords());
  const PointSet c = sample(square, 4, 8);
  CHECK(a.coords() != c.coords());

  const SpaceSpec g = gasket();
  CHECK(sample(g, 10, 3).coords() == sample(g, 10, 3).coords());
}

TEST_CASE("uniform sample has centered coordinate means") {
  const PointSet points = sample(unit_square(), 10000, 123);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    mean_x += points.point(i)[0];
    mean_y += points.point(i)[1];
  }
  mean_x /= points.size();
  mean_y /= points.size();
  // 5 standard errors of a Uniform(0,1) mean at n = 10^4.
  const double tol = 5.0 * std::sqrt(1.0 / 12.0 / 10000.0);
  CHECK(std::abs(mean_x - 0.5) < tol);
  CHECK(std::abs(mean_y - 0.5) < tol);
}

TEST_CASE("gasket sample stays in the triangle hull") {
  const SpaceSpec g = gasket(20);
  const PointSet points = sample(g, 10000, 99);
  // Hull check: the unit-side triangle with vertices (0,0), (1,0),
  // (1/2, sqrt(3)/2); signed-area side tests with truncation slack.
  const double tol = std::ldexp(1.0, -20) * g.diameter() + 1e-12;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    CHECK(p[1] >= -tol);
    // left edge: from (0,0) to (1/2, sqrt(3)/2)
    CHECK(std::sqrt(3.0) * p[0] - p[1] >= -tol);
    // right edge: from (1,0) to (1/2, sqrt(3)/2)
    CHECK(std::sqrt(3.0) * (1.0 - p[0]) - p[1] >= -tol);
  }
}

TEST_CASE("distance metrics") {
  const SpaceSpec square = unit_square();
  const std::vector<double> a{0.25, 0.5};
  CHECK(square.distance(a, a) == 0.0);

  // 3-4-5 triangle scaled into the unit square.
  const std::vector<double> origin{0.0, 0.0};
  const std::vector<double> p{0.3, 0.4};
  CHECK(square.distance(origin, p) == doctest::Approx(0.5).epsilon(1e-15));

  SpaceConfig torus1;
  torus1.kind = SpaceKind::FlatTorus;
  torus1.ambient_dim = 1;
  const SpaceSpec wrap = SpaceSpec::make(torus1);
  CHECK(wrap.distance(std::vector<double>{0.1}, std::vector<double>{0.9}) ==
        doctest::Approx(0.2).epsilon(1e-12));

  SpaceConfig cheb;
  cheb.kind = SpaceKind::UnitCube;
  cheb.ambient_dim = 2;
  cheb.metric = Metric::Chebyshev;
  const SpaceSpec box = SpaceSpec::make(cheb);
  CHECK(box.distance(origin, p) == doctest::Approx(0.4));
  CHECK(box.diameter() == 1.0);

  CHECK_THROWS_AS(square.distance(origin, std::vector<double>{0.1}),
                  ConfigError);
}

TEST_CASE("metric axioms on random triples") {
  const SpaceSpec spaces[] = {unit_square(), gasket(),
                              SpaceSpec::make([] {
                                SpaceConfig t;
                                t.kind = SpaceKind::FlatTorus;
                                t.ambient_dim = 3;
                                return t;
                              }())};
  for (const auto& spec : spaces) {
    const PointSet points = sample(spec, 300, 17);
    Rng rng(5);
    for (int trial = 0; trial < 10000; ++trial) {
      const auto i = rng.next_below(300);
      const auto j = rng.next_below(300);
      const auto k = rng.next_below(300);
      const double dij = points.dist(i, j);
      const double dji = points.dist(j, i);
      const double dik = points.dist(i, k);
      const double dkj = points.dist(k, j);
      REQUIRE(dij == dji);  // symmetry is exact
      REQUIRE(dij >= 0.0);
      REQUIRE(dij <= dik + dkj + 1e-12);
    }
  }
}

TEST_CASE("point set containment validation") {
  const SpaceSpec square = unit_square();
  CHECK_THROWS_AS(PointSet(square, {0.5, 1.5}, std::nullopt), ConfigError);
  CHECK_NOTHROW(PointSet(square, {0.0, 1.0}, std::nullopt));

  SpaceConfig torus;
  torus.kind = SpaceKind::FlatTorus;
  torus.ambient_dim = 2;
  const SpaceSpec wrap = SpaceSpec::make(torus);
  CHECK_THROWS_AS(PointSet(wrap, {0.5, 1.0}, std::nullopt), ConfigError);
}

TEST_CASE("ball measure near an interior point matches disk area") {
  const SpaceSpec square = unit_square();
  const PointSet cloud = sample(square, 100000, 2024);
  const std::vector<double> center{0.5, 0.5};
  for (const double r : {0.05, 0.1, 0.2}) {
    const double measure = empirical_ball_measure(cloud, center, r);
    const double disk = std::acos(-1.0) * r * r;
    CHECK(measure == doctest::Approx(disk).epsilon(0.10));
  }
}

TEST_CASE("estimate_regularity recovers the dimension") {
  const RegularityWitness square_witness =
      estimate_regularity(unit_square(), 100000, 12, 7);
  CHECK(square_witness.d == doctest::Approx(2.0).epsilon(0.05));
  CHECK(square_witness.c_lower > 0.0);
  CHECK(square_witness.c_lower <= square_witness.d_upper);

  // +-0.1 absolute on d = 1.585.
  const RegularityWitness gasket_witness =
      estimate_regularity(gasket(), 100000, 12, 7);
  CHECK(gasket_witness.d ==
        doctest::Approx(gasket().similarity_dimension()).epsilon(0.063));
}

TEST_CASE("estimate_regularity rejects a degenerate grid") {
  RegularityOptions opts;
  opts.r_lo_frac = 1e-9;  // every ball empty at this scale
  opts.r_hi_frac = 3e-9;
  CHECK_THROWS_AS(estimate_regularity(unit_square(), 200, 5, 1, opts),
                  ConfigError);
}

TEST_CASE("analytic witness for the euclidean unit square") {
  const auto witness = analytic_witness(unit_square());
  REQUIRE(witness.has_value());
  CHECK(witness->d == 2.0);
  CHECK(witness->d_upper == doctest::Approx(std::acos(-1.0)));
  CHECK_FALSE(analytic_witness(gasket()).has_value());
}

TEST_CASE("witness flags sub-headline dimensions") {
  CHECK(RegularityWitness{2.0, 1.0, 2.0}.headline_applicable());
  CHECK_FALSE(RegularityWitness{1.0, 1.0, 2.0}.headline_applicable());
}
