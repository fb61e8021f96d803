#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "regtsp/analysis.hpp"
#include "regtsp/errors.hpp"
#include "regtsp/rng.hpp"

using namespace regtsp;

namespace {

SpaceSpec unit_square() {
  SpaceConfig config;
  config.kind = SpaceKind::UnitCube;
  config.ambient_dim = 2;
  return SpaceSpec::make(config);
}

PointSet square_corners() {
  return PointSet(unit_square(),
                  {0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0}, std::nullopt);
}

PointSet collinear_0137() {
  return PointSet(unit_square(),
                  {0.0, 0.0, 1.0 / 7.0, 0.0, 3.0 / 7.0, 0.0, 1.0, 0.0},
                  std::nullopt);
}

RegularityWitness square_witness() { return *analytic_witness(unit_square()); }

}  // namespace

TEST_CASE("ball family from a nearest-neighbor trace") {
  const auto nn = nearest_neighbor_tour(square_corners(), 0);
  const BallFamily family = extract_ball_family(nn.trace);
  REQUIRE(family.balls.size() == 3);
  CHECK(family.dropped_zero_radius == 0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(family.balls[i].radius == doctest::Approx(1.0));
    CHECK(family.balls[i].origin_step == static_cast<std::int32_t>(i));
    CHECK(family.balls[i].center == nn.tour.order[i]);
  }

  const auto line = nearest_neighbor_tour(collinear_0137(), 0);
  const BallFamily line_family = extract_ball_family(line.trace);
  REQUIRE(line_family.balls.size() == 3);
  CHECK(line_family.balls[0].radius == doctest::Approx(1.0 / 7.0));
  CHECK(line_family.balls[1].radius == doctest::Approx(2.0 / 7.0));
  CHECK(line_family.balls[2].radius == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("ball family drops zero-radius steps with a diagnostic") {
  SelectionTrace trace;
  trace.source = SolverTag::NearestNeighbor;
  trace.steps = {{0, 1, 0.0}, {1, 2, 0.5}};
  const BallFamily family = extract_ball_family(trace);
  CHECK(family.balls.size() == 1);
  CHECK(family.dropped_zero_radius == 1);

  SelectionTrace empty;
  CHECK_THROWS_AS(extract_ball_family(empty), ConfigError);
}

TEST_CASE("greedy family carries two balls per non-closing edge") {
  const auto greedy = greedy_tour(square_corners());
  const BallFamily family = extract_ball_family(greedy.trace);
  CHECK(family.balls.size() == 2 * 3);  // closing step excluded
}

TEST_CASE("star property holds on NN families") {
  Rng rng(11);
  SpaceConfig gasket = sierpinski_gasket_config();
  const SpaceSpec spaces[] = {unit_square(), SpaceSpec::make(gasket)};
  for (const auto& spec : spaces) {
    for (int trial = 0; trial < 50; ++trial) {
      const PointSet points = sample(spec, 100, rng.next_u64());
      const auto nn = nearest_neighbor_tour(points, 0);
      const StarReport report =
          check_star_property(extract_ball_family(nn.trace), points);
      CHECK(report.ordered_violations.empty());
      CHECK(report.min_violations.empty());
    }
  }
}

TEST_CASE("star checker reports mutual containment") {
  // Two unit balls at center distance 0.5, synthetic family.
  const PointSet points(unit_square(), {0.2, 0.5, 0.7, 0.5}, std::nullopt);
  BallFamily family;
  family.source = SolverTag::NearestNeighbor;
  family.balls = {{0, 1.0, 0}, {1, 1.0, 1}};
  const StarReport report = check_star_property(family, points);
  CHECK(report.ordered_violations.size() == 1);
  CHECK(report.min_violations.size() == 1);
  CHECK(report.pairs_checked == 1);
}

TEST_CASE("single-ball family is vacuously star-valid") {
  const PointSet points(unit_square(), {0.2, 0.5, 0.7, 0.5}, std::nullopt);
  BallFamily family;
  family.balls = {{0, 0.3, 0}};
  const StarReport report = check_star_property(family, points);
  CHECK(report.pairs_checked == 0);
  CHECK(report.passed());
}

TEST_CASE("dyadic class boundaries") {
  BallFamily family;
  family.balls = {{0, 0.75, 0}, {1, 0.5, 1}, {2, 0.3, 2}, {3, 1.0, 3}};
  const DyadicDecomposition decomp =
      dyadic_partition(family, 1.0, square_witness(), 4);
  // 0.75 and 1.0 in (1/2, 1] -> class 1; 0.5 and 0.3 in (1/4, 1/2] -> class 2.
  REQUIRE(decomp.classes.count(1) == 1);
  REQUIRE(decomp.classes.count(2) == 1);
  CHECK(decomp.classes.at(1) == std::vector<std::int32_t>{0, 3});
  CHECK(decomp.classes.at(2) == std::vector<std::int32_t>{1, 2});

  // Exact powers land on the closed upper end of the next class.
  BallFamily quarter;
  quarter.balls = {{0, 0.25, 0}};
  const DyadicDecomposition q =
      dyadic_partition(quarter, 1.0, square_witness(), 1);
  CHECK(q.classes.count(3) == 1);

  BallFamily too_big;
  too_big.balls = {{0, 1.5, 0}};
  CHECK_THROWS_AS(dyadic_partition(too_big, 1.0, square_witness(), 1),
                  ConfigError);
}

TEST_CASE("dyadic classes partition every family") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const PointSet points = sample(unit_square(), 150, rng.next_u64());
    const auto nn = nearest_neighbor_tour(points, 0);
    const BallFamily family = extract_ball_family(nn.trace);
    const DyadicDecomposition decomp = dyadic_partition(
        family, unit_square().diameter(), square_witness(), points.size());
    std::size_t total = 0;
    for (const auto& [klass, members] : decomp.classes) {
      total += members.size();
      for (const auto idx : members) {
        const double t = family.balls[idx].radius / decomp.diam;
        CHECK(t > std::ldexp(1.0, -klass));
        CHECK(t <= std::ldexp(1.0, -klass + 1));
      }
    }
    CHECK(total == family.balls.size());
  }
}

TEST_CASE("k0 is the smallest capacity reaching n") {
  const RegularityWitness witness = square_witness();
  BallFamily family;
  family.balls = {{0, 0.5, 0}};
  const DyadicDecomposition decomp =
      dyadic_partition(family, std::sqrt(2.0), witness, 1000);
  const double c_pack = decomp.c_pack;
  CHECK(c_pack * std::pow(2.0, decomp.k0 * witness.d) >= 1000.0);
  if (decomp.k0 > 0)
    CHECK(c_pack * std::pow(2.0, (decomp.k0 - 1) * witness.d) < 1000.0);
}

TEST_CASE("packing on the square corners family") {
  const auto nn = nearest_neighbor_tour(square_corners(), 0);
  const BallFamily family = extract_ball_family(nn.trace);
  const DyadicDecomposition decomp = dyadic_partition(
      family, unit_square().diameter(), square_witness(), 4);
  const PackingReport report =
      check_packing(decomp, family, square_corners(), square_witness());
  CHECK(report.disjointness_violations.empty());
}

TEST_CASE("packing flags two identical balls in one class") {
  const PointSet points(unit_square(), {0.4, 0.5, 0.45, 0.5}, std::nullopt);
  BallFamily family;
  family.balls = {{0, 0.6, 0}, {1, 0.6, 1}};
  const DyadicDecomposition decomp =
      dyadic_partition(family, 1.0, square_witness(), 2);
  const PackingReport report =
      check_packing(decomp, family, points, square_witness());
  CHECK(report.disjointness_violations.size() == 1);
  CHECK_FALSE(report.passed());
}

TEST_CASE("packing holds on random NN families") {
  Rng rng(17);
  SpaceConfig gasket = sierpinski_gasket_config();
  const SpaceSpec spaces[] = {unit_square(), SpaceSpec::make(gasket)};
  for (const auto& spec : spaces) {
    const RegularityWitness witness = default_witness(spec, 2000, 5);
    for (int trial = 0; trial < 50; ++trial) {
      const PointSet points = sample(spec, 100, rng.next_u64());
      const auto nn = nearest_neighbor_tour(points, 0);
      const BallFamily family = extract_ball_family(nn.trace);
      const DyadicDecomposition decomp =
          dyadic_partition(family, spec.diameter(), witness, points.size());
      const PackingReport report =
          check_packing(decomp, family, points, witness);
      CHECK(report.disjointness_violations.empty());
    }
  }
}

TEST_CASE("bound chain is exact for NN traces") {
  // Square corners: L = 4 = 3 radii + closing edge 1.
  {
    const auto nn = nearest_neighbor_tour(square_corners(), 0);
    const BallFamily family = extract_ball_family(nn.trace);
    const DyadicDecomposition decomp = dyadic_partition(
        family, unit_square().diameter(), square_witness(), 4);
    const BoundChainReport report =
        bound_chain(family, nn.tour, square_corners(), decomp);
    CHECK(report.holds);
    CHECK(report.radius_sum == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(report.closing_edge == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.slack == doctest::Approx(0.0).epsilon(1e-12));
  }
  // Collinear 0,1,3,7: L = 14/7, radii 7/7, closing 7/7.
  {
    const auto nn = nearest_neighbor_tour(collinear_0137(), 0);
    const BallFamily family = extract_ball_family(nn.trace);
    const DyadicDecomposition decomp = dyadic_partition(
        family, unit_square().diameter(), square_witness(), 4);
    const BoundChainReport report =
        bound_chain(family, nn.tour, collinear_0137(), decomp);
    CHECK(report.holds);
    CHECK(report.radius_sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.closing_edge == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.tour_length == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("bound chain holds on random instances for both heuristics") {
  Rng rng(23);
  const RegularityWitness witness = square_witness();
  for (int trial = 0; trial < 50; ++trial) {
    const PointSet points = sample(unit_square(), 120, rng.next_u64());
    const auto nn = nearest_neighbor_tour(points, 0);
    const BallFamily nn_family = extract_ball_family(nn.trace);
    const DyadicDecomposition nn_decomp = dyadic_partition(
        nn_family, unit_square().diameter(), witness, points.size());
    const BoundChainReport nn_report =
        bound_chain(nn_family, nn.tour, points, nn_decomp);
    CHECK(nn_report.holds);
    CHECK(std::abs(nn_report.slack) < 1e-9);  // exact for NN

    const auto greedy = greedy_tour(points);
    const BallFamily g_family = extract_ball_family(greedy.trace);
    const DyadicDecomposition g_decomp = dyadic_partition(
        g_family, unit_square().diameter(), witness, points.size());
    const BoundChainReport g_report =
        bound_chain(g_family, greedy.tour, points, g_decomp);
    CHECK(g_report.holds);
  }
}

TEST_CASE("bound chain rejects mismatched inputs") {
  const auto nn = nearest_neighbor_tour(square_corners(), 0);
  const auto greedy = greedy_tour(square_corners());
  const BallFamily family = extract_ball_family(nn.trace);
  const DyadicDecomposition decomp = dyadic_partition(
      family, unit_square().diameter(), square_witness(), 4);
  CHECK_THROWS_AS(
      bound_chain(family, greedy.tour, square_corners(), decomp),
      ConfigError);
}

TEST_CASE("isolation statistic on hand instances") {
  const RegularityWitness witness = square_witness();
  // Two far-apart points: both isolated at any r below their distance.
  const PointSet two(unit_square(), {0.0, 0.0, 1.0, 1.0}, std::nullopt);
  const IsolationStats stats = isolation_stats(two, witness);
  CHECK(stats.r <= 1.414);
  CHECK(stats.z == 2);
  CHECK(stats.lower_bound == doctest::Approx(2.0 * stats.r));

  const PointSet lone(unit_square(), {0.5, 0.5}, std::nullopt);
  CHECK(isolation_stats(lone, witness).z == 1);

  // Duplicates are never isolated.
  const PointSet twins(unit_square(), {0.5, 0.5, 0.5, 0.5, 0.9, 0.9},
                       std::nullopt);
  const IsolationStats twin_stats = isolation_stats(twins, witness);
  CHECK(twin_stats.z == 1);
}

TEST_CASE("mean isolated fraction clears the e^-1 bound") {
  // D = pi, r = (1/(pi n))^(1/2); the indicator mean must be >= 1/3 in
  // expectation, checked as a 50-trial average.
  const RegularityWitness witness = square_witness();
  double fraction_sum = 0.0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    const PointSet points = sample(unit_square(), 1000, 1000 + trial);
    const IsolationStats stats = isolation_stats(points, witness);
    fraction_sum += static_cast<double>(stats.z) / 1000.0;
  }
  CHECK(fraction_sum / trials >= 0.33);
}

TEST_CASE("lower bound accounting against exact tours") {
  Rng rng(31);
  const RegularityWitness witness = square_witness();
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.next_below(12);
    const PointSet points = sample(unit_square(), n, rng.next_u64());
    const IsolationStats stats = isolation_stats(points, witness);
    const Tour opt = exact_tour_dp(points);
    const LowerBoundReport report = verify_lower_bound(points, stats, opt);
    CHECK(report.holds);
    // Heuristics satisfy it a fortiori.
    const auto nn = nearest_neighbor_tour(points, 0);
    CHECK(verify_lower_bound(points, stats, nn.tour).holds);
  }
}

TEST_CASE("fit_exponent recovers noiseless power laws") {
  std::vector<std::pair<double, double>> sqrt_data;
  for (const double n : {100.0, 200.0, 400.0, 800.0})
    sqrt_data.emplace_back(n, std::sqrt(n));
  const FitResult fit = fit_exponent(sqrt_data);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.slope_stderr == doctest::Approx(0.0).epsilon(1e-10));

  std::vector<std::pair<double, double>> linear_data;
  for (const double n : {10.0, 100.0, 1000.0})
    linear_data.emplace_back(n, 3.0 * n);
  const FitResult linear = fit_exponent(linear_data);
  CHECK(linear.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(linear.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("fit_exponent input validation") {
  std::vector<std::pair<double, double>> two = {{10.0, 1.0}, {20.0, 2.0}};
  CHECK_THROWS_AS(fit_exponent(two), ConfigError);
  std::vector<std::pair<double, double>> repeated = {
      {10.0, 1.0}, {10.0, 2.0}, {10.0, 3.0}};
  CHECK_THROWS_AS(fit_exponent(repeated), ConfigError);
  std::vector<std::pair<double, double>> negative = {
      {10.0, 1.0}, {20.0, -2.0}, {30.0, 3.0}};
  CHECK_THROWS_AS(fit_exponent(negative), ConfigError);
}

TEST_CASE("nn length scaling trend is monotone in n on average") {
  // Expected NN length grows with n; checked as a trend across the grid,
  // not per-sample.
  const SpaceSpec square = unit_square();
  double prev_mean = 0.0;
  for (const std::size_t n : {64, 256, 1024}) {
    double mean = 0.0;
    for (int trial = 0; trial < 10; ++trial)
      mean += nearest_neighbor_tour(
                  sample(square, n, mix_seed(777, n, trial)), 0)
                  .tour.length;
    mean /= 10.0;
    CHECK(mean > prev_mean);
    prev_mean = mean;
  }
}
