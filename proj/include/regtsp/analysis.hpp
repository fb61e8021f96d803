#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "regtsp/solvers.hpp"
#include "regtsp/space.hpp"

namespace regtsp {

struct Ball {
  std::int32_t center = 0;  // point index
  double radius = 0.0;
  std::int32_t origin_step = 0;  // selection step the ball came from
};

// Balls read off a heuristic trace: nearest-neighbor contributes one ball per
// step (center = step point, radius = step distance); greedy contributes two
// balls per accepted non-closing edge, one per endpoint.
struct BallFamily {
  SolverTag source = SolverTag::NearestNeighbor;
  std::vector<Ball> balls;
  int dropped_zero_radius = 0;  // duplicate-point steps, omitted
  // Greedy only: length of the cycle-closing accepted edge (the final trace
  // step, which contributes no ball). Negative for nearest-neighbor, whose
  // closing edge is read off the tour instead.
  double closing_edge = -1.0;
};

BallFamily extract_ball_family(const SelectionTrace& trace);

// Ordering property of heuristic ball families: the earlier ball of any pair
// does not contain the later ball's center (open balls, so >= is the pass
// condition).
struct StarViolation {
  std::int32_t earlier = 0;  // ball indices within the family
  std::int32_t later = 0;
  double center_dist = 0.0;
  double required = 0.0;
};

struct StarReport {
  std::size_t pairs_checked = 0;
  // dist(c_i, c_j) < r_i with i earlier: the selection-order form.
  std::vector<StarViolation> ordered_violations;
  // dist(c_i, c_j) < min(r_i, r_j): the weaker consequence the packing
  // argument consumes.
  std::vector<StarViolation> min_violations;

  bool passed() const {
    return ordered_violations.empty() && min_violations.empty();
  }
};

StarReport check_star_property(const BallFamily& family,
                               const PointSet& points);

// Balls bucketed by normalized radius: class j holds radius/diam in
// (2^-j, 2^-j+1]. k0 is the smallest k whose packing capacity
// c_pack * 2^(k d) reaches n.
struct DyadicDecomposition {
  std::map<int, std::vector<std::int32_t>> classes;  // class j -> ball indices
  double diam = 0.0;
  double d = 0.0;       // witness dimension the capacities were computed at
  double c_pack = 0.0;
  int k0 = 0;
  std::size_t n = 0;
};

// Capacity constant from the witness: a class-j ball, shrunk to the uniform
// radius 2^-(j+1)*diam, has measure >= c_lower*(2^-(j+1)*diam)^d, and the
// shrunk balls are disjoint, so |class j| <= c_pack * 2^(j d) with
// c_pack = 2^d / (c_lower * diam^d).
double packing_constant(const RegularityWitness& witness, double diam);

DyadicDecomposition dyadic_partition(const BallFamily& family, double diam,
                                     const RegularityWitness& witness,
                                     std::size_t n);

struct PackingViolation {
  int klass = 0;
  std::int32_t ball_a = 0;
  std::int32_t ball_b = 0;
  double center_dist = 0.0;
  double required = 0.0;
};

struct ClassStat {
  int klass = 0;
  std::size_t count = 0;
  double capacity_bound = 0.0;  // c_pack * 2^(k d); reported, not asserted
  double radius_sum = 0.0;
  double envelope = 0.0;  // c_pack * 2^(k(d-1)) * diam
};

struct PackingReport {
  // Pairs in the same class closer than 2^-j * diam, i.e. whose balls at the
  // uniform shrunk radius 2^-(j+1)*diam intersect. Property (*) plus class
  // membership forces this list to be empty.
  std::vector<PackingViolation> disjointness_violations;
  // Pairs closer than the sum of their own half-radii. The half-scaled balls
  // of consecutive steps can legitimately touch (center distance equals the
  // earlier radius), so this is a diagnostic count, not an invariant.
  std::size_t own_half_radius_overlaps = 0;
  std::vector<ClassStat> class_stats;
  std::size_t capacity_exceeded_classes = 0;

  bool passed() const { return disjointness_violations.empty(); }
};

PackingReport check_packing(const DyadicDecomposition& decomp,
                            const BallFamily& family, const PointSet& points,
                            const RegularityWitness& witness);

// The tour-length accounting: L <= sum of radii + closing edge, with one
// radius per selection step (greedy's per-endpoint ball pairs fold back to
// one radius per edge). Exact up to rounding for both heuristics.
struct BoundChainReport {
  double tour_length = 0.0;
  double radius_sum = 0.0;
  double closing_edge = 0.0;
  double slack = 0.0;  // radius_sum + closing_edge - tour_length
  bool holds = false;
  std::vector<ClassStat> class_stats;
  double tail_radius_sum = 0.0;  // classes beyond k0
};

BoundChainReport bound_chain(const BallFamily& family, const Tour& tour,
                             const PointSet& points,
                             const DyadicDecomposition& decomp);

// Points isolated at the probe radius r = (1/(D n))^(1/d); any tour must
// pay length at least z*r (two incident edges >= r per isolated point, each
// edge shared by at most two of them).
struct IsolationStats {
  double r = 0.0;
  std::int64_t z = 0;
  std::vector<bool> isolated;
  double lower_bound = 0.0;
};

IsolationStats isolation_stats(const PointSet& points,
                               const RegularityWitness& witness);

struct LowerBoundReport {
  double tour_length = 0.0;
  double lower_bound = 0.0;
  bool holds = false;
  double empirical_constant = 0.0;  // length / n^(1 - 1/d)
};

LowerBoundReport verify_lower_bound(const PointSet& points,
                                    const IsolationStats& stats,
                                    const Tour& tour);

// OLS fit of log(length) on log(n).
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t n_points = 0;
};

FitResult fit_exponent(const std::vector<std::pair<double, double>>& records);

}  // namespace regtsp
