#pragma once

#include <cstdint>
#include <vector>

#include "regtsp/solvers.hpp"
#include "regtsp/space.hpp"

namespace regtsp {

struct AdversarialResult {
  PointSet points;
  double ratio_nn = 0.0;      // worst start vertex
  double ratio_greedy = 0.0;
  double opt_length = 0.0;    // exact_tour_dp
  double opt_vs_random_scale = 0.0;  // opt_length / n^(1 - 1/d)
  std::int64_t accepted_steps = 0;
  // Incumbent ratio after each accepted step; nondecreasing by construction.
  std::vector<double> incumbent_history;
};

struct AdversarialOptions {
  int restarts = 4;
  double step_frac = 0.05;      // gaussian step as a fraction of the diameter
  int shrink_after = 50;        // halve the step after this many rejections
  double min_step_frac = 1e-4;
};

// Hill-climbing over single-point perturbations, maximizing the
// worst-start nearest-neighbor ratio against the exact tour. Restarts are
// independent; the best instance across restarts is returned. n in [6, 14].
AdversarialResult adversarial_search(const SpaceSpec& spec, std::size_t n,
                                     std::int64_t iterations,
                                     std::uint64_t seed,
                                     const AdversarialOptions& opts = {});

// Worst-start NN ratio and greedy ratio for one instance.
double nn_ratio_all_starts(const PointSet& points, double opt_length);

struct RatioRecord {
  std::size_t n = 0;
  double ratio_nn = 0.0;
  double ratio_greedy = 0.0;
  double opt_scale = 0.0;
  bool exact = true;  // false above the exact range: 2-opt proxy denominator
};

// Tabulates heuristic/optimal ratios over a grid of sizes. Above the exact
// range the denominator is the 2-opt-polished NN tour, flagged exact=false.
std::vector<RatioRecord> ratio_profile(const SpaceSpec& spec,
                                       const std::vector<std::size_t>& n_grid,
                                       int trials, std::uint64_t seed);

// Metric projection used by the perturber: clamp (cube), wrap (torus), or
// greedy address descent onto the attractor (ifs).
std::vector<double> project_to_space(const SpaceSpec& spec,
                                     std::span<const double> p);

}  // namespace regtsp
