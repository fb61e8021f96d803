#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regtsp/space.hpp"

namespace regtsp {

enum class SolverTag { NearestNeighbor, Greedy, ExactDp, BruteForce, TwoOpt };

std::string to_string(SolverTag tag);
SolverTag solver_tag_from_string(const std::string& s);

// Tie rules are fixed choices, surfaced as parameters so a record can state
// the rule it ran under.
enum class NnTieRule { LowestIndex };
enum class GreedyTieRule { LengthThenLex };

// Cyclic visiting order; length includes the closing edge.
struct Tour {
  std::vector<std::int32_t> order;
  double length = 0.0;
  SolverTag solver = SolverTag::NearestNeighbor;

  std::size_t size() const { return order.size(); }
};

// One selection event. Nearest-neighbor: (current point, chosen next point,
// step distance). Greedy: the endpoints of the k-th accepted edge (center <
// partner) and its length.
struct TraceStep {
  std::int32_t center = 0;
  std::int32_t partner = 0;
  double radius = 0.0;
};

struct SelectionTrace {
  SolverTag source = SolverTag::NearestNeighbor;
  std::vector<TraceStep> steps;
  // Greedy diagnostic: set if the single sorted pass ended with n-1 edges and
  // the cycle had to be closed explicitly. Expected never; reported, not
  // repaired silently.
  bool fallback_close = false;
};

struct HeuristicResult {
  Tour tour;
  SelectionTrace trace;
};

double tour_length(const PointSet& points, std::span<const std::int32_t> order);

// Grows a path from `start`, always moving to the closest unvisited point,
// ties broken by lowest point index; closes the cycle at the end. n >= 2.
HeuristicResult nearest_neighbor_tour(const PointSet& points, int start = 0,
                                      NnTieRule tie = NnTieRule::LowestIndex);

// Scans all n(n-1)/2 edges in (length, endpoint-pair) order, accepting an
// edge iff both endpoints have degree < 2 and it does not close a premature
// cycle; the n-th accepted edge closes the Hamiltonian cycle. n >= 3.
HeuristicResult greedy_tour(const PointSet& points,
                            GreedyTieRule tie = GreedyTieRule::LengthThenLex);

// Held-Karp subset dynamic programming; optimal. 3 <= n <= 20.
Tour exact_tour_dp(const PointSet& points);

// Enumerates all (n-1)!/2 distinct cycles; independent optimality oracle.
// 3 <= n <= 10.
Tour brute_force_tour(const PointSet& points);

// First-improvement 2-opt passes until a local optimum or max_passes.
Tour two_opt_improve(const PointSet& points, const Tour& tour,
                     int max_passes = 64);

}  // namespace regtsp
