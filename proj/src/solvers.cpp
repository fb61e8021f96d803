#include "regtsp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "regtsp/errors.hpp"

namespace regtsp {

std::string to_string(SolverTag tag) {
  switch (tag) {
    case SolverTag::NearestNeighbor: return "nearest-neighbor";
    case SolverTag::Greedy: return "greedy";
    case SolverTag::ExactDp: return "exact-dp";
    case SolverTag::BruteForce: return "brute-force";
    case SolverTag::TwoOpt: return "two-opt";
  }
  return "?";
}

SolverTag solver_tag_from_string(const std::string& s) {
  if (s == "nearest-neighbor" || s == "nn") return SolverTag::NearestNeighbor;
  if (s == "greedy") return SolverTag::Greedy;
  if (s == "exact-dp" || s == "exact") return SolverTag::ExactDp;
  if (s == "brute-force" || s == "brute") return SolverTag::BruteForce;
  if (s == "two-opt" || s == "2opt") return SolverTag::TwoOpt;
  throw ConfigError("unknown solver: " + s);
}

double tour_length(const PointSet& points,
                   std::span<const std::int32_t> order) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    total += points.dist(order[i], order[i + 1]);
  if (order.size() > 1) total += points.dist(order.back(), order.front());
  return total;
}

HeuristicResult nearest_neighbor_tour(const PointSet& points, int start,
                                      NnTieRule) {
  const auto n = points.size();
  if (n < 2) throw ConfigError("nearest_neighbor_tour: need at least 2 points");
  if (start < 0 || static_cast<std::size_t>(start) >= n)
    throw ConfigError("nearest_neighbor_tour: start index out of range");

  HeuristicResult result;
  result.tour.solver = SolverTag::NearestNeighbor;
  result.trace.source = SolverTag::NearestNeighbor;
  result.tour.order.reserve(n);
  result.trace.steps.reserve(n - 1);

  std::vector<bool> visited(n, false);
  std::int32_t current = start;
  visited[current] = true;
  result.tour.order.push_back(current);
  double length = 0.0;

  for (std::size_t step = 1; step < n; ++step) {
    std::int32_t best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    // Strict < keeps the lowest index on ties.
    for (std::size_t j = 0; j < n; ++j) {
      if (visited[j]) continue;
      const double d = points.dist(current, j);
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<std::int32_t>(j);
      }
    }
    result.trace.steps.push_back({current, best, best_dist});
    visited[best] = true;
    result.tour.order.push_back(best);
    length += best_dist;
    current = best;
  }
  length += points.dist(current, start);
  result.tour.length = length;
  return result;
}

namespace {

struct DisjointSet {
  std::vector<std::int32_t> parent;

  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) { parent[find(a)] = find(b); }
};

struct Edge {
  double length;
  std::uint32_t u, v;  // u < v
};

}  // namespace

HeuristicResult greedy_tour(const PointSet& points, GreedyTieRule) {
  const auto n = points.size();
  if (n < 3) throw ConfigError("greedy_tour: need at least 3 points");

  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      edges.push_back({points.dist(i, j), i, j});
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.length != b.length) return a.length < b.length;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  HeuristicResult result;
  result.tour.solver = SolverTag::Greedy;
  result.trace.source = SolverTag::Greedy;
  result.trace.steps.reserve(n);

  DisjointSet components(n);
  std::vector<int> degree(n, 0);
  std::vector<std::vector<std::int32_t>> adjacent(n);
  std::size_t accepted = 0;
  double length = 0.0;

  auto accept = [&](const Edge& e) {
    result.trace.steps.push_back({static_cast<std::int32_t>(e.u),
                                  static_cast<std::int32_t>(e.v), e.length});
    components.unite(e.u, e.v);
    ++degree[e.u];
    ++degree[e.v];
    adjacent[e.u].push_back(e.v);
    adjacent[e.v].push_back(e.u);
    length += e.length;
    ++accepted;
  };

  for (const Edge& e : edges) {
    if (accepted == n) break;
    if (degree[e.u] >= 2 || degree[e.v] >= 2) continue;
    const bool same_component = components.find(e.u) == components.find(e.v);
    if (same_component && accepted != n - 1) continue;  // premature cycle
    accept(e);
  }

  // A single sorted pass provably reaches n accepted edges (the path-ends
  // edge cannot have been skipped while other components remained), but if
  // that ever failed we close the cycle explicitly and flag it instead of
  // producing a broken tour.
  if (accepted == n - 1) {
    std::uint32_t a = 0, b = 0;
    bool found_a = false;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (degree[i] < 2) {
        (found_a ? b : a) = i;
        found_a = true;
      }
    }
    accept({points.dist(a, b), std::min(a, b), std::max(a, b)});
    result.trace.fallback_close = true;
  }
  if (accepted != n)
    throw ConfigError("greedy_tour: internal failure, accepted " +
                      std::to_string(accepted) + " of " + std::to_string(n));

  // Walk the 2-regular adjacency into a visiting order from point 0.
  result.tour.order.reserve(n);
  std::vector<bool> seen(n, false);
  std::int32_t prev = -1, current = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[current])
      throw ConfigError("greedy_tour: accepted edges do not form one cycle");
    seen[current] = true;
    result.tour.order.push_back(current);
    const auto& nbrs = adjacent[current];
    const std::int32_t next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
    prev = current;
    current = next;
  }
  if (current != 0)
    throw ConfigError("greedy_tour: accepted edges do not form one cycle");
  result.tour.length = length;
  return result;
}

Tour exact_tour_dp(const PointSet& points) {
  const auto n = points.size();
  if (n < 3 || n > 20)
    throw SizeLimitError("exact_tour_dp: n must lie in [3, 20], got " +
                         std::to_string(n));

  // dist matrix keeps the DP cache-friendly.
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = points.dist(i, j);

  const std::size_t full = std::size_t{1} << n;
  const double inf = std::numeric_limits<double>::infinity();
  // dp[mask * n + j]: cheapest path from 0 through `mask`, ending at j.
  std::vector<double> dp(full * n, inf);
  std::vector<std::int8_t> parent(full * n, -1);
  dp[1 * n + 0] = 0.0;

  for (std::size_t mask = 1; mask < full; ++mask) {
    if (!(mask & 1)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double cost = dp[mask * n + j];
      if (cost == inf || !(mask & (std::size_t{1} << j))) continue;
      for (std::size_t k = 1; k < n; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double cand = cost + dist[j * n + k];
        if (cand < dp[next * n + k]) {
          dp[next * n + k] = cand;
          parent[next * n + k] = static_cast<std::int8_t>(j);
        }
      }
    }
  }

  double best = inf;
  std::size_t best_end = 0;
  for (std::size_t j = 1; j < n; ++j) {
    const double cand = dp[(full - 1) * n + j] + dist[j * n + 0];
    if (cand < best) {
      best = cand;
      best_end = j;
    }
  }

  Tour tour;
  tour.solver = SolverTag::ExactDp;
  tour.length = best;
  tour.order.resize(n);
  std::size_t mask = full - 1;
  std::size_t j = best_end;
  for (std::size_t i = n; i-- > 0;) {
    tour.order[i] = static_cast<std::int32_t>(j);
    const auto p = parent[mask * n + j];
    mask &= ~(std::size_t{1} << j);
    if (p < 0) break;
    j = static_cast<std::size_t>(p);
  }
  return tour;
}

Tour brute_force_tour(const PointSet& points) {
  const auto n = points.size();
  if (n < 3 || n > 10)
    throw SizeLimitError("brute_force_tour: n must lie in [3, 10], got " +
                         std::to_string(n));

  std::vector<std::int32_t> perm(n - 1);
  std::iota(perm.begin(), perm.end(), 1);

  Tour best;
  best.solver = SolverTag::BruteForce;
  best.length = std::numeric_limits<double>::infinity();
  std::vector<std::int32_t> order(n);
  order[0] = 0;
  do {
    // Each cycle appears once: fix 0 first and skip the mirror image.
    if (perm.front() > perm.back()) continue;
    std::copy(perm.begin(), perm.end(), order.begin() + 1);
    const double length = tour_length(points, order);
    if (length < best.length) {
      best.length = length;
      best.order = order;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Tour two_opt_improve(const PointSet& points, const Tour& tour,
                     int max_passes) {
  const auto n = tour.order.size();
  if (n != points.size())
    throw ConfigError("two_opt_improve: tour size does not match point set");
  Tour result = tour;
  result.solver = SolverTag::TwoOpt;
  if (n < 4) {
    result.length = tour_length(points, result.order);
    return result;
  }

  auto& order = result.order;
  for (int pass = 0; pass < max_passes; ++pass) {
    bool improved = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        if (i == 0 && k == n - 1) continue;  // same edge pair
        const auto a = order[i == 0 ? n - 1 : i - 1];
        const auto b = order[i];
        const auto c = order[k];
        const auto d = order[(k + 1) % n];
        const double delta = points.dist(a, c) + points.dist(b, d) -
                             points.dist(a, b) - points.dist(c, d);
        if (delta < -1e-12) {
          std::reverse(order.begin() + i, order.begin() + k + 1);
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  result.length = tour_length(points, order);
  // First-improvement never lengthens the tour, but recomputation can round
  // differently; keep the contract exact.
  if (result.length > tour.length) {
    result.order = tour.order;
    result.length = tour.length;
  }
  return result;
}

}  // namespace regtsp
