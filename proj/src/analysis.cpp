#include "regtsp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regtsp/errors.hpp"

namespace regtsp {

BallFamily extract_ball_family(const SelectionTrace& trace) {
  if (trace.steps.empty())
    throw ConfigError("extract_ball_family: empty trace");

  BallFamily family;
  family.source = trace.source;
  for (std::size_t step = 0; step < trace.steps.size(); ++step) {
    const auto& s = trace.steps[step];
    // The greedy closing edge is not a selection-time ball; its length is
    // bounded by earlier radii only through the final tour accounting.
    if (trace.source == SolverTag::Greedy && step + 1 == trace.steps.size()) {
      family.closing_edge = s.radius;
      continue;
    }
    if (s.radius <= 0.0) {
      ++family.dropped_zero_radius;
      continue;
    }
    const auto origin = static_cast<std::int32_t>(step);
    if (trace.source == SolverTag::Greedy) {
      family.balls.push_back({s.center, s.radius, origin});
      family.balls.push_back({s.partner, s.radius, origin});
    } else {
      family.balls.push_back({s.center, s.radius, origin});
    }
  }
  return family;
}

StarReport check_star_property(const BallFamily& family,
                               const PointSet& points) {
  StarReport report;
  const auto& balls = family.balls;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      ++report.pairs_checked;
      if (balls[i].center == balls[j].center) continue;  // greedy shares endpoints
      const double dist = points.dist(balls[i].center, balls[j].center);
      // Balls are open: the earlier ball misses the later center iff
      // dist >= r_earlier.
      if (dist < balls[i].radius) {
        report.ordered_violations.push_back({static_cast<std::int32_t>(i),
                                             static_cast<std::int32_t>(j),
                                             dist, balls[i].radius});
      }
      const double min_radius = std::min(balls[i].radius, balls[j].radius);
      if (dist < min_radius) {
        report.min_violations.push_back({static_cast<std::int32_t>(i),
                                         static_cast<std::int32_t>(j), dist,
                                         min_radius});
      }
    }
  }
  return report;
}

double packing_constant(const RegularityWitness& witness, double diam) {
  if (!(witness.c_lower > 0.0))
    throw ConfigError("packing_constant: witness c_lower must be positive");
  return std::pow(2.0, witness.d) /
         (witness.c_lower * std::pow(diam, witness.d));
}

namespace {

// Class index j >= 1 with radius/diam in (2^-j, 2^-j+1]; exact half-open
// interval membership via ldexp comparisons.
int dyadic_class(double radius, double diam) {
  const double t = radius / diam;
  if (!(t > 0.0) || t > 1.0)
    throw ConfigError("dyadic_class: radius outside (0, diam]");
  int j = static_cast<int>(std::floor(-std::log2(t))) + 1;
  if (j < 1) j = 1;
  while (t <= std::ldexp(1.0, -j)) ++j;
  while (j > 1 && t > std::ldexp(1.0, -j + 1)) --j;
  return j;
}

}  // namespace

DyadicDecomposition dyadic_partition(const BallFamily& family, double diam,
                                     const RegularityWitness& witness,
                                     std::size_t n) {
  DyadicDecomposition decomp;
  decomp.diam = diam;
  decomp.d = witness.d;
  decomp.n = n;
  decomp.c_pack = packing_constant(witness, diam);
  for (std::size_t i = 0; i < family.balls.size(); ++i) {
    const int j = dyadic_class(family.balls[i].radius, diam);
    decomp.classes[j].push_back(static_cast<std::int32_t>(i));
  }
  // Smallest k whose capacity c_pack * 2^(k d) reaches n.
  int k0 = 0;
  while (decomp.c_pack * std::pow(2.0, k0 * witness.d) <
         static_cast<double>(n)) {
    ++k0;
    if (k0 > 4096) throw ConfigError("dyadic_partition: k0 diverged");
  }
  decomp.k0 = k0;
  return decomp;
}

PackingReport check_packing(const DyadicDecomposition& decomp,
                            const BallFamily& family, const PointSet& points,
                            const RegularityWitness& witness) {
  PackingReport report;
  for (const auto& [klass, members] : decomp.classes) {
    // Shrinking every class-j ball to the uniform radius 2^-(j+1)*diam makes
    // them disjoint exactly when centers are 2^-j*diam apart; that is what
    // property (*) plus the class's lower radius edge guarantees.
    const double required = std::ldexp(decomp.diam, -klass);
    ClassStat stat;
    stat.klass = klass;
    stat.count = members.size();
    stat.capacity_bound = decomp.c_pack * std::pow(2.0, klass * witness.d);
    stat.envelope =
        decomp.c_pack * std::pow(2.0, klass * (witness.d - 1.0)) * decomp.diam;
    for (std::size_t a = 0; a < members.size(); ++a) {
      const Ball& ball_a = family.balls[members[a]];
      stat.radius_sum += ball_a.radius;
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const Ball& ball_b = family.balls[members[b]];
        if (ball_a.center == ball_b.center) continue;
        const double dist = points.dist(ball_a.center, ball_b.center);
        if (dist < required) {
          report.disjointness_violations.push_back(
              {klass, members[a], members[b], dist, required});
        }
        if (dist < (ball_a.radius + ball_b.radius) / 2.0)
          ++report.own_half_radius_overlaps;
      }
    }
    if (static_cast<double>(stat.count) > stat.capacity_bound)
      ++report.capacity_exceeded_classes;
    report.class_stats.push_back(stat);
  }
  return report;
}

BoundChainReport bound_chain(const BallFamily& family, const Tour& tour,
                             const PointSet& points,
                             const DyadicDecomposition& decomp) {
  if (family.source != tour.solver)
    throw ConfigError("bound_chain: family and tour come from different solvers");
  const std::size_t n = tour.order.size();
  const std::size_t expected =
      family.source == SolverTag::Greedy ? 2 * (n - 1) : n - 1;
  if (family.balls.size() +
          static_cast<std::size_t>(family.dropped_zero_radius) *
              (family.source == SolverTag::Greedy ? 2u : 1u) !=
      expected)
    throw ConfigError("bound_chain: family does not match the tour size");

  BoundChainReport report;
  report.tour_length = tour.length;
  for (const Ball& ball : family.balls) report.radius_sum += ball.radius;
  // Greedy balls come in pairs per edge; fold them back to one radius per
  // edge so the accounting is L = sum of edge radii + closing edge for both
  // heuristics. The greedy closing edge is the final accepted edge (kept on
  // the family); the nearest-neighbor one is the tour's wrap-around edge.
  if (family.source == SolverTag::Greedy) {
    report.radius_sum /= 2.0;
    report.closing_edge = std::max(family.closing_edge, 0.0);
  } else {
    report.closing_edge = points.dist(tour.order.back(), tour.order.front());
  }
  report.slack = report.radius_sum + report.closing_edge - report.tour_length;
  report.holds = report.tour_length <=
                 report.radius_sum + report.closing_edge + 1e-9;

  report.class_stats.reserve(decomp.classes.size());
  for (const auto& [klass, members] : decomp.classes) {
    ClassStat stat;
    stat.klass = klass;
    stat.count = members.size();
    stat.capacity_bound = decomp.c_pack * std::pow(2.0, klass * decomp.d);
    stat.envelope = decomp.c_pack *
                    std::pow(2.0, klass * (decomp.d - 1.0)) * decomp.diam;
    for (auto idx : members) stat.radius_sum += family.balls[idx].radius;
    if (klass > decomp.k0) report.tail_radius_sum += stat.radius_sum;
    report.class_stats.push_back(stat);
  }
  return report;
}

IsolationStats isolation_stats(const PointSet& points,
                               const RegularityWitness& witness) {
  if (!(witness.d_upper > 0.0) || !(witness.d > 0.0))
    throw ConfigError("isolation_stats: witness needs positive d and d_upper");
  const auto n = points.size();

  IsolationStats stats;
  stats.r = std::pow(1.0 / (witness.d_upper * static_cast<double>(n)),
                     1.0 / witness.d);
  stats.isolated.assign(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!stats.isolated[i] && !stats.isolated[j]) continue;
      if (points.dist(i, j) < stats.r) {
        stats.isolated[i] = false;
        stats.isolated[j] = false;
      }
    }
  }
  stats.z = std::count(stats.isolated.begin(), stats.isolated.end(), true);
  stats.lower_bound = static_cast<double>(stats.z) * stats.r;
  return stats;
}

LowerBoundReport verify_lower_bound(const PointSet& points,
                                    const IsolationStats& stats,
                                    const Tour& tour) {
  if (tour.order.size() != points.size())
    throw ConfigError("verify_lower_bound: tour does not match point set");
  LowerBoundReport report;
  report.tour_length = tour.length;
  report.lower_bound = stats.lower_bound;
  report.holds = tour.length >= stats.lower_bound - 1e-9;
  const double d = points.space().similarity_dimension();
  report.empirical_constant =
      tour.length /
      std::pow(static_cast<double>(points.size()), 1.0 - 1.0 / d);
  return report;
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& records) {
  std::vector<double> xs, ys;
  double last_x = std::numeric_limits<double>::quiet_NaN();
  std::size_t distinct = 0;
  for (const auto& [n, length] : records) {
    if (!(n > 0.0) || !(length > 0.0))
      throw ConfigError("fit_exponent: n and length must be positive");
    xs.push_back(std::log(n));
    ys.push_back(std::log(length));
  }
  std::vector<double> sorted_x = xs;
  std::sort(sorted_x.begin(), sorted_x.end());
  for (double x : sorted_x) {
    if (x != last_x) {
      ++distinct;
      last_x = x;
    }
  }
  if (distinct < 3)
    throw ConfigError("fit_exponent: need at least 3 distinct n values");

  const auto m = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= m;
  mean_y /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }

  FitResult fit;
  fit.n_points = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += resid * resid;
  }
  if (xs.size() > 2)
    fit.slope_stderr =
        std::sqrt(ss_res / (m - 2.0) / sxx);
  return fit;
}

}  // namespace regtsp
