#include "regtsp/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regtsp/errors.hpp"
#include "regtsp/rng.hpp"

namespace regtsp {

std::vector<double> project_to_space(const SpaceSpec& spec,
                                     std::span<const double> p) {
  std::vector<double> out(p.begin(), p.end());
  switch (spec.kind()) {
    case SpaceKind::UnitCube:
      for (double& v : out) v = std::clamp(v, 0.0, 1.0);
      return out;
    case SpaceKind::FlatTorus:
      for (double& v : out) {
        v = v - std::floor(v);
        if (v >= 1.0) v = 0.0;  // guard against -1e-17 wrapping to 1.0
      }
      return out;
    case SpaceKind::IfsAttractor:
      break;
  }
  // Greedy address descent: at each level pick the map whose subpiece center
  // is closest, then pull the target back through that map. Approximate
  // metric projection, deterministic.
  const auto& maps = spec.maps();
  const auto dim = static_cast<std::size_t>(spec.ambient_dim());
  std::vector<double> center(dim, 0.0);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto fp = spec.ifs_fixed_point(i);
    for (std::size_t k = 0; k < dim; ++k) center[k] += fp[k];
  }
  for (double& v : center) v /= static_cast<double>(maps.size());

  std::vector<std::size_t> address;
  std::vector<double> target = out;
  std::vector<double> image(dim);
  for (int level = 0; level < spec.address_depth(); ++level) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < maps.size(); ++i) {
      for (std::size_t k = 0; k < dim; ++k)
        image[k] = maps[i].ratio * center[k] + maps[i].translation[k];
      const double d = spec.distance(target, image);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    address.push_back(best);
    // Pull the target into the chosen subpiece's frame.
    for (std::size_t k = 0; k < dim; ++k)
      target[k] = (target[k] - maps[best].translation[k]) / maps[best].ratio;
  }
  std::vector<double> projected = spec.ifs_fixed_point(address.back());
  for (std::size_t level = address.size(); level-- > 0;) {
    const auto& map = maps[address[level]];
    for (std::size_t k = 0; k < dim; ++k)
      projected[k] = map.ratio * projected[k] + map.translation[k];
  }
  return projected;
}

double nn_ratio_all_starts(const PointSet& points, double opt_length) {
  double worst = 0.0;
  for (std::size_t start = 0; start < points.size(); ++start) {
    const auto result =
        nearest_neighbor_tour(points, static_cast<int>(start));
    worst = std::max(worst, result.tour.length);
  }
  return opt_length > 0.0 ? worst / opt_length : 1.0;
}

namespace {

double greedy_ratio(const PointSet& points, double opt_length) {
  const auto result = greedy_tour(points);
  return opt_length > 0.0 ? result.tour.length / opt_length : 1.0;
}

}  // namespace

AdversarialResult adversarial_search(const SpaceSpec& spec, std::size_t n,
                                     std::int64_t iterations,
                                     std::uint64_t seed,
                                     const AdversarialOptions& opts) {
  if (n < 6 || n > 14)
    throw ConfigError("adversarial_search: n must lie in [6, 14], got " +
                      std::to_string(n));
  if (iterations < 1)
    throw ConfigError("adversarial_search: iterations must be positive");
  const int restarts = std::max(1, opts.restarts);
  const std::int64_t per_restart =
      std::max<std::int64_t>(1, iterations / restarts);

  std::optional<PointSet> best_points;
  double best_ratio = -1.0;
  std::int64_t total_accepted = 0;
  std::vector<double> incumbent_history;

  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng(mix_seed(seed, 0xadu, static_cast<std::uint64_t>(restart)));
    PointSet current = sample(spec, n, mix_seed(seed, 0x5eedu, restart));
    double current_ratio =
        nn_ratio_all_starts(current, exact_tour_dp(current).length);
    if (current_ratio > best_ratio) {
      best_ratio = current_ratio;
      best_points = current;
    }

    double step = opts.step_frac * spec.diameter();
    int rejections = 0;
    const auto dim = static_cast<std::size_t>(spec.ambient_dim());
    std::vector<double> candidate(dim);
    for (std::int64_t it = 0; it < per_restart; ++it) {
      const std::size_t idx = rng.next_below(static_cast<std::uint32_t>(n));
      const auto old_point = current.point(idx);
      for (std::size_t k = 0; k < dim; ++k)
        candidate[k] = old_point[k] + step * rng.next_gaussian();
      const auto projected = project_to_space(spec, candidate);
      PointSet proposal = current.with_point(idx, projected);
      const double proposal_ratio =
          nn_ratio_all_starts(proposal, exact_tour_dp(proposal).length);
      if (proposal_ratio > current_ratio) {
        current = std::move(proposal);
        current_ratio = proposal_ratio;
        ++total_accepted;
        rejections = 0;
        if (current_ratio > best_ratio) {
          best_ratio = current_ratio;
          best_points = current;
        }
        incumbent_history.push_back(best_ratio);
      } else if (++rejections >= opts.shrink_after) {
        step = std::max(step / 2.0, opts.min_step_frac * spec.diameter());
        rejections = 0;
      }
    }
  }

  // Recompute everything from scratch on the winning instance; no cached
  // lengths leave this function.
  AdversarialResult result{*best_points};
  const Tour opt = exact_tour_dp(*best_points);
  result.opt_length = opt.length;
  result.ratio_nn = nn_ratio_all_starts(*best_points, opt.length);
  result.ratio_greedy = greedy_ratio(*best_points, opt.length);
  const double d = spec.similarity_dimension();
  result.opt_vs_random_scale =
      opt.length / std::pow(static_cast<double>(n), 1.0 - 1.0 / d);
  result.accepted_steps = total_accepted;
  result.incumbent_history = std::move(incumbent_history);
  return result;
}

std::vector<RatioRecord> ratio_profile(const SpaceSpec& spec,
                                       const std::vector<std::size_t>& n_grid,
                                       int trials, std::uint64_t seed) {
  if (trials < 1) throw ConfigError("ratio_profile: trials must be positive");
  std::vector<RatioRecord> records;
  const double d = spec.similarity_dimension();
  for (const std::size_t n : n_grid) {
    if (n < 3) throw ConfigError("ratio_profile: n must be at least 3");
    for (int trial = 0; trial < trials; ++trial) {
      const PointSet points =
          sample(spec, n, mix_seed(seed, n, static_cast<std::uint64_t>(trial)));
      RatioRecord record;
      record.n = n;
      record.exact = n <= 20;
      double denom;
      if (record.exact) {
        denom = exact_tour_dp(points).length;
      } else {
        // 2-opt polished NN stands in for the optimum above the exact range.
        const auto nn = nearest_neighbor_tour(points, 0);
        denom = two_opt_improve(points, nn.tour).length;
      }
      record.ratio_nn = nn_ratio_all_starts(points, denom);
      record.ratio_greedy = greedy_ratio(points, denom);
      record.opt_scale =
          denom / std::pow(static_cast<double>(n), 1.0 - 1.0 / d);
      records.push_back(record);
    }
  }
  return records;
}

}  // namespace regtsp
