#include "regtsp/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "regtsp/errors.hpp"
#include "regtsp/rng.hpp"

namespace regtsp {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::UnitCube: return "unit-cube";
    case SpaceKind::FlatTorus: return "flat-torus";
    case SpaceKind::IfsAttractor: return "ifs-attractor";
  }
  return "?";
}

std::string to_string(Metric metric) {
  return metric == Metric::Euclidean ? "euclidean" : "chebyshev";
}

SpaceKind space_kind_from_string(const std::string& s) {
  if (s == "unit-cube") return SpaceKind::UnitCube;
  if (s == "flat-torus") return SpaceKind::FlatTorus;
  if (s == "ifs-attractor") return SpaceKind::IfsAttractor;
  throw ConfigError("unknown space kind: " + s);
}

Metric metric_from_string(const std::string& s) {
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "chebyshev") return Metric::Chebyshev;
  throw ConfigError("unknown metric: " + s);
}

namespace {

double norm(Metric metric, std::span<const double> delta) {
  if (metric == Metric::Chebyshev) {
    double m = 0.0;
    for (double v : delta) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : delta) s += v * v;
  return std::sqrt(s);
}

}  // namespace

SpaceSpec SpaceSpec::make(const SpaceConfig& config) {
  if (config.ambient_dim < 1)
    throw ConfigError("ambient_dim must be at least 1");
  if (config.address_depth < 1)
    throw ConfigError("address_depth must be at least 1");

  double diameter = 0.0;
  switch (config.kind) {
    case SpaceKind::UnitCube:
      if (!config.maps.empty())
        throw ConfigError("ifs maps are only valid for ifs-attractor spaces");
      diameter = config.metric == Metric::Euclidean
                     ? std::sqrt(static_cast<double>(config.ambient_dim))
                     : 1.0;
      break;
    case SpaceKind::FlatTorus:
      if (!config.maps.empty())
        throw ConfigError("ifs maps are only valid for ifs-attractor spaces");
      diameter = config.metric == Metric::Euclidean
                     ? std::sqrt(static_cast<double>(config.ambient_dim)) / 2.0
                     : 0.5;
      break;
    case SpaceKind::IfsAttractor: {
      if (config.maps.size() < 2)
        throw ConfigError("ifs-attractor needs at least 2 maps");
      const double ratio = config.maps.front().ratio;
      for (const auto& map : config.maps) {
        if (!(map.ratio > 0.0 && map.ratio < 1.0))
          throw ConfigError("ifs contraction ratio must lie in (0,1)");
        if (map.ratio != ratio)
          throw ConfigError("ifs maps must share one contraction ratio");
        if (map.translation.size() !=
            static_cast<std::size_t>(config.ambient_dim))
          throw ConfigError("ifs translation dimension mismatch");
      }
      // The attractor sits inside the convex hull of the map fixed points
      // (contractions toward points of the hull preserve it), and the fixed
      // points themselves belong to the attractor, so the diameter is the
      // widest fixed-point pair.
      SpaceSpec probe(config, 0.0);
      for (std::size_t i = 0; i < config.maps.size(); ++i) {
        const auto pi = probe.ifs_fixed_point(i);
        for (std::size_t j = i + 1; j < config.maps.size(); ++j) {
          const auto pj = probe.ifs_fixed_point(j);
          diameter = std::max(diameter, probe.distance(pi, pj));
        }
      }
      if (diameter <= 0.0)
        throw ConfigError("ifs fixed points are all identical");
      break;
    }
  }
  return SpaceSpec(config, diameter);
}

double SpaceSpec::similarity_dimension() const {
  if (config_.kind != SpaceKind::IfsAttractor)
    return static_cast<double>(config_.ambient_dim);
  const double m = static_cast<double>(config_.maps.size());
  const double r = config_.maps.front().ratio;
  return std::log(m) / std::log(1.0 / r);
}

double SpaceSpec::distance(std::span<const double> a,
                           std::span<const double> b) const {
  const auto dim = static_cast<std::size_t>(config_.ambient_dim);
  if (a.size() != dim || b.size() != dim)
    throw ConfigError("distance: point dimension mismatch");
  double buf[8];
  std::vector<double> heap;
  double* delta = dim <= 8 ? buf : (heap.resize(dim), heap.data());
  for (std::size_t k = 0; k < dim; ++k) {
    double d = a[k] - b[k];
    if (config_.kind == SpaceKind::FlatTorus) {
      d = std::abs(d);
      d = std::min(d, 1.0 - d);
    }
    delta[k] = d;
  }
  return norm(config_.metric, {delta, dim});
}

std::vector<double> SpaceSpec::ifs_fixed_point(std::size_t i) const {
  const auto& map = config_.maps.at(i);
  std::vector<double> p(map.translation.size());
  for (std::size_t k = 0; k < p.size(); ++k)
    p[k] = map.translation[k] / (1.0 - map.ratio);
  return p;
}

void SpaceSpec::bounding_box(std::vector<double>& lo,
                             std::vector<double>& hi) const {
  const auto dim = static_cast<std::size_t>(config_.ambient_dim);
  lo.assign(dim, 0.0);
  hi.assign(dim, 1.0);
  if (config_.kind != SpaceKind::IfsAttractor) return;
  lo.assign(dim, std::numeric_limits<double>::infinity());
  hi.assign(dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < config_.maps.size(); ++i) {
    const auto p = ifs_fixed_point(i);
    for (std::size_t k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
}

std::string SpaceSpec::tag() const {
  std::ostringstream out;
  out << to_string(config_.kind) << "-" << config_.ambient_dim;
  if (config_.kind == SpaceKind::IfsAttractor)
    out << "-" << config_.maps.size() << "x" << config_.maps.front().ratio;
  if (config_.metric == Metric::Chebyshev) out << "-chebyshev";
  return out.str();
}

bool SpaceSpec::operator==(const SpaceSpec& other) const {
  if (config_.kind != other.config_.kind ||
      config_.ambient_dim != other.config_.ambient_dim ||
      config_.metric != other.config_.metric ||
      config_.address_depth != other.config_.address_depth ||
      config_.maps.size() != other.config_.maps.size())
    return false;
  for (std::size_t i = 0; i < config_.maps.size(); ++i) {
    if (config_.maps[i].ratio != other.config_.maps[i].ratio ||
        config_.maps[i].translation != other.config_.maps[i].translation)
      return false;
  }
  return true;
}

SpaceConfig sierpinski_gasket_config() {
  // Fixed points at (0,0), (1,0), (1/2, sqrt(3)/2): unit side, diameter 1.
  SpaceConfig config;
  config.kind = SpaceKind::IfsAttractor;
  config.ambient_dim = 2;
  const double r = 0.5;
  const std::vector<std::vector<double>> vertices = {
      {0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
  for (const auto& v : vertices)
    config.maps.push_back({r, {v[0] * (1.0 - r), v[1] * (1.0 - r)}});
  return config;
}

SpaceConfig sierpinski_carpet_config() {
  // Eight maps of ratio 1/3: the unit square minus its middle ninth.
  SpaceConfig config;
  config.kind = SpaceKind::IfsAttractor;
  config.ambient_dim = 2;
  const double r = 1.0 / 3.0;
  for (int iy = 0; iy < 3; ++iy) {
    for (int ix = 0; ix < 3; ++ix) {
      if (ix == 1 && iy == 1) continue;
      const double px = ix * 0.5;  // fixed points on {0, 1/2, 1}^2
      const double py = iy * 0.5;
      config.maps.push_back({r, {px * (1.0 - r), py * (1.0 - r)}});
    }
  }
  return config;
}

PointSet::PointSet(SpaceSpec space, std::vector<double> coords,
                   std::optional<std::uint64_t> seed)
    : space_(std::move(space)),
      dim_(space_.ambient_dim()),
      coords_(std::move(coords)),
      seed_(seed) {
  if (coords_.empty() || coords_.size() % dim_ != 0)
    throw ConfigError("point set size is not a multiple of the dimension");
  std::vector<double> lo, hi;
  space_.bounding_box(lo, hi);
  // Sampled ifs coordinates are convex combinations of the fixed points;
  // allow rounding slack on that box. Cube and torus bounds are exact.
  const double eps =
      space_.kind() == SpaceKind::IfsAttractor ? 1e-9 * space_.diameter() : 0.0;
  const bool half_open = space_.kind() == SpaceKind::FlatTorus;
  const std::size_t n = coords_.size() / dim_;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < dim_; ++k) {
      const double v = coords_[i * dim_ + k];
      const bool below = v < lo[k] - eps;
      const bool above = half_open ? v >= hi[k] : v > hi[k] + eps;
      if (below || above || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "point " << i << " coordinate " << k << " = " << v
            << " lies outside the ambient box of " << space_.tag();
        throw ConfigError(msg.str());
      }
    }
  }
}

PointSet PointSet::with_point(std::size_t i, std::span<const double> p) const {
  std::vector<double> coords = coords_;
  std::copy(p.begin(), p.end(), coords.begin() + i * dim_);
  return PointSet(space_, std::move(coords), std::nullopt);
}

PointSet sample(const SpaceSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample: n must be at least 1");
  const auto dim = static_cast<std::size_t>(spec.ambient_dim());
  std::vector<double> coords;
  coords.reserve(n * dim);
  Rng rng(mix_seed(seed, 0x5a6365u));

  if (spec.kind() != SpaceKind::IfsAttractor) {
    for (std::size_t i = 0; i < n * dim; ++i) coords.push_back(rng.next_double());
    return PointSet(spec, std::move(coords), seed);
  }

  // Chaos-game style draw of one truncated address per point: compose
  // address_depth random maps applied to a fixed base point (the first map's
  // fixed point, which lies on the attractor). Depth-k addresses realize the
  // self-similar measure at resolution ratio^k.
  const auto& maps = spec.maps();
  const auto m = static_cast<std::uint32_t>(maps.size());
  const double ratio = maps.front().ratio;
  const auto base = spec.ifs_fixed_point(0);
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < n; ++i) {
    p = base;
    // Innermost map is applied first, so draw the address then walk it
    // outward; drawing order itself is part of the determinism contract.
    for (int step = 0; step < spec.address_depth(); ++step) {
      const auto& map = maps[rng.next_below(m)];
      for (std::size_t k = 0; k < dim; ++k)
        p[k] = ratio * p[k] + map.translation[k];
    }
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return PointSet(spec, std::move(coords), seed);
}

double empirical_ball_measure(const PointSet& cloud,
                              std::span<const double> center, double r) {
  std::size_t inside = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (cloud.space().distance(center, cloud.point(i)) < r) ++inside;
  return static_cast<double>(inside) / static_cast<double>(cloud.size());
}

RegularityWitness estimate_regularity(const SpaceSpec& spec,
                                      std::size_t n_probe, int n_radii,
                                      std::uint64_t seed,
                                      const RegularityOptions& opts) {
  if (n_probe < 100) throw ConfigError("estimate_regularity: n_probe < 100");
  if (n_radii < 3) throw ConfigError("estimate_regularity: n_radii < 3");

  const PointSet cloud = sample(spec, n_probe, mix_seed(seed, 1));
  const PointSet centers =
      sample(spec, static_cast<std::size_t>(opts.n_centers), mix_seed(seed, 2));

  const double diam = spec.diameter();
  const double r_lo = diam * opts.r_lo_frac;
  const double r_hi = diam * opts.r_hi_frac;
  std::vector<double> log_r, log_mu, radii, measures;
  for (int k = 0; k < n_radii; ++k) {
    const double t = n_radii == 1 ? 0.0
                                  : static_cast<double>(k) /
                                        static_cast<double>(n_radii - 1);
    const double r = r_lo * std::pow(r_hi / r_lo, t);
    double mu = 0.0;
    for (std::size_t c = 0; c < centers.size(); ++c)
      mu += empirical_ball_measure(cloud, centers.point(c), r);
    mu /= static_cast<double>(centers.size());
    radii.push_back(r);
    measures.push_back(mu);
    if (mu > 0.0 && mu < 1.0) {
      log_r.push_back(std::log(r));
      log_mu.push_back(std::log(mu));
    }
  }

  if (log_r.size() < 3) {
    throw ConfigError(
        "estimate_regularity: degenerate regression, all balls empty or "
        "full over the radius grid [" +
        std::to_string(r_lo) + ", " + std::to_string(r_hi) + "]");
  }

  RegularityWitness witness;
  if (opts.pin_exponent) {
    witness.d = *opts.pin_exponent;
  } else {
    const auto m = static_cast<double>(log_r.size());
    const double mean_x = std::accumulate(log_r.begin(), log_r.end(), 0.0) / m;
    const double mean_y =
        std::accumulate(log_mu.begin(), log_mu.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
      sxx += (log_r[i] - mean_x) * (log_r[i] - mean_x);
      sxy += (log_r[i] - mean_x) * (log_mu[i] - mean_y);
    }
    if (sxx == 0.0)
      throw ConfigError(
          "estimate_regularity: degenerate regression, single radius");
    witness.d = sxy / sxx;
  }
  witness.c_lower = std::numeric_limits<double>::infinity();
  witness.d_upper = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (measures[i] <= 0.0) continue;
    const double c = measures[i] / std::pow(radii[i], witness.d);
    witness.c_lower = std::min(witness.c_lower, c);
    witness.d_upper = std::max(witness.d_upper, c);
  }
  return witness;
}

std::optional<RegularityWitness> analytic_witness(const SpaceSpec& spec) {
  if (spec.kind() == SpaceKind::UnitCube && spec.ambient_dim() == 2 &&
      spec.metric() == Metric::Euclidean) {
    // Upper constant pi: any ball meets the square in at most a full disk.
    // Lower constant 1/2: worst case is a corner ball of radius diam.
    return RegularityWitness{2.0, 0.5, std::acos(-1.0)};
  }
  return std::nullopt;
}

RegularityWitness default_witness(const SpaceSpec& spec, std::size_t n_probe,
                                  std::uint64_t seed) {
  if (auto analytic = analytic_witness(spec)) return *analytic;
  // The exponent has a closed form for every shipped space; estimate only
  // the constants against it.
  RegularityOptions opts;
  opts.pin_exponent = spec.similarity_dimension();
  return estimate_regularity(spec, n_probe, 12, seed, opts);
}

}  // namespace regtsp
