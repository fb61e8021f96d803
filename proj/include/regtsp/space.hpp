#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace regtsp {

enum class SpaceKind { UnitCube, FlatTorus, IfsAttractor };
enum class Metric { Euclidean, Chebyshev };

std::string to_string(SpaceKind kind);
std::string to_string(Metric metric);
SpaceKind space_kind_from_string(const std::string& s);
Metric metric_from_string(const std::string& s);

// One similitude x -> ratio*x + translation. Equal-ratio systems only.
struct IfsMap {
  double ratio = 0.0;
  std::vector<double> translation;
};

// User-settable parameters; validated by SpaceSpec::make.
struct SpaceConfig {
  SpaceKind kind = SpaceKind::UnitCube;
  int ambient_dim = 2;
  Metric metric = Metric::Euclidean;
  std::vector<IfsMap> maps;  // ifs-attractor only
  int address_depth = 30;    // ifs sampling truncation depth
};

// Empirical (or analytic) Ahlfors-regularity data: c_lower*r^d <= mu(B(p,r))
// <= d_upper*r^d for 0 < r <= diameter.
struct RegularityWitness {
  double d = 0.0;
  double c_lower = 0.0;
  double d_upper = 0.0;

  // The headline tour bounds require dimension above 1; lower-dimensional
  // spaces are still valid for sampling.
  bool headline_applicable() const { return d > 1.0; }
};

// A bounded metric space carrying a d-regular probability measure. Immutable
// after construction; cheap to copy and safe to share across threads.
class SpaceSpec {
 public:
  static SpaceSpec make(const SpaceConfig& config);

  SpaceKind kind() const { return config_.kind; }
  int ambient_dim() const { return config_.ambient_dim; }
  Metric metric() const { return config_.metric; }
  int address_depth() const { return config_.address_depth; }
  const std::vector<IfsMap>& maps() const { return config_.maps; }
  double diameter() const { return diameter_; }

  // log m / log(1/r) for equal-ratio IFS; ambient_dim for cube and torus.
  double similarity_dimension() const;

  double distance(std::span<const double> a, std::span<const double> b) const;

  // Fixed point of map i: translation / (1 - ratio).
  std::vector<double> ifs_fixed_point(std::size_t i) const;

  // Axis-aligned box guaranteed to contain every sampled point.
  // cube: [0,1]^dim, torus: [0,1)^dim, ifs: bounding box of the fixed points.
  void bounding_box(std::vector<double>& lo, std::vector<double>& hi) const;

  // Short tag for records, e.g. "unit-cube-2" or "ifs-3x0.5".
  std::string tag() const;

  bool operator==(const SpaceSpec& other) const;

 private:
  SpaceSpec(SpaceConfig config, double diameter)
      : config_(std::move(config)), diameter_(diameter) {}

  SpaceConfig config_;
  double diameter_ = 0.0;
};

// Preset fractal generators (equal-ratio, open set condition satisfied).
SpaceConfig sierpinski_gasket_config();
SpaceConfig sierpinski_carpet_config();

// Ordered sample with coordinates stored row-major (n x dim).
class PointSet {
 public:
  // Validates containment in the space's bounding box.
  PointSet(SpaceSpec space, std::vector<double> coords,
           std::optional<std::uint64_t> seed);

  std::size_t size() const { return coords_.size() / dim_; }
  int dim() const { return dim_; }
  const SpaceSpec& space() const { return space_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& coords() const { return coords_; }

  double dist(std::size_t i, std::size_t j) const {
    return space_.distance(point(i), point(j));
  }

  // Copy with one point replaced (used by the adversarial perturber).
  PointSet with_point(std::size_t i, std::span<const double> p) const;

 private:
  SpaceSpec space_;
  int dim_;
  std::vector<double> coords_;
  std::optional<std::uint64_t> seed_;
};

// i.i.d. sample of n points from the space's natural measure. Pure function
// of (spec, n, seed): same inputs give bit-identical coordinates.
PointSet sample(const SpaceSpec& spec, std::size_t n, std::uint64_t seed);

struct RegularityOptions {
  int n_centers = 64;
  // Radius window as fractions of the diameter; log-spaced grid inside it.
  double r_lo_frac = 0.02;
  double r_hi_frac = 0.25;
  // When set, d is taken as given (closed form) and only the constants are
  // estimated; otherwise d comes from the regression slope.
  std::optional<double> pin_exponent;
};

// Monte Carlo witness for the ball-measure growth law: regression of
// log mu(B(p,r)) on log r over a log-spaced radius grid, ball measure
// estimated by the empirical fraction of n_probe sampled points, averaged
// over random centers. Throws ConfigError if the grid degenerates (all balls
// empty or all full).
RegularityWitness estimate_regularity(const SpaceSpec& spec,
                                      std::size_t n_probe, int n_radii,
                                      std::uint64_t seed,
                                      const RegularityOptions& opts = {});

// Empirical measure of the ball B(center, r) within a sampled cloud.
double empirical_ball_measure(const PointSet& cloud,
                              std::span<const double> center, double r);

// Known closed-form witness where we have one: the euclidean unit square has
// d = 2 and upper constant pi (disk area). Returns nullopt elsewhere.
std::optional<RegularityWitness> analytic_witness(const SpaceSpec& spec);

// Witness used by checks: analytic when available, otherwise d from the
// similarity dimension and constants estimated with the given budget.
RegularityWitness default_witness(const SpaceSpec& spec, std::size_t n_probe,
                                  std::uint64_t seed);

}  // namespace regtsp
