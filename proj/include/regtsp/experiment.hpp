#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regtsp/analysis.hpp"
#include "regtsp/solvers.hpp"
#include "regtsp/space.hpp"

namespace regtsp {

enum class CheckKind { Star, Packing, BoundChain, Isolation, LowerBound };

std::string to_string(CheckKind check);
CheckKind check_kind_from_string(const std::string& s);

struct ExperimentConfig {
  SpaceConfig space;
  std::vector<SolverTag> solvers;
  std::vector<std::size_t> n_grid;  // strictly increasing
  int trials_per_n = 1;
  std::uint64_t master_seed = 0;
  std::string csv_path;      // records; empty = stdout by caller's choice
  std::string json_path;     // summary
  std::vector<CheckKind> checks;
  std::size_t witness_probe = 20000;

  void validate() const;  // throws ConfigError
};

ExperimentConfig experiment_config_from_toml(const std::string& text);

// One grid cell result. `error` is set (and the numeric fields left zero)
// when a solver failed on this cell; the run continues.
struct ExperimentRecord {
  std::string space_tag;
  double d = 0.0;
  SolverTag solver = SolverTag::NearestNeighbor;
  std::size_t n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double length = 0.0;
  std::int64_t z = 0;
  double r = 0.0;
  double lower_bound = 0.0;
  std::string check_outcomes;  // e.g. "star:0;packing:0" or empty
  std::string error;
  double wall_ms = 0.0;  // secondary artifact; never part of primary outputs
};

struct SolverSummary {
  SolverTag solver = SolverTag::NearestNeighbor;
  FitResult fit;
  double expected_slope = 0.0;  // 1 - 1/d
};

struct ScalingResult {
  std::vector<ExperimentRecord> records;  // ordered by (solver, n, trial)
  std::vector<SolverSummary> summaries;
  RegularityWitness witness;
};

// Runs the full (solver, n, trial) grid. Per-trial seeds are derived by
// stable hashing of (master_seed, n, trial), so records are identical for
// any thread count; rows come out in grid order regardless of completion
// order. Records with n above the exact range carry z/r/lower_bound from the
// isolation statistic only.
ScalingResult run_scaling(const ExperimentConfig& config, int threads = 1);

// Primary CSV: header
// space,d,solver,n,seed,trial,length,z,r,lower_bound,checks
std::string records_to_csv(const std::vector<ExperimentRecord>& records);
// Secondary timing CSV (space,solver,n,trial,wall_ms); separate because wall
// time is not reproducible and primary outputs must be byte-identical.
std::string timings_to_csv(const std::vector<ExperimentRecord>& records);
std::string scaling_summary_to_json(const ScalingResult& result);

// ---- verification harness (cmd_verify core) ----

struct VerifySummary {
  int trials = 0;
  std::size_t n = 0;
  // Guaranteed invariants: violations here fail the run.
  std::size_t nn_star_violations = 0;
  std::size_t packing_violations = 0;
  std::size_t bound_chain_violations = 0;
  std::size_t lower_bound_violations = 0;
  // Reported, never asserted.
  std::size_t greedy_star_ordered_violations = 0;
  std::size_t greedy_star_min_violations = 0;
  std::size_t own_half_radius_overlaps = 0;
  double mean_isolated_fraction = 0.0;
  bool lower_bound_vs_exact = false;  // false above the exact-solver range

  bool guaranteed_clean() const {
    return nn_star_violations == 0 && packing_violations == 0 &&
           bound_chain_violations == 0 && lower_bound_violations == 0;
  }
};

VerifySummary run_verification(const SpaceSpec& spec, std::size_t n,
                               int trials,
                               const std::vector<CheckKind>& checks,
                               std::uint64_t seed,
                               const RegularityWitness& witness);

std::string verify_summary_to_json(const VerifySummary& summary,
                                   const std::vector<CheckKind>& checks);

}  // namespace regtsp
