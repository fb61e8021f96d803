#include "regtsp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "regtsp/errors.hpp"
#include "regtsp/io.hpp"
#include "regtsp/rng.hpp"

namespace regtsp {

using nlohmann::json;

std::string to_string(CheckKind check) {
  switch (check) {
    case CheckKind::Star: return "star";
    case CheckKind::Packing: return "packing";
    case CheckKind::BoundChain: return "bound-chain";
    case CheckKind::Isolation: return "isolation";
    case CheckKind::LowerBound: return "lower-bound";
  }
  return "?";
}

CheckKind check_kind_from_string(const std::string& s) {
  if (s == "star") return CheckKind::Star;
  if (s == "packing") return CheckKind::Packing;
  if (s == "bound-chain") return CheckKind::BoundChain;
  if (s == "isolation") return CheckKind::Isolation;
  if (s == "lower-bound") return CheckKind::LowerBound;
  throw ConfigError("unknown check: " + s);
}

void ExperimentConfig::validate() const {
  if (solvers.empty()) throw ConfigError("config: no solvers selected");
  if (n_grid.empty()) throw ConfigError("config: n_grid is empty");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
    if (n_grid[i] >= n_grid[i + 1])
      throw ConfigError("config: n_grid must be strictly increasing");
  if (n_grid.front() < 2) throw ConfigError("config: n values must be >= 2");
  if (trials_per_n < 1) throw ConfigError("config: trials_per_n must be >= 1");
}

ExperimentConfig experiment_config_from_toml(const std::string& text) {
  const TomlTable table = parse_toml(text);
  ExperimentConfig config;
  config.space = space_config_from_table(table, "space.");

  auto get = [&](const std::string& key) -> const TomlValue* {
    auto it = table.find(key);
    return it == table.end() ? nullptr : &it->second;
  };

  const auto* solvers = get("experiment.solvers");
  if (!solvers) throw ParseError("config: missing experiment.solvers");
  for (const auto& entry : solvers->as_array())
    config.solvers.push_back(solver_tag_from_string(entry.as_string()));

  const auto* n_grid = get("experiment.n_grid");
  if (!n_grid) throw ParseError("config: missing experiment.n_grid");
  for (const auto& entry : n_grid->as_array())
    config.n_grid.push_back(static_cast<std::size_t>(entry.as_int()));

  if (const auto* trials = get("experiment.trials_per_n"))
    config.trials_per_n = static_cast<int>(trials->as_int());
  if (const auto* seed = get("experiment.master_seed"))
    config.master_seed = static_cast<std::uint64_t>(seed->as_int());
  if (const auto* probe = get("experiment.witness_probe"))
    config.witness_probe = static_cast<std::size_t>(probe->as_int());
  if (const auto* checks = get("experiment.checks"))
    for (const auto& entry : checks->as_array())
      config.checks.push_back(check_kind_from_string(entry.as_string()));
  if (const auto* csv = get("output.csv")) config.csv_path = csv->as_string();
  if (const auto* js = get("output.json")) config.json_path = js->as_string();

  config.validate();
  return config;
}

namespace {

bool has_check(const std::vector<CheckKind>& checks, CheckKind kind) {
  return std::find(checks.begin(), checks.end(), kind) != checks.end();
}

// Serializes the O(n^2) edge materialization of big greedy cells so a
// many-thread run cannot blow the memory budget.
std::mutex big_greedy_mutex;
constexpr std::size_t kBigGreedyN = 4096;

struct CellOutput {
  std::vector<ExperimentRecord> records;  // one per solver, config order
};

CellOutput run_cell(const ExperimentConfig& config, const SpaceSpec& spec,
                    const RegularityWitness& witness, std::size_t n,
                    int trial) {
  const std::uint64_t cell_seed =
      mix_seed(config.master_seed, n, static_cast<std::uint64_t>(trial));
  const PointSet points = sample(spec, n, cell_seed);

  // Isolation data is per-instance, shared by every solver row.
  const IsolationStats iso = isolation_stats(points, witness);
  const double d = spec.similarity_dimension();

  CellOutput out;
  for (const SolverTag solver : config.solvers) {
    ExperimentRecord record;
    record.space_tag = spec.tag();
    record.d = d;
    record.solver = solver;
    record.n = n;
    record.trial = trial;
    record.seed = cell_seed;
    record.z = iso.z;
    record.r = iso.r;
    record.lower_bound = iso.lower_bound;

    const auto start = std::chrono::steady_clock::now();
    try {
      Tour tour;
      SelectionTrace trace;
      bool have_trace = false;
      switch (solver) {
        case SolverTag::NearestNeighbor: {
          auto result = nearest_neighbor_tour(points, 0);
          tour = std::move(result.tour);
          trace = std::move(result.trace);
          have_trace = true;
          break;
        }
        case SolverTag::Greedy: {
          std::unique_lock<std::mutex> gate;
          if (n >= kBigGreedyN)
            gate = std::unique_lock<std::mutex>(big_greedy_mutex);
          auto result = greedy_tour(points);
          tour = std::move(result.tour);
          trace = std::move(result.trace);
          have_trace = true;
          break;
        }
        case SolverTag::ExactDp:
          tour = exact_tour_dp(points);
          break;
        case SolverTag::BruteForce:
          tour = brute_force_tour(points);
          break;
        case SolverTag::TwoOpt:
          tour = two_opt_improve(points,
                                 nearest_neighbor_tour(points, 0).tour);
          break;
      }
      record.length = tour.length;

      std::ostringstream outcomes;
      auto append_outcome = [&](const std::string& name, std::size_t count) {
        if (outcomes.tellp() > 0) outcomes << ";";
        outcomes << name << "=" << count;
      };
      if (have_trace && !config.checks.empty()) {
        const BallFamily family = extract_ball_family(trace);
        DyadicDecomposition decomp;
        const bool need_decomp = has_check(config.checks, CheckKind::Packing) ||
                                 has_check(config.checks, CheckKind::BoundChain);
        if (need_decomp)
          decomp = dyadic_partition(family, spec.diameter(), witness, n);
        if (has_check(config.checks, CheckKind::Star)) {
          const StarReport star = check_star_property(family, points);
          append_outcome("star", solver == SolverTag::NearestNeighbor
                                     ? star.ordered_violations.size()
                                     : star.min_violations.size());
        }
        if (has_check(config.checks, CheckKind::Packing)) {
          const PackingReport packing =
              check_packing(decomp, family, points, witness);
          append_outcome("packing", packing.disjointness_violations.size());
        }
        if (has_check(config.checks, CheckKind::BoundChain)) {
          const BoundChainReport chain =
              bound_chain(family, tour, points, decomp);
          append_outcome("bound-chain", chain.holds ? 0 : 1);
        }
      }
      if (has_check(config.checks, CheckKind::LowerBound)) {
        const LowerBoundReport lb = verify_lower_bound(points, iso, tour);
        append_outcome("lower-bound", lb.holds ? 0 : 1);
      }
      record.check_outcomes = outcomes.str();
    } catch (const std::exception& e) {
      record.error = e.what();
      record.length = 0.0;
    }
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    out.records.push_back(std::move(record));
  }
  return out;
}

}  // namespace

ScalingResult run_scaling(const ExperimentConfig& config, int threads) {
  config.validate();
  const SpaceSpec spec = SpaceSpec::make(config.space);
  const RegularityWitness witness = default_witness(
      spec, config.witness_probe, mix_seed(config.master_seed, 0x817e55u));

  const std::size_t cells = config.n_grid.size() *
                            static_cast<std::size_t>(config.trials_per_n);
  std::vector<CellOutput> outputs(cells);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= cells) return;
      const std::size_t n_idx = cell / config.trials_per_n;
      const int trial = static_cast<int>(cell % config.trials_per_n);
      const std::size_t n = config.n_grid[n_idx];
      try {
        outputs[cell] = run_cell(config, spec, witness, n, trial);
      } catch (const std::exception& e) {
        // Cell-level failure (sampling, statistics): error rows for every
        // solver, run continues.
        CellOutput failed;
        for (const SolverTag solver : config.solvers) {
          ExperimentRecord record;
          record.space_tag = spec.tag();
          record.d = spec.similarity_dimension();
          record.solver = solver;
          record.n = n;
          record.trial = trial;
          record.seed = mix_seed(config.master_seed, n,
                                 static_cast<std::uint64_t>(trial));
          record.error = e.what();
          failed.records.push_back(std::move(record));
        }
        outputs[cell] = std::move(failed);
      }
    }
  };

  const int worker_count = std::max(1, threads);
  if (worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int t = 0; t < worker_count; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }

  ScalingResult result;
  result.witness = witness;
  // Rows come out by (n, trial, solver-in-config-order) no matter which
  // thread finished first.
  for (auto& output : outputs)
    for (auto& record : output.records)
      result.records.push_back(std::move(record));

  for (const SolverTag solver : config.solvers) {
    std::vector<std::pair<double, double>> points;
    for (const auto& record : result.records)
      if (record.solver == solver && record.error.empty() &&
          record.length > 0.0)
        points.emplace_back(static_cast<double>(record.n), record.length);
    SolverSummary summary;
    summary.solver = solver;
    summary.expected_slope = 1.0 - 1.0 / spec.similarity_dimension();
    if (points.size() >= 3) {
      try {
        summary.fit = fit_exponent(points);
      } catch (const ConfigError&) {
        // fewer than 3 distinct sizes survived; leave the fit empty
      }
    }
    result.summaries.push_back(summary);
  }
  return result;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "space,d,solver,n,seed,trial,length,z,r,lower_bound,checks\n";
  for (const auto& record : records) {
    out << record.space_tag << "," << format_double(record.d) << ","
        << to_string(record.solver) << "," << record.n << "," << record.seed
        << "," << record.trial << ",";
    if (record.error.empty()) {
      out << format_double(record.length) << "," << record.z << ","
          << format_double(record.r) << ","
          << format_double(record.lower_bound) << "," << record.check_outcomes;
    } else {
      std::string clean = record.error;
      for (char& c : clean)
        if (c == ',' || c == '\n' || c == '\r') c = ' ';
      out << ",,,,error:" << clean;
    }
    out << "\n";
  }
  return out.str();
}

std::string timings_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << "space,solver,n,trial,wall_ms\n";
  for (const auto& record : records)
    out << record.space_tag << "," << to_string(record.solver) << ","
        << record.n << "," << record.trial << ","
        << format_double(record.wall_ms) << "\n";
  return out.str();
}

std::string scaling_summary_to_json(const ScalingResult& result) {
  json summaries = json::array();
  for (const auto& summary : result.summaries) {
    summaries.push_back({
        {"solver", to_string(summary.solver)},
        {"slope", summary.fit.slope},
        {"intercept", summary.fit.intercept},
        {"stderr", summary.fit.slope_stderr},
        {"expected", summary.expected_slope},
        {"n_records", summary.fit.n_points},
    });
  }
  json j;
  j["summaries"] = summaries;
  j["witness"] = {{"d", result.witness.d},
                  {"c_lower", result.witness.c_lower},
                  {"d_upper", result.witness.d_upper}};
  return j.dump(2) + "\n";
}

VerifySummary run_verification(const SpaceSpec& spec, std::size_t n,
                               int trials,
                               const std::vector<CheckKind>& checks,
                               std::uint64_t seed,
                               const RegularityWitness& witness) {
  if (trials < 1) throw ConfigError("run_verification: trials must be >= 1");
  if (n < 3) throw ConfigError("run_verification: n must be >= 3");

  VerifySummary summary;
  summary.trials = trials;
  summary.n = n;
  summary.lower_bound_vs_exact = n <= 20;
  double isolated_fraction_sum = 0.0;

  const bool want_star = has_check(checks, CheckKind::Star);
  const bool want_packing = has_check(checks, CheckKind::Packing);
  const bool want_chain = has_check(checks, CheckKind::BoundChain);
  const bool want_isolation = has_check(checks, CheckKind::Isolation);
  const bool want_lower = has_check(checks, CheckKind::LowerBound);

  for (int trial = 0; trial < trials; ++trial) {
    const PointSet points =
        sample(spec, n, mix_seed(seed, n, static_cast<std::uint64_t>(trial)));

    if (want_star || want_packing || want_chain) {
      const auto nn = nearest_neighbor_tour(points, 0);
      const BallFamily family = extract_ball_family(nn.trace);
      if (want_star) {
        const StarReport star = check_star_property(family, points);
        summary.nn_star_violations += star.ordered_violations.size();
        summary.nn_star_violations += star.min_violations.size();

        const auto greedy = greedy_tour(points);
        const BallFamily greedy_family = extract_ball_family(greedy.trace);
        const StarReport greedy_star =
            check_star_property(greedy_family, points);
        summary.greedy_star_ordered_violations +=
            greedy_star.ordered_violations.size();
        summary.greedy_star_min_violations +=
            greedy_star.min_violations.size();
      }
      if (want_packing || want_chain) {
        const DyadicDecomposition decomp =
            dyadic_partition(family, spec.diameter(), witness, n);
        if (want_packing) {
          const PackingReport packing =
              check_packing(decomp, family, points, witness);
          summary.packing_violations +=
              packing.disjointness_violations.size();
          summary.own_half_radius_overlaps +=
              packing.own_half_radius_overlaps;
        }
        if (want_chain) {
          const BoundChainReport chain =
              bound_chain(family, nn.tour, points, decomp);
          if (!chain.holds) ++summary.bound_chain_violations;
        }
      }
    }

    if (want_isolation || want_lower) {
      const IsolationStats iso = isolation_stats(points, witness);
      isolated_fraction_sum +=
          static_cast<double>(iso.z) / static_cast<double>(n);
      if (want_lower) {
        const Tour reference = summary.lower_bound_vs_exact
                                   ? exact_tour_dp(points)
                                   : nearest_neighbor_tour(points, 0).tour;
        const LowerBoundReport lb = verify_lower_bound(points, iso, reference);
        if (!lb.holds) ++summary.lower_bound_violations;
      }
    }
  }
  summary.mean_isolated_fraction =
      isolated_fraction_sum / static_cast<double>(trials);
  return summary;
}

std::string verify_summary_to_json(const VerifySummary& summary,
                                   const std::vector<CheckKind>& checks) {
  json names = json::array();
  for (const auto check : checks) names.push_back(to_string(check));
  json j;
  j["check"] = "verify-suite";
  j["checks"] = names;
  j["trials"] = summary.trials;
  j["n"] = summary.n;
  j["violations"] = {
      {"nn_star", summary.nn_star_violations},
      {"packing", summary.packing_violations},
      {"bound_chain", summary.bound_chain_violations},
      {"lower_bound", summary.lower_bound_violations},
  };
  j["statistics"] = {
      {"greedy_star_ordered_violations",
       summary.greedy_star_ordered_violations},
      {"greedy_star_min_violations", summary.greedy_star_min_violations},
      {"own_half_radius_overlaps", summary.own_half_radius_overlaps},
      {"mean_isolated_fraction", summary.mean_isolated_fraction},
      {"lower_bound_vs_exact", summary.lower_bound_vs_exact},
      {"guaranteed_clean", summary.guaranteed_clean()},
  };
  return j.dump(2) + "\n";
}

}  // namespace regtsp
