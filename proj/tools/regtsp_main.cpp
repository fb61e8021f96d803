// regtsp command-line front end: sample point sets, run tour solvers,
// verify the geometric invariants, run scaling experiments, and search for
// adversarial instances. Emits CSV and JSON artifacts for plotting.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "regtsp/adversarial.hpp"
#include "regtsp/analysis.hpp"
#include "regtsp/errors.hpp"
#include "regtsp/experiment.hpp"
#include "regtsp/io.hpp"
#include "regtsp/rng.hpp"
#include "regtsp/solvers.hpp"
#include "regtsp/space.hpp"

namespace {

using namespace regtsp;
using nlohmann::json;

// Exit codes: 0 ok, 2 bad config/usage, 3 size limit, 4 invariant
// violation, 5 malformed input file.
constexpr int kExitConfig = 2;
constexpr int kExitSizeLimit = 3;
constexpr int kExitViolation = 4;
constexpr int kExitParse = 5;

struct SpaceArgs {
  std::string preset = "cube";  // cube, torus, gasket, carpet, ifs
  int dim = 2;
  std::string metric = "euclidean";
  int depth = 30;
  double ifs_ratio = 0.0;
  std::vector<std::string> ifs_translations;

  void attach(CLI::App* cmd) {
    cmd->add_option("--space", preset,
                    "Space preset: cube, torus, gasket, carpet, ifs")
        ->capture_default_str();
    cmd->add_option("--dim", dim, "Ambient dimension (cube/torus)")
        ->capture_default_str();
    cmd->add_option("--metric", metric, "euclidean or chebyshev")
        ->capture_default_str();
    cmd->add_option("--depth", depth, "IFS address depth")
        ->capture_default_str();
    cmd->add_option("--ifs-ratio", ifs_ratio,
                    "Contraction ratio for --space ifs");
    cmd->add_option("--ifs-translation", ifs_translations,
                    "Translation vector 'x,y,...' for --space ifs; repeat "
                    "once per map");
  }

  SpaceSpec build() const {
    SpaceConfig config;
    if (preset == "cube") {
      config.kind = SpaceKind::UnitCube;
      config.ambient_dim = dim;
    } else if (preset == "torus") {
      config.kind = SpaceKind::FlatTorus;
      config.ambient_dim = dim;
    } else if (preset == "gasket") {
      config = sierpinski_gasket_config();
    } else if (preset == "carpet") {
      config = sierpinski_carpet_config();
    } else if (preset == "ifs") {
      config.kind = SpaceKind::IfsAttractor;
      config.ambient_dim = dim;
      for (const auto& text : ifs_translations) {
        IfsMap map;
        map.ratio = ifs_ratio;
        std::istringstream in(text);
        std::string cell;
        while (std::getline(in, cell, ','))
          map.translation.push_back(std::stod(cell));
        config.maps.push_back(std::move(map));
      }
    } else {
      throw ConfigError("unknown space preset: " + preset);
    }
    config.metric = metric_from_string(metric);
    config.address_depth = depth;
    return SpaceSpec::make(config);
  }
};

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << content;
}

std::vector<CheckKind> parse_checks(const std::string& csv) {
  std::vector<CheckKind> checks;
  std::istringstream in(csv);
  std::string name;
  while (std::getline(in, name, ','))
    if (!name.empty()) checks.push_back(check_kind_from_string(name));
  if (checks.empty()) throw ConfigError("no checks selected");
  return checks;
}

int cmd_sample(const SpaceArgs& space_args, std::size_t n, std::uint64_t seed,
               const std::string& format, const std::string& out_path) {
  const SpaceSpec spec = space_args.build();
  const PointSet points = sample(spec, n, seed);
  if (format == "csv") {
    write_output(out_path, points_to_csv(points));
  } else if (format == "json") {
    json j;
    j["space"] = spec.tag();
    j["n"] = n;
    j["seed"] = seed;
    j["points"] = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto p = points.point(i);
      j["points"].push_back(std::vector<double>(p.begin(), p.end()));
    }
    write_output(out_path, j.dump(2) + "\n");
  } else {
    throw ConfigError("unknown format: " + format);
  }
  std::cerr << "space " << spec.tag() << " diameter "
            << format_double(spec.diameter()) << " dimension "
            << format_double(spec.similarity_dimension()) << "\n";
  return 0;
}

int cmd_solve(const SpaceArgs& space_args, const std::string& in_path,
              std::size_t n, std::uint64_t seed, const std::string& solver,
              int start, bool sweep_starts, bool verify,
              const std::string& out_path) {
  const SpaceSpec spec = space_args.build();
  std::optional<PointSet> points;
  std::optional<std::uint64_t> points_seed;
  if (!in_path.empty()) {
    points = load_points_csv(in_path, spec);
  } else {
    points = sample(spec, n, seed);
    points_seed = seed;
  }

  const SolverTag tag = solver_tag_from_string(solver);
  Tour tour;
  std::optional<SelectionTrace> trace;
  switch (tag) {
    case SolverTag::NearestNeighbor: {
      auto result = nearest_neighbor_tour(*points, start);
      tour = std::move(result.tour);
      trace = std::move(result.trace);
      break;
    }
    case SolverTag::Greedy: {
      auto result = greedy_tour(*points);
      tour = std::move(result.tour);
      trace = std::move(result.trace);
      break;
    }
    case SolverTag::ExactDp:
      tour = exact_tour_dp(*points);
      break;
    case SolverTag::BruteForce:
      tour = brute_force_tour(*points);
      break;
    case SolverTag::TwoOpt:
      tour = two_opt_improve(*points, nearest_neighbor_tour(*points, start).tour);
      break;
  }

  json j = json::parse(tour_to_json(tour, points_seed));
  if (sweep_starts && tag == SolverTag::NearestNeighbor) {
    std::vector<double> lengths;
    for (std::size_t s = 0; s < points->size(); ++s)
      lengths.push_back(nearest_neighbor_tour(*points, static_cast<int>(s))
                            .tour.length);
    std::sort(lengths.begin(), lengths.end());
    j["start_sweep"] = {
        {"min", lengths.front()},
        {"median", lengths[lengths.size() / 2]},
        {"max", lengths.back()},
    };
  }
  if (verify && trace) {
    const BallFamily family = extract_ball_family(*trace);
    const RegularityWitness witness =
        default_witness(spec, 20000, mix_seed(seed, 0x817e55u));
    const DyadicDecomposition decomp =
        dyadic_partition(family, spec.diameter(), witness, points->size());
    const StarReport star = check_star_property(family, *points);
    const PackingReport packing =
        check_packing(decomp, family, *points, witness);
    const BoundChainReport chain = bound_chain(family, tour, *points, decomp);
    j["checks"] = {
        {"star", json::parse(star_report_to_json(star, "solve"))},
        {"packing", json::parse(packing_report_to_json(packing, "solve"))},
        {"bound_chain",
         json::parse(bound_chain_report_to_json(chain, "solve"))},
    };
  }
  write_output(out_path, j.dump(2) + "\n");
  return 0;
}

int cmd_verify(const SpaceArgs& space_args, std::size_t n, int trials,
               const std::string& checks_csv, std::uint64_t seed,
               std::size_t witness_probe, const std::string& out_path) {
  const SpaceSpec spec = space_args.build();
  const std::vector<CheckKind> checks = parse_checks(checks_csv);
  const RegularityWitness witness =
      default_witness(spec, witness_probe, mix_seed(seed, 0x817e55u));
  const VerifySummary summary =
      run_verification(spec, n, trials, checks, seed, witness);
  write_output(out_path, verify_summary_to_json(summary, checks));
  if (std::find(checks.begin(), checks.end(), CheckKind::Isolation) !=
      checks.end())
    std::cerr << "mean isolated fraction "
              << format_double(summary.mean_isolated_fraction) << "\n";
  return summary.guaranteed_clean() ? 0 : kExitViolation;
}

int cmd_scaling(const std::string& config_path, int threads,
                const std::string& csv_override,
                const std::string& json_override,
                const std::string& timings_path) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ParseError("cannot open config: " + config_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentConfig config = experiment_config_from_toml(buf.str());
  if (!csv_override.empty()) config.csv_path = csv_override;
  if (!json_override.empty()) config.json_path = json_override;

  const ScalingResult result = run_scaling(config, threads);
  write_output(config.csv_path, records_to_csv(result.records));
  write_output(config.json_path.empty() ? "-" : config.json_path,
               scaling_summary_to_json(result));
  if (!timings_path.empty())
    write_output(timings_path, timings_to_csv(result.records));
  return 0;
}

int cmd_adversarial(const SpaceArgs& space_args, std::size_t n,
                    std::int64_t iterations, int restarts,
                    std::uint64_t seed, const std::string& out_path) {
  const SpaceSpec spec = space_args.build();
  AdversarialOptions opts;
  opts.restarts = restarts;
  const AdversarialResult result =
      adversarial_search(spec, n, iterations, seed, opts);

  const Tour opt = exact_tour_dp(result.points);
  json j;
  j["solver"] = to_string(opt.solver);
  j["order"] = opt.order;
  j["length"] = opt.length;
  j["n"] = n;
  j["seed"] = seed;
  j["ratio_nn"] = result.ratio_nn;
  j["ratio_greedy"] = result.ratio_greedy;
  j["opt_length"] = result.opt_length;
  j["opt_vs_random_scale"] = result.opt_vs_random_scale;
  j["accepted_steps"] = result.accepted_steps;
  j["points"] = json::array();
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto p = result.points.point(i);
    j["points"].push_back(std::vector<double>(p.begin(), p.end()));
  }
  write_output(out_path, j.dump(2) + "\n");
  return 0;
}

int cmd_ratio_profile(const SpaceArgs& space_args,
                      const std::vector<std::size_t>& n_grid, int trials,
                      std::uint64_t seed, const std::string& out_path) {
  const SpaceSpec spec = space_args.build();
  const auto records = ratio_profile(spec, n_grid, trials, seed);
  std::ostringstream out;
  out << "n,ratio_nn,ratio_greedy,opt_scale,exact\n";
  for (const auto& record : records) {
    out << record.n << "," << format_double(record.ratio_nn) << ","
        << format_double(record.ratio_greedy) << ","
        << format_double(record.opt_scale) << ","
        << (record.exact ? "true" : "false") << "\n";
  }
  write_output(out_path, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TSP heuristics and proof diagnostics on regular metric spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "csv";
  int threads = 1;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--out", out_path, "Output path ('-' for stdout)");
  app.add_option("--format", format, "Point-sample output format: csv, json")
      ->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for grid runs")
      ->capture_default_str();

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Sample a point set to CSV");
  SpaceArgs sample_space;
  sample_space.attach(sample_cmd);
  std::size_t sample_n = 100;
  sample_cmd->add_option("--n", sample_n, "Number of points")
      ->capture_default_str();

  // solve
  auto* solve_cmd =
      app.add_subcommand("solve", "Run one solver on a point set");
  SpaceArgs solve_space;
  solve_space.attach(solve_cmd);
  std::string solve_in, solve_solver = "nn";
  std::size_t solve_n = 100;
  int solve_start = 0;
  bool solve_sweep = false, solve_verify = false;
  solve_cmd->add_option("--in", solve_in, "Points CSV (else sample fresh)");
  solve_cmd->add_option("--n", solve_n, "Points to sample when no --in")
      ->capture_default_str();
  solve_cmd->add_option("--solver", solve_solver,
                        "nn, greedy, exact, brute, 2opt")
      ->capture_default_str();
  solve_cmd->add_option("--start", solve_start, "NN start vertex")
      ->capture_default_str();
  solve_cmd->add_flag("--sweep-starts", solve_sweep,
                      "Report min/median/max NN length over all starts");
  solve_cmd->add_flag("--verify", solve_verify,
                      "Embed star/packing/bound-chain reports");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "Run invariant checks over many instances");
  SpaceArgs verify_space;
  verify_space.attach(verify_cmd);
  std::size_t verify_n = 200;
  int verify_trials = 100;
  std::size_t verify_probe = 20000;
  std::string verify_checks = "star,packing,bound-chain";
  verify_cmd->add_option("--n", verify_n, "Points per instance")
      ->capture_default_str();
  verify_cmd->add_option("--trials", verify_trials, "Instances to test")
      ->capture_default_str();
  verify_cmd->add_option("--checks", verify_checks,
                         "Comma list: star,packing,bound-chain,isolation,"
                         "lower-bound")
      ->capture_default_str();
  verify_cmd->add_option("--witness-probe", verify_probe,
                         "Sample budget for the regularity witness")
      ->capture_default_str();

  // scaling
  auto* scaling_cmd =
      app.add_subcommand("scaling", "Run a scaling experiment from TOML");
  std::string scaling_config, scaling_csv, scaling_json, scaling_timings;
  scaling_cmd->add_option("--config", scaling_config, "Experiment TOML")
      ->required();
  scaling_cmd->add_option("--csv", scaling_csv, "Override records CSV path");
  scaling_cmd->add_option("--json", scaling_json, "Override summary JSON path");
  scaling_cmd->add_option("--timings", scaling_timings,
                          "Optional wall-time CSV (not byte-reproducible)");

  // adversarial
  auto* adv_cmd = app.add_subcommand(
      "adversarial", "Hill-climb for instances with poor NN ratio");
  SpaceArgs adv_space;
  adv_space.attach(adv_cmd);
  std::size_t adv_n = 10;
  std::int64_t adv_iterations = 2000;
  int adv_restarts = 4;
  std::vector<std::size_t> adv_profile_grid;
  int adv_profile_trials = 50;
  adv_cmd->add_option("--n", adv_n, "Instance size, 6..14")
      ->capture_default_str();
  adv_cmd->add_option("--iterations", adv_iterations, "Total climb steps")
      ->capture_default_str();
  adv_cmd->add_option("--restarts", adv_restarts, "Independent restarts")
      ->capture_default_str();
  adv_cmd->add_option("--profile", adv_profile_grid,
                      "Skip the search; emit a ratio-vs-optimum-scale CSV "
                      "over these sizes");
  adv_cmd->add_option("--profile-trials", adv_profile_trials,
                      "Instances per size for --profile")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (format != "csv" && format != "json")
      throw ConfigError("unknown format: " + format);
    if (sample_cmd->parsed())
      return cmd_sample(sample_space, sample_n, seed, format, out_path);
    if (solve_cmd->parsed())
      return cmd_solve(solve_space, solve_in, solve_n, seed, solve_solver,
                       solve_start, solve_sweep, solve_verify, out_path);
    if (verify_cmd->parsed())
      return cmd_verify(verify_space, verify_n, verify_trials, verify_checks,
                        seed, verify_probe, out_path);
    if (scaling_cmd->parsed())
      return cmd_scaling(scaling_config, threads, scaling_csv, scaling_json,
                         scaling_timings);
    if (adv_cmd->parsed()) {
      if (!adv_profile_grid.empty())
        return cmd_ratio_profile(adv_space, adv_profile_grid,
                                 adv_profile_trials, seed, out_path);
      return cmd_adversarial(adv_space, adv_n, adv_iterations, adv_restarts,
                             seed, out_path);
    }
  } catch (const SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << "\n";
    return kExitSizeLimit;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}
