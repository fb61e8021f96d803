#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regtsp/adversarial.hpp"
#include "regtsp/analysis.hpp"
#include "regtsp/errors.hpp"
#include "regtsp/experiment.hpp"
#include "regtsp/io.hpp"
#include "regtsp/solvers.hpp"
#include "regtsp/space.hpp"

namespace py = pybind11;
using namespace regtsp;

namespace {

SpaceSpec make_space_py(const std::string& kind, int dim,
                        const std::string& metric, double ifs_ratio,
                        const std::vector<std::vector<double>>& translations,
                        int depth) {
  SpaceConfig config;
  if (kind == "gasket") {
    config = sierpinski_gasket_config();
  } else if (kind == "carpet") {
    config = sierpinski_carpet_config();
  } else {
    config.kind = space_kind_from_string(kind);
    config.ambient_dim = dim;
    for (const auto& t : translations)
      config.maps.push_back({ifs_ratio, t});
  }
  config.metric = metric_from_string(metric);
  config.address_depth = depth;
  return SpaceSpec::make(config);
}

PointSet point_set_py(const SpaceSpec& spec,
                      const std::vector<std::vector<double>>& points) {
  std::vector<double> coords;
  coords.reserve(points.size() * spec.ambient_dim());
  for (const auto& p : points) coords.insert(coords.end(), p.begin(), p.end());
  return PointSet(spec, std::move(coords), std::nullopt);
}

std::vector<std::vector<double>> coords_py(const PointSet& points) {
  std::vector<std::vector<double>> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "TSP heuristics and proof diagnostics on regular metric spaces";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SizeLimitError>(m, "SizeLimitError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<SpaceSpec>(m, "SpaceSpec")
      .def_property_readonly("diameter", &SpaceSpec::diameter)
      .def_property_readonly("ambient_dim", &SpaceSpec::ambient_dim)
      .def_property_readonly("address_depth", &SpaceSpec::address_depth)
      .def_property_readonly("tag", &SpaceSpec::tag)
      .def("similarity_dimension", &SpaceSpec::similarity_dimension)
      .def("distance",
           [](const SpaceSpec& spec, const std::vector<double>& a,
              const std::vector<double>& b) {
             return spec.distance(a, b);
           })
      .def("to_toml", &space_to_toml)
      .def("__repr__",
           [](const SpaceSpec& spec) { return "<SpaceSpec " + spec.tag() + ">"; });

  m.def("make_space", &make_space_py, py::arg("kind") = "unit-cube",
        py::arg("dim") = 2, py::arg("metric") = "euclidean",
        py::arg("ifs_ratio") = 0.0,
        py::arg("ifs_translations") = std::vector<std::vector<double>>{},
        py::arg("depth") = 30,
        "Build a space; kind is unit-cube, flat-torus, ifs-attractor, or a "
        "preset gasket/carpet");

  py::class_<PointSet>(m, "PointSet")
      .def(py::init(&point_set_py), py::arg("space"), py::arg("points"))
      .def("__len__", &PointSet::size)
      .def_property_readonly("dim", &PointSet::dim)
      .def_property_readonly("seed",
                             [](const PointSet& p) { return p.seed(); })
      .def_property_readonly("space", &PointSet::space)
      .def("coords", &coords_py)
      .def("dist", &PointSet::dist)
      .def("to_csv", &points_to_csv);

  m.def("sample", &sample, py::arg("space"), py::arg("n"), py::arg("seed"));
  m.def("points_from_csv", &points_from_csv, py::arg("text"),
        py::arg("space"));

  py::class_<RegularityWitness>(m, "RegularityWitness")
      .def(py::init([](double d, double c_lower, double d_upper) {
             return RegularityWitness{d, c_lower, d_upper};
           }),
           py::arg("d"), py::arg("c_lower"), py::arg("d_upper"))
      .def_readonly("d", &RegularityWitness::d)
      .def_readonly("c_lower", &RegularityWitness::c_lower)
      .def_readonly("d_upper", &RegularityWitness::d_upper)
      .def("headline_applicable", &RegularityWitness::headline_applicable);

  m.def(
      "estimate_regularity",
      [](const SpaceSpec& spec, std::size_t n_probe, int n_radii,
         std::uint64_t seed) {
        return estimate_regularity(spec, n_probe, n_radii, seed);
      },
      py::arg("space"), py::arg("n_probe") = 100000, py::arg("n_radii") = 12,
      py::arg("seed") = 0);
  m.def("analytic_witness", &analytic_witness, py::arg("space"));
  m.def("default_witness", &default_witness, py::arg("space"),
        py::arg("n_probe") = 20000, py::arg("seed") = 0);

  py::class_<Tour>(m, "Tour")
      .def_readonly("order", &Tour::order)
      .def_readonly("length", &Tour::length)
      .def_property_readonly(
          "solver", [](const Tour& t) { return to_string(t.solver); })
      .def("__repr__", [](const Tour& t) {
        return "<Tour " + to_string(t.solver) + " n=" +
               std::to_string(t.order.size()) + " length=" +
               std::to_string(t.length) + ">";
      });

  py::class_<TraceStep>(m, "TraceStep")
      .def_readonly("center", &TraceStep::center)
      .def_readonly("partner", &TraceStep::partner)
      .def_readonly("radius", &TraceStep::radius);

  py::class_<SelectionTrace>(m, "SelectionTrace")
      .def_readonly("steps", &SelectionTrace::steps)
      .def_readonly("fallback_close", &SelectionTrace::fallback_close)
      .def_property_readonly("source", [](const SelectionTrace& t) {
        return to_string(t.source);
      });

  m.def(
      "nearest_neighbor_tour",
      [](const PointSet& points, int start) {
        auto result = nearest_neighbor_tour(points, start);
        return py::make_tuple(result.tour, result.trace);
      },
      py::arg("points"), py::arg("start") = 0);
  m.def(
      "greedy_tour",
      [](const PointSet& points) {
        auto result = greedy_tour(points);
        return py::make_tuple(result.tour, result.trace);
      },
      py::arg("points"));
  m.def("exact_tour_dp", &exact_tour_dp, py::arg("points"));
  m.def("brute_force_tour", &brute_force_tour, py::arg("points"));
  m.def("two_opt_improve", &two_opt_improve, py::arg("points"),
        py::arg("tour"), py::arg("max_passes") = 64);
  m.def("tour_length",
        [](const PointSet& points, const std::vector<std::int32_t>& order) {
          return tour_length(points, order);
        });

  py::class_<Ball>(m, "Ball")
      .def_readonly("center", &Ball::center)
      .def_readonly("radius", &Ball::radius)
      .def_readonly("origin_step", &Ball::origin_step);

  py::class_<BallFamily>(m, "BallFamily")
      .def_readonly("balls", &BallFamily::balls)
      .def_readonly("dropped_zero_radius", &BallFamily::dropped_zero_radius)
      .def_property_readonly("source", [](const BallFamily& f) {
        return to_string(f.source);
      });

  m.def("extract_ball_family", &extract_ball_family, py::arg("trace"));

  py::class_<StarViolation>(m, "StarViolation")
      .def_readonly("earlier", &StarViolation::earlier)
      .def_readonly("later", &StarViolation::later)
      .def_readonly("center_dist", &StarViolation::center_dist)
      .def_readonly("required", &StarViolation::required);

  py::class_<StarReport>(m, "StarReport")
      .def_readonly("pairs_checked", &StarReport::pairs_checked)
      .def_readonly("ordered_violations", &StarReport::ordered_violations)
      .def_readonly("min_violations", &StarReport::min_violations)
      .def("passed", &StarReport::passed);

  m.def("check_star_property", &check_star_property, py::arg("family"),
        py::arg("points"));

  py::class_<DyadicDecomposition>(m, "DyadicDecomposition")
      .def_readonly("classes", &DyadicDecomposition::classes)
      .def_readonly("diam", &DyadicDecomposition::diam)
      .def_readonly("d", &DyadicDecomposition::d)
      .def_readonly("c_pack", &DyadicDecomposition::c_pack)
      .def_readonly("k0", &DyadicDecomposition::k0)
      .def_readonly("n", &DyadicDecomposition::n);

  m.def("dyadic_partition", &dyadic_partition, py::arg("family"),
        py::arg("diam"), py::arg("witness"), py::arg("n"));

  py::class_<PackingViolation>(m, "PackingViolation")
      .def_readonly("klass", &PackingViolation::klass)
      .def_readonly("ball_a", &PackingViolation::ball_a)
      .def_readonly("ball_b", &PackingViolation::ball_b)
      .def_readonly("center_dist", &PackingViolation::center_dist)
      .def_readonly("required", &PackingViolation::required);

  py::class_<ClassStat>(m, "ClassStat")
      .def_readonly("klass", &ClassStat::klass)
      .def_readonly("count", &ClassStat::count)
      .def_readonly("capacity_bound", &ClassStat::capacity_bound)
      .def_readonly("radius_sum", &ClassStat::radius_sum)
      .def_readonly("envelope", &ClassStat::envelope);

  py::class_<PackingReport>(m, "PackingReport")
      .def_readonly("disjointness_violations",
                    &PackingReport::disjointness_violations)
      .def_readonly("own_half_radius_overlaps",
                    &PackingReport::own_half_radius_overlaps)
      .def_readonly("class_stats", &PackingReport::class_stats)
      .def_readonly("capacity_exceeded_classes",
                    &PackingReport::capacity_exceeded_classes)
      .def("passed", &PackingReport::passed);

  m.def("check_packing", &check_packing, py::arg("decomp"), py::arg("family"),
        py::arg("points"), py::arg("witness"));

  py::class_<BoundChainReport>(m, "BoundChainReport")
      .def_readonly("tour_length", &BoundChainReport::tour_length)
      .def_readonly("radius_sum", &BoundChainReport::radius_sum)
      .def_readonly("closing_edge", &BoundChainReport::closing_edge)
      .def_readonly("slack", &BoundChainReport::slack)
      .def_readonly("holds", &BoundChainReport::holds)
      .def_readonly("class_stats", &BoundChainReport::class_stats)
      .def_readonly("tail_radius_sum", &BoundChainReport::tail_radius_sum);

  m.def("bound_chain", &bound_chain, py::arg("family"), py::arg("tour"),
        py::arg("points"), py::arg("decomp"));

  py::class_<IsolationStats>(m, "IsolationStats")
      .def_readonly("r", &IsolationStats::r)
      .def_readonly("z", &IsolationStats::z)
      .def_readonly("isolated", &IsolationStats::isolated)
      .def_readonly("lower_bound", &IsolationStats::lower_bound);

  m.def("isolation_stats", &isolation_stats, py::arg("points"),
        py::arg("witness"));

  py::class_<LowerBoundReport>(m, "LowerBoundReport")
      .def_readonly("tour_length", &LowerBoundReport::tour_length)
      .def_readonly("lower_bound", &LowerBoundReport::lower_bound)
      .def_readonly("holds", &LowerBoundReport::holds)
      .def_readonly("empirical_constant",
                    &LowerBoundReport::empirical_constant);

  m.def("verify_lower_bound", &verify_lower_bound, py::arg("points"),
        py::arg("stats"), py::arg("tour"));

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("slope", &FitResult::slope)
      .def_readonly("intercept", &FitResult::intercept)
      .def_readonly("slope_stderr", &FitResult::slope_stderr)
      .def_readonly("n_points", &FitResult::n_points);

  m.def("fit_exponent", &fit_exponent, py::arg("records"));

  py::class_<AdversarialResult>(m, "AdversarialResult")
      .def_readonly("points", &AdversarialResult::points)
      .def_readonly("ratio_nn", &AdversarialResult::ratio_nn)
      .def_readonly("ratio_greedy", &AdversarialResult::ratio_greedy)
      .def_readonly("opt_length", &AdversarialResult::opt_length)
      .def_readonly("opt_vs_random_scale",
                    &AdversarialResult::opt_vs_random_scale)
      .def_readonly("accepted_steps", &AdversarialResult::accepted_steps)
      .def_readonly("incumbent_history",
                    &AdversarialResult::incumbent_history);

  m.def(
      "adversarial_search",
      [](const SpaceSpec& spec, std::size_t n, std::int64_t iterations,
         std::uint64_t seed, int restarts) {
        AdversarialOptions opts;
        opts.restarts = restarts;
        return adversarial_search(spec, n, iterations, seed, opts);
      },
      py::arg("space"), py::arg("n"), py::arg("iterations"), py::arg("seed"),
      py::arg("restarts") = 4);

  py::class_<RatioRecord>(m, "RatioRecord")
      .def_readonly("n", &RatioRecord::n)
      .def_readonly("ratio_nn", &RatioRecord::ratio_nn)
      .def_readonly("ratio_greedy", &RatioRecord::ratio_greedy)
      .def_readonly("opt_scale", &RatioRecord::opt_scale)
      .def_readonly("exact", &RatioRecord::exact);

  m.def("ratio_profile", &ratio_profile, py::arg("space"), py::arg("n_grid"),
        py::arg("trials"), py::arg("seed"));

#ifdef VERSION_INFO
#define REGTSP_STR2(x) #x
#define REGTSP_STR(x) REGTSP_STR2(x)
  m.attr("__version__") = REGTSP_STR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
