#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "regtsp/analysis.hpp"
#include "regtsp/solvers.hpp"
#include "regtsp/space.hpp"

namespace regtsp {

// Shortest representation that round-trips a double (17 significant digits).
std::string format_double(double v);

// ---- point sets: CSV, one point per row, header x0..x{d-1} ----

std::string points_to_csv(const PointSet& points);
PointSet points_from_csv(const std::string& text, const SpaceSpec& space);
void write_points_csv(const std::string& path, const PointSet& points);
PointSet load_points_csv(const std::string& path, const SpaceSpec& space);

// ---- space specs: TOML table ----

std::string space_to_toml(const SpaceSpec& spec);
SpaceConfig space_config_from_toml(const std::string& text);

// ---- tours and reports: JSON ----

std::string tour_to_json(const Tour& tour, std::optional<std::uint64_t> seed);
Tour tour_from_json(const std::string& text);

std::string star_report_to_json(const StarReport& report,
                                const std::string& instance_id);
std::string packing_report_to_json(const PackingReport& report,
                                   const std::string& instance_id);
std::string bound_chain_report_to_json(const BoundChainReport& report,
                                       const std::string& instance_id);

// ---- minimal TOML reader ----
// Covers the subset the config format uses: [section] headers, dotted
// sections, string/integer/float/boolean scalars, flat and nested arrays.

struct TomlValue;
using TomlArray = std::vector<TomlValue>;

struct TomlValue {
  std::variant<std::string, std::int64_t, double, bool, TomlArray> value;

  const std::string& as_string() const;
  std::int64_t as_int() const;
  double as_double() const;  // accepts integer values too
  bool as_bool() const;
  const TomlArray& as_array() const;
};

// Keys are fully dotted paths, e.g. "space.ifs.ratio".
using TomlTable = std::map<std::string, TomlValue>;

TomlTable parse_toml(const std::string& text);

// Reads a space description from keys under `prefix` ("" or "space.").
SpaceConfig space_config_from_table(const TomlTable& table,
                                    const std::string& prefix);

}  // namespace regtsp
