#include "regtsp/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "regtsp/errors.hpp"

namespace regtsp {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- point CSV ----

std::string points_to_csv(const PointSet& points) {
  std::ostringstream out;
  for (int k = 0; k < points.dim(); ++k) {
    if (k) out << ",";
    out << "x" << k;
  }
  out << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    for (int k = 0; k < points.dim(); ++k) {
      if (k) out << ",";
      out << format_double(p[k]);
    }
    out << "\n";
  }
  return out.str();
}

PointSet points_from_csv(const std::string& text, const SpaceSpec& space) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("points csv: empty input");
  // Header row: x0,x1,...
  std::vector<double> coords;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t pos = 0;
    int cols = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string cell = line.substr(pos, comma - pos);
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw ParseError("points csv: bad number '" + cell + "' at row " +
                         std::to_string(row));
      coords.push_back(value);
      ++cols;
      pos = comma + 1;
      if (comma == line.size()) break;
    }
    if (cols != space.ambient_dim())
      throw ParseError("points csv: row " + std::to_string(row) + " has " +
                       std::to_string(cols) + " columns, expected " +
                       std::to_string(space.ambient_dim()));
  }
  if (coords.empty()) throw ParseError("points csv: no data rows");
  try {
    return PointSet(space, std::move(coords), std::nullopt);
  } catch (const ConfigError& e) {
    throw ParseError(std::string("points csv: ") + e.what());
  }
}

void write_points_csv(const std::string& path, const PointSet& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << points_to_csv(points);
}

PointSet load_points_csv(const std::string& path, const SpaceSpec& space) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return points_from_csv(buf.str(), space);
}

// ---- space TOML ----

std::string space_to_toml(const SpaceSpec& spec) {
  std::ostringstream out;
  out << "kind = \"" << to_string(spec.kind()) << "\"\n";
  out << "dim = " << spec.ambient_dim() << "\n";
  out << "metric = \"" << to_string(spec.metric()) << "\"\n";
  out << "depth = " << spec.address_depth() << "\n";
  if (spec.kind() == SpaceKind::IfsAttractor) {
    out << "\n[ifs]\n";
    out << "ratio = " << format_double(spec.maps().front().ratio) << "\n";
    out << "translations = [";
    for (std::size_t i = 0; i < spec.maps().size(); ++i) {
      if (i) out << ", ";
      out << "[";
      const auto& t = spec.maps()[i].translation;
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) out << ", ";
        out << format_double(t[k]);
      }
      out << "]";
    }
    out << "]\n";
  }
  return out.str();
}

SpaceConfig space_config_from_table(const TomlTable& table,
                                    const std::string& prefix) {
  SpaceConfig config;
  auto key = [&](const std::string& name) { return prefix + name; };
  auto get = [&](const std::string& name) -> const TomlValue* {
    auto it = table.find(key(name));
    return it == table.end() ? nullptr : &it->second;
  };

  const auto* kind = get("kind");
  if (!kind) throw ParseError("space table: missing 'kind'");
  config.kind = space_kind_from_string(kind->as_string());
  if (const auto* dim = get("dim"))
    config.ambient_dim = static_cast<int>(dim->as_int());
  if (const auto* metric = get("metric"))
    config.metric = metric_from_string(metric->as_string());
  if (const auto* depth = get("depth"))
    config.address_depth = static_cast<int>(depth->as_int());

  if (config.kind == SpaceKind::IfsAttractor) {
    const auto* ratio = get("ifs.ratio");
    const auto* translations = get("ifs.translations");
    if (!ratio || !translations)
      throw ParseError("space table: ifs-attractor needs ifs.ratio and "
                       "ifs.translations");
    for (const auto& entry : translations->as_array()) {
      IfsMap map;
      map.ratio = ratio->as_double();
      for (const auto& coord : entry.as_array())
        map.translation.push_back(coord.as_double());
      config.maps.push_back(std::move(map));
    }
  }
  return config;
}

SpaceConfig space_config_from_toml(const std::string& text) {
  return space_config_from_table(parse_toml(text), "");
}

// ---- tours ----

std::string tour_to_json(const Tour& tour,
                         std::optional<std::uint64_t> seed) {
  json j;
  j["solver"] = to_string(tour.solver);
  j["order"] = tour.order;
  j["length"] = tour.length;
  j["n"] = tour.order.size();
  if (seed)
    j["seed"] = *seed;
  else
    j["seed"] = nullptr;
  return j.dump(2) + "\n";
}

Tour tour_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("tour json: ") + e.what());
  }
  Tour tour;
  try {
    tour.solver = solver_tag_from_string(j.at("solver").get<std::string>());
    tour.order = j.at("order").get<std::vector<std::int32_t>>();
    tour.length = j.at("length").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("tour json: ") + e.what());
  }
  return tour;
}

// ---- reports ----

namespace {

json star_violations_to_json(const std::vector<StarViolation>& violations) {
  json arr = json::array();
  for (const auto& v : violations) {
    arr.push_back({{"earlier", v.earlier},
                   {"later", v.later},
                   {"center_dist", v.center_dist},
                   {"required", v.required}});
  }
  return arr;
}

}  // namespace

std::string star_report_to_json(const StarReport& report,
                                const std::string& instance_id) {
  json j;
  j["check"] = "star";
  j["instance_id"] = instance_id;
  j["violations"] = star_violations_to_json(report.ordered_violations);
  j["statistics"] = {
      {"pairs_checked", report.pairs_checked},
      {"ordered_violations", report.ordered_violations.size()},
      {"min_violations", report.min_violations.size()},
  };
  return j.dump(2) + "\n";
}

std::string packing_report_to_json(const PackingReport& report,
                                   const std::string& instance_id) {
  json j;
  j["check"] = "packing";
  j["instance_id"] = instance_id;
  json violations = json::array();
  for (const auto& v : report.disjointness_violations) {
    violations.push_back({{"class", v.klass},
                          {"ball_a", v.ball_a},
                          {"ball_b", v.ball_b},
                          {"center_dist", v.center_dist},
                          {"required", v.required}});
  }
  j["violations"] = violations;
  json classes = json::array();
  for (const auto& stat : report.class_stats) {
    classes.push_back({{"class", stat.klass},
                       {"count", stat.count},
                       {"capacity_bound", stat.capacity_bound},
                       {"radius_sum", stat.radius_sum},
                       {"envelope", stat.envelope}});
  }
  j["statistics"] = {
      {"classes", classes},
      {"own_half_radius_overlaps", report.own_half_radius_overlaps},
      {"capacity_exceeded_classes", report.capacity_exceeded_classes},
  };
  return j.dump(2) + "\n";
}

std::string bound_chain_report_to_json(const BoundChainReport& report,
                                       const std::string& instance_id) {
  json j;
  j["check"] = "bound-chain";
  j["instance_id"] = instance_id;
  j["violations"] = json::array();
  if (!report.holds) {
    j["violations"].push_back(
        {{"tour_length", report.tour_length},
         {"radius_sum", report.radius_sum},
         {"closing_edge", report.closing_edge}});
  }
  json classes = json::array();
  for (const auto& stat : report.class_stats) {
    classes.push_back({{"class", stat.klass},
                       {"count", stat.count},
                       {"radius_sum", stat.radius_sum},
                       {"envelope", stat.envelope}});
  }
  j["statistics"] = {
      {"tour_length", report.tour_length},
      {"radius_sum", report.radius_sum},
      {"closing_edge", report.closing_edge},
      {"slack", report.slack},
      {"tail_radius_sum", report.tail_radius_sum},
      {"classes", classes},
  };
  return j.dump(2) + "\n";
}

// ---- minimal TOML ----

const std::string& TomlValue::as_string() const {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  throw ParseError("toml: expected string value");
}

std::int64_t TomlValue::as_int() const {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
  throw ParseError("toml: expected integer value");
}

double TomlValue::as_double() const {
  if (const auto* d = std::get_if<double>(&value)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&value))
    return static_cast<double>(*i);
  throw ParseError("toml: expected numeric value");
}

bool TomlValue::as_bool() const {
  if (const auto* b = std::get_if<bool>(&value)) return *b;
  throw ParseError("toml: expected boolean value");
}

const TomlArray& TomlValue::as_array() const {
  if (const auto* a = std::get_if<TomlArray>(&value)) return *a;
  throw ParseError("toml: expected array value");
}

namespace {

struct TomlCursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char take() {
    const char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }
  void skip_ws_inline() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("toml line " + std::to_string(line) + ": " + what);
  }
};

TomlValue parse_value(TomlCursor& cur);

TomlValue parse_scalar(TomlCursor& cur) {
  cur.skip_ws_inline();
  if (cur.done()) cur.fail("expected value");
  const char c = cur.peek();
  if (c == '"') {
    cur.take();
    std::string s;
    while (!cur.done() && cur.peek() != '"') {
      char ch = cur.take();
      if (ch == '\\' && !cur.done()) {
        const char esc = cur.take();
        switch (esc) {
          case 'n': ch = '\n'; break;
          case 't': ch = '\t'; break;
          case '"': ch = '"'; break;
          case '\\': ch = '\\'; break;
          default: cur.fail("unsupported escape");
        }
      }
      s.push_back(ch);
    }
    if (cur.done()) cur.fail("unterminated string");
    cur.take();
    return {s};
  }
  if (std::isalpha(static_cast<unsigned char>(c))) {
    std::string word;
    while (!cur.done() &&
           std::isalpha(static_cast<unsigned char>(cur.peek())))
      word.push_back(cur.take());
    if (word == "true") return {true};
    if (word == "false") return {false};
    cur.fail("unexpected bare word '" + word + "'");
  }
  // number
  std::string num;
  while (!cur.done()) {
    const char ch = cur.peek();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '+' ||
        ch == '-' || ch == '.' || ch == 'e' || ch == 'E' || ch == '_') {
      if (ch != '_') num.push_back(ch);
      cur.take();
    } else {
      break;
    }
  }
  if (num.empty()) cur.fail("expected value");
  const bool is_float = num.find_first_of(".eE") != std::string::npos;
  if (is_float) {
    double d = 0.0;
    const auto [ptr, ec] =
        std::from_chars(num.data(), num.data() + num.size(), d);
    if (ec != std::errc{} || ptr != num.data() + num.size())
      cur.fail("bad float '" + num + "'");
    return {d};
  }
  std::int64_t i = 0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), i);
  if (ec != std::errc{} || ptr != num.data() + num.size())
    cur.fail("bad integer '" + num + "'");
  return {i};
}

TomlValue parse_value(TomlCursor& cur) {
  cur.skip_ws_inline();
  if (cur.done()) cur.fail("expected value");
  if (cur.peek() != '[') return parse_scalar(cur);
  cur.take();  // '['
  TomlArray arr;
  for (;;) {
    // arrays may span lines
    while (!cur.done() &&
           (cur.peek() == ' ' || cur.peek() == '\t' || cur.peek() == '\n' ||
            cur.peek() == '\r'))
      cur.take();
    if (cur.done()) cur.fail("unterminated array");
    if (cur.peek() == ']') {
      cur.take();
      return {arr};
    }
    arr.push_back(parse_value(cur));
    while (!cur.done() &&
           (cur.peek() == ' ' || cur.peek() == '\t' || cur.peek() == '\n' ||
            cur.peek() == '\r'))
      cur.take();
    if (cur.done()) cur.fail("unterminated array");
    if (cur.peek() == ',') {
      cur.take();
    } else if (cur.peek() != ']') {
      cur.fail("expected ',' or ']' in array");
    }
  }
}

bool valid_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.';
}

}  // namespace

TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  TomlCursor cur{text};
  std::string section;

  while (!cur.done()) {
    cur.skip_ws_inline();
    if (cur.done()) break;
    const char c = cur.peek();
    if (c == '\n' || c == '\r') {
      cur.take();
      continue;
    }
    if (c == '#') {
      while (!cur.done() && cur.peek() != '\n') cur.take();
      continue;
    }
    if (c == '[') {
      cur.take();
      std::string name;
      while (!cur.done() && cur.peek() != ']') name.push_back(cur.take());
      if (cur.done()) cur.fail("unterminated section header");
      cur.take();
      for (char ch : name)
        if (!valid_key_char(ch)) cur.fail("bad section name '" + name + "'");
      section = name;
      continue;
    }
    // key = value
    std::string key;
    while (!cur.done() && valid_key_char(cur.peek())) key.push_back(cur.take());
    if (key.empty()) cur.fail("expected key");
    cur.skip_ws_inline();
    if (cur.done() || cur.take() != '=') cur.fail("expected '=' after key");
    TomlValue value = parse_value(cur);
    cur.skip_ws_inline();
    if (!cur.done() && cur.peek() == '#')
      while (!cur.done() && cur.peek() != '\n') cur.take();
    if (!cur.done() && cur.peek() != '\n' && cur.peek() != '\r')
      cur.fail("trailing characters after value");
    const std::string full = section.empty() ? key : section + "." + key;
    if (table.count(full)) cur.fail("duplicate key '" + full + "'");
    table.emplace(full, std::move(value));
  }
  return table;
}

}  // namespace regtsp
