#pragma once

#include <charconv>
#include <cstddef>
#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pevsim/demand.hpp"
#include "pevsim/error.hpp"
#include "pevsim/network.hpp"

// File formats. Node ids are 1-based in every file and 0-based in memory.

namespace pevsim {

using json = nlohmann::json;

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, what + ": " + e.what());
  }
}

namespace detail {

template <typename T>
T field(const json& obj, const char* key, const char* what) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::SchemaError, std::string(what) + " is missing '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::SchemaError, std::string(what) + " field '" + key + "' has the wrong type");
  }
}

inline int file_id(const json& obj, const char* key, const char* what) {
  const auto v = field<long long>(obj, key, what);
  if (v < 1) throw Error(ErrorCode::SchemaError, std::string(what) + " ids are 1-based");
  return static_cast<int>(v - 1);
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (auto& s : out) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  }
  return out;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace detail

// ---------------------------------------------------------------- network

inline Network network_from_json(const json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges") || !j["nodes"].is_array() ||
      !j["edges"].is_array()) {
    throw Error(ErrorCode::SchemaError, "network needs 'nodes' and 'edges' arrays");
  }
  std::vector<Node> nodes;
  for (const json& jn : j["nodes"]) {
    Node n;
    n.id = detail::file_id(jn, "id", "node");
    const auto area = parse_area(jn.value("area", std::string("other")));
    if (!area) throw Error(ErrorCode::SchemaError, "unknown area '" + jn.value("area", std::string()) + "'");
    n.area = *area;
    if (jn.contains("x") && jn.contains("y")) {
      n.coord = std::array<double, 2>{detail::field<double>(jn, "x", "node"), detail::field<double>(jn, "y", "node")};
    }
    nodes.push_back(n);
  }
  std::vector<Edge> edges;
  for (const json& je : j["edges"]) {
    edges.push_back({detail::file_id(je, "a", "edge"), detail::file_id(je, "b", "edge"),
                     detail::field<double>(je, "length", "edge")});
  }
  return build_network(std::move(nodes), std::move(edges));
}

inline json network_to_json(const Network& net) {
  json nodes = json::array();
  for (const Node& n : net.nodes()) {
    json jn = {{"id", n.id + 1}, {"area", std::string(area_name(n.area))}};
    if (n.coord) {
      jn["x"] = (*n.coord)[0];
      jn["y"] = (*n.coord)[1];
    }
    nodes.push_back(std::move(jn));
  }
  json edges = json::array();
  for (const Edge& e : net.edges()) edges.push_back({{"a", e.a + 1}, {"b", e.b + 1}, {"length", e.length}});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline Network load_network(const std::string& path) {
  return network_from_json(parse_json_text(read_text(path), path));
}

inline void save_network(const Network& net, const std::string& path) {
  write_text(path, network_to_json(net).dump(2) + "\n");
}

/// Incidence CSV: a header row of road ids, then one row of 0/1 per node.
/// Lengths CSV: "road,length" rows (a non-numeric header line is skipped).
inline Network parse_incidence_csv(const std::string& matrix_text, const std::string& lengths_text) {
  const auto rows = detail::lines_of(matrix_text);
  if (rows.empty()) throw Error(ErrorCode::SchemaError, "incidence CSV is empty");
  const auto header = detail::split(rows[0], ',');
  std::vector<long long> road_ids;
  for (const auto& h : header) {
    long long id = 0;
    if (!detail::parse_number(h, id)) throw Error(ErrorCode::SchemaError, "road id '" + h + "' is not an integer");
    road_ids.push_back(id);
  }
  std::vector<std::vector<int>> matrix;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto cells = detail::split(rows[r], ',');
    if (cells.size() != road_ids.size()) throw Error(ErrorCode::MalformedColumn, "row width differs from header");
    std::vector<int> row;
    for (const auto& c : cells) {
      int v = 0;
      if (!detail::parse_number(c, v)) throw Error(ErrorCode::SchemaError, "matrix entry '" + c + "' is not 0/1");
      row.push_back(v);
    }
    matrix.push_back(std::move(row));
  }

  std::vector<double> lengths(road_ids.size(), 0.0);
  std::vector<char> seen(road_ids.size(), 0);
  std::size_t given = 0;
  for (const auto& line : detail::lines_of(lengths_text)) {
    const auto cells = detail::split(line, ',');
    long long id = 0;
    double len = 0.0;
    if (cells.size() != 2 || !detail::parse_number(cells[0], id) || !detail::parse_number(cells[1], len)) {
      if (given == 0) continue;  // header
      throw Error(ErrorCode::SchemaError, "bad lengths row '" + line + "'");
    }
    ++given;
    const auto it = std::find(road_ids.begin(), road_ids.end(), id);
    if (it == road_ids.end()) throw Error(ErrorCode::LengthCountMismatch, "length for unknown road " + cells[0]);
    const auto col = static_cast<std::size_t>(it - road_ids.begin());
    if (seen[col]) throw Error(ErrorCode::LengthCountMismatch, "road " + cells[0] + " has two lengths");
    seen[col] = 1;
    lengths[col] = len;
  }
  if (given != road_ids.size()) {
    throw Error(ErrorCode::LengthCountMismatch,
                std::to_string(road_ids.size()) + " roads but " + std::to_string(given) + " lengths");
  }
  return from_incidence(matrix, lengths);
}

inline std::string incidence_to_csv(const Network& net) {
  const auto m = to_incidence(net);
  std::string out;
  for (std::size_t c = 0; c < net.edges().size(); ++c) out += (c ? "," : "") + std::to_string(c + 1);
  out += "\n";
  for (const auto& row : m) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + std::to_string(row[c]);
    out += "\n";
  }
  return out;
}

inline std::string lengths_to_csv(const Network& net) {
  std::string out = "road,length\n";
  for (std::size_t c = 0; c < net.edges().size(); ++c) {
    out += std::to_string(c + 1) + "," + format_double(net.edges()[c].length) + "\n";
  }
  return out;
}

/// Graphviz export. Nodes carry `area` and `station` attributes; stations are
/// filled for plotting.
inline std::string network_to_dot(const Network& net, const std::vector<int>& stations = {}) {
  std::vector<char> is_station(net.size(), 0);
  for (int s : stations) is_station.at(static_cast<std::size_t>(s)) = 1;
  std::string out = "graph network {\n";
  for (const Node& n : net.nodes()) {
    const bool st = is_station[static_cast<std::size_t>(n.id)];
    out += "  " + std::to_string(n.id + 1) + " [area=\"" + std::string(area_name(n.area)) +
           "\", station=" + (st ? "true" : "false");
    if (n.coord) out += ", pos=\"" + format_double((*n.coord)[0]) + "," + format_double((*n.coord)[1]) + "!\"";
    if (st) out += ", style=filled, fillcolor=yellow";
    out += "];\n";
  }
  for (const Edge& e : net.edges()) {
    out += "  " + std::to_string(e.a + 1) + " -- " + std::to_string(e.b + 1) + " [length=" +
           format_double(e.length) + "];\n";
  }
  out += "}\n";
  return out;
}

// ------------------------------------------------------------------ trips

inline json trip_to_json(const Trip& t) {
  json route = json::array();
  for (int id : t.route) route.push_back(id + 1);
  return {{"origin", t.origin + 1},
          {"destination", t.destination + 1},
          {"route", std::move(route)},
          {"soc_ini", t.soc_ini},
          {"capacity", t.capacity}};
}

/// Parses one trip record. `default_capacity` applies when the record omits
/// "capacity".
inline Trip trip_from_json(const json& j, std::optional<double> default_capacity = std::nullopt) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "trip must be an object");
  Trip t;
  t.origin = detail::file_id(j, "origin", "trip");
  t.destination = detail::file_id(j, "destination", "trip");
  const auto route = detail::field<std::vector<long long>>(j, "route", "trip");
  for (long long id : route) {
    if (id < 1) throw Error(ErrorCode::SchemaError, "trip route ids are 1-based");
    t.route.push_back(static_cast<int>(id - 1));
  }
  t.soc_ini = detail::field<double>(j, "soc_ini", "trip");
  if (j.contains("capacity")) {
    t.capacity = detail::field<double>(j, "capacity", "trip");
  } else if (default_capacity) {
    t.capacity = *default_capacity;
  } else {
    throw Error(ErrorCode::SchemaError, "trip is missing 'capacity'");
  }
  return t;
}

inline std::string trips_to_json_text(const std::vector<Trip>& trips) {
  json arr = json::array();
  for (const Trip& t : trips) arr.push_back(trip_to_json(t));
  return arr.dump(2) + "\n";
}

/// Parses a trips JSON array and validates every trip against `net`.
inline std::vector<Trip> parse_trips_json(const std::string& text, const Network& net) {
  const json j = parse_json_text(text, "trips");
  if (!j.is_array()) throw Error(ErrorCode::SchemaError, "trips file must hold a JSON array");
  std::vector<Trip> trips;
  for (const json& jt : j) {
    trips.push_back(trip_from_json(jt));
    validate_trip(net, trips.back());
  }
  return trips;
}

inline std::string trips_to_csv(const std::vector<Trip>& trips) {
  std::string out = "origin,destination,route,soc_ini,capacity\n";
  for (const Trip& t : trips) {
    std::string route;
    for (std::size_t i = 0; i < t.route.size(); ++i) route += (i ? "-" : "") + std::to_string(t.route[i] + 1);
    out += std::to_string(t.origin + 1) + "," + std::to_string(t.destination + 1) + "," + route + "," +
           format_double(t.soc_ini) + "," + format_double(t.capacity) + "\n";
  }
  return out;
}

inline std::vector<Trip> parse_trips_csv(const std::string& text, const Network& net) {
  const auto rows = detail::lines_of(text);
  std::vector<Trip> trips;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto cells = detail::split(rows[r], ',');
    if (r == 0 && !cells.empty() && cells[0] == "origin") continue;
    if (cells.size() != 5) throw Error(ErrorCode::SchemaError, "trip CSV rows need 5 columns");
    Trip t;
    long long o = 0, d = 0;
    if (!detail::parse_number(cells[0], o) || !detail::parse_number(cells[1], d) || o < 1 || d < 1 ||
        !detail::parse_number(cells[3], t.soc_ini) || !detail::parse_number(cells[4], t.capacity)) {
      throw Error(ErrorCode::SchemaError, "bad trip CSV row '" + rows[r] + "'");
    }
    t.origin = static_cast<int>(o - 1);
    t.destination = static_cast<int>(d - 1);
    for (const auto& part : detail::split(cells[2], '-')) {
      long long id = 0;
      if (!detail::parse_number(part, id) || id < 1) throw Error(ErrorCode::SchemaError, "bad route '" + cells[2] + "'");
      t.route.push_back(static_cast<int>(id - 1));
    }
    validate_trip(net, t);
    trips.push_back(std::move(t));
  }
  return trips;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

/// Loads trips; ".csv" selects the CSV variant, anything else JSON.
inline std::vector<Trip> load_trips(const std::string& path, const Network& net) {
  const std::string text = read_text(path);
  return ends_with(path, ".csv") ? parse_trips_csv(text, net) : parse_trips_json(text, net);
}

inline void save_trips(const std::vector<Trip>& trips, const std::string& path) {
  write_text(path, ends_with(path, ".csv") ? trips_to_csv(trips) : trips_to_json_text(trips));
}

// ---------------------------------------------------------- demand config

/// {"trip_count": 100, "seed": 7, "capacity": 2.0, "rate": 1.0,
///  "soc_ini_range": [0.25, 1.0], "default_weight": 1.0,
///  "pair_weights": [{"from": "residential", "to": "commercial", "weight": 4}]}
/// default_weight (0 when absent) applies to every ordered pair not listed.
inline DemandConfig demand_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "demand config must be an object");
  DemandConfig cfg;
  try {
    const auto count = j.value("trip_count", static_cast<long long>(cfg.trip_count));
    if (count < 0) throw Error(ErrorCode::InvalidConfig, "trip_count must be nonnegative");
    cfg.trip_count = static_cast<std::size_t>(count);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.capacity = j.value("capacity", cfg.capacity);
    cfg.rate = j.value("rate", cfg.rate);
    if (j.contains("soc_ini_range")) {
      const auto range = j.at("soc_ini_range").get<std::vector<double>>();
      if (range.size() != 2) throw Error(ErrorCode::SchemaError, "soc_ini_range needs two values");
      cfg.soc_lo = range[0];
      cfg.soc_hi = range[1];
    }
    const double fallback = j.value("default_weight", 0.0);
    for (Area from : kAllAreas) {
      for (Area to : kAllAreas) {
        if (fallback != 0.0) cfg.pair_weights.push_back({from, to, fallback});
      }
    }
    for (const json& jw : j.value("pair_weights", json::array())) {
      const auto from = parse_area(detail::field<std::string>(jw, "from", "pair weight"));
      const auto to = parse_area(detail::field<std::string>(jw, "to", "pair weight"));
      if (!from || !to) throw Error(ErrorCode::SchemaError, "unknown area in pair_weights");
      cfg.pair_weights.push_back({*from, *to, detail::field<double>(jw, "weight", "pair weight")});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("demand config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

}  // namespace pevsim
