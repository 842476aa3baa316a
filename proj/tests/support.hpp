#pragma once

// Fixtures and independent oracles shared by the test suites. Nothing here
// calls into the code paths it is used to check.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pevsim/demand.hpp"
#include "pevsim/evaluation.hpp"
#include "pevsim/network.hpp"
#include "pevsim/random.hpp"

namespace pevsim::testing {

/// Total unsatisfied SOC of stations {1,4} on the golden 100-trip set with
/// default parameters, recorded from an oracle run.
inline constexpr double kGoldenUStations14 = 58.0;

inline std::string data_path(const std::string& name) { return std::string(PEVSIM_DATA_DIR) + "/" + name; }

/// Six-node road network of the incidence-matrix fixture, unit lengths.
/// Ids are 0-based: file node 1 is id 0. Areas {1,2} residential, {4,5}
/// commercial, {3,6} other.
inline Network table_one(double length = 1.0) {
  const std::vector<std::pair<int, int>> roads{{1, 2}, {1, 3}, {2, 4}, {4, 5}, {3, 5},
                                               {1, 6}, {4, 6}, {2, 6}, {5, 6}};
  const Area areas[] = {Area::Residential, Area::Residential, Area::Other,
                        Area::Commercial,  Area::Commercial,  Area::Other};
  std::vector<Node> nodes;
  for (int i = 0; i < 6; ++i) nodes.push_back({i, areas[i], std::nullopt});
  std::vector<Edge> edges;
  for (auto [a, b] : roads) edges.push_back({a - 1, b - 1, length});
  return build_network(std::move(nodes), std::move(edges));
}

inline const std::vector<std::vector<int>>& table_one_incidence() {
  static const std::vector<std::vector<int>> m{
      {1, 1, 0, 0, 0, 1, 0, 0, 0}, {1, 0, 1, 0, 0, 0, 0, 1, 0}, {0, 1, 0, 0, 1, 0, 0, 0, 0},
      {0, 0, 1, 1, 0, 0, 1, 0, 0}, {0, 0, 0, 1, 1, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 1, 1, 1, 1}};
  return m;
}

/// Converts 1-based ids (as written in files and examples) to internal ids.
inline std::vector<int> ids(std::initializer_list<int> one_based) {
  std::vector<int> out;
  for (int id : one_based) out.push_back(id - 1);
  return out;
}

/// Random connected graph: a random spanning tree plus extra edges. Areas
/// cycle through the three classes.
inline Network random_connected(Rng& rng, std::size_t n, double extra_edge_prob, bool integer_lengths = false) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({static_cast<int>(i), kAllAreas[i % 3], std::nullopt});
  std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
  std::vector<Edge> edges;
  const auto length = [&] {
    return integer_lengths ? static_cast<double>(1 + rng.below(9)) : rng.uniform(0.1, 5.0);
  };
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = static_cast<std::size_t>(rng.below(v));
    used[u][v] = used[v][u] = 1;
    edges.push_back({static_cast<int>(u), static_cast<int>(v), length()});
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (!used[u][v] && rng.bernoulli(extra_edge_prob)) {
        used[u][v] = used[v][u] = 1;
        edges.push_back({static_cast<int>(u), static_cast<int>(v), length()});
      }
    }
  }
  return build_network(std::move(nodes), std::move(edges));
}

/// Minimum over every simple path from u to v, lengths summed from u onward.
inline double enumerate_simple_paths(const Network& net, int u, int v) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> on_path(net.size(), 0);
  std::function<void(int, double)> dfs = [&](int at, double dist) {
    if (at == v) {
      best = std::min(best, dist);
      return;
    }
    on_path[static_cast<std::size_t>(at)] = 1;
    for (const Edge& e : net.edges()) {
      int next = -1;
      if (e.a == at) next = e.b;
      if (e.b == at) next = e.a;
      if (next >= 0 && !on_path[static_cast<std::size_t>(next)]) dfs(next, dist + e.length);
    }
    on_path[static_cast<std::size_t>(at)] = 0;
  };
  dfs(u, 0.0);
  return best;
}

inline std::vector<std::vector<double>> floyd_warshall(const Network& net) {
  const std::size_t n = net.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const Edge& e : net.edges()) {
    d[static_cast<std::size_t>(e.a)][static_cast<std::size_t>(e.b)] = e.length;
    d[static_cast<std::size_t>(e.b)][static_cast<std::size_t>(e.a)] = e.length;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

inline double edge_len(const Network& net, int a, int b) {
  for (const Edge& e : net.edges()) {
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.length;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Exhaustive unsatisfied-SOC search for one trip. At every forced-detour
/// point it branches over "strand here" and every feasible station, and
/// returns the least outcome: 0 when the SOC never runs short, the summed
/// detour excess when the route is finished, and
/// alpha * excess + beta * rate * remaining-route otherwise.
inline double exhaustive_trip_score(const Network& net, const std::vector<std::vector<double>>& dist,
                                    const Trip& trip, const std::vector<int>& stations, const EvalParams& p) {
  const auto& route = trip.route;
  const std::size_t legs = route.size() - 1;
  const auto remaining = [&](std::size_t i) {
    double total = 0.0;
    for (std::size_t j = legs; j-- > i;) total += edge_len(net, route[j], route[j + 1]);
    return total;
  };
  const auto d = [&](int a, int b) { return dist[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };

  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, double, double, bool)> walk = [&](std::size_t i, double soc, double excess,
                                                                    bool forced) {
    if (i == legs) {
      best = std::min(best, forced ? excess : 0.0);
      return;
    }
    const int u = route[i];
    const int v = route[i + 1];
    const double leg = p.rate * edge_len(net, u, v);
    if (leg <= soc + kEnergySlack) {
      walk(i + 1, std::max(0.0, soc - leg), excess, forced);
      return;
    }
    best = std::min(best, p.alpha * excess + p.beta * (p.rate * remaining(i)));
    for (int s : stations) {
      if (p.rate * d(u, s) > soc + kEnergySlack || p.rate * d(s, v) > trip.capacity + kEnergySlack) continue;
      const double extra = std::max(0.0, p.rate * (d(u, s) + d(s, v)) - leg);
      walk(i + 1, std::max(0.0, trip.capacity - p.rate * d(s, v)), excess + extra, true);
    }
  };
  walk(0, trip.soc_ini, 0.0, false);
  return best;
}

inline std::vector<std::uint8_t> bits_of_mask(std::size_t n, std::uint32_t mask) {
  std::vector<std::uint8_t> bits(n, 0);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (mask >> i) & 1u;
  return bits;
}

/// Random simple route of 1..max_legs legs following edges.
inline std::vector<int> random_simple_route(const Network& net, Rng& rng, std::size_t max_legs) {
  while (true) {
    std::vector<int> route{static_cast<int>(rng.below(net.size()))};
    const std::size_t target = 1 + static_cast<std::size_t>(rng.below(max_legs));
    while (route.size() <= target) {
      std::vector<int> options;
      for (const Neighbor& nb : net.neighbors(route.back())) {
        if (std::find(route.begin(), route.end(), nb.node) == route.end()) options.push_back(nb.node);
      }
      if (options.empty()) break;
      route.push_back(options[rng.below(options.size())]);
    }
    if (route.size() >= 2) return route;
  }
}

/// Random trip along `route` that honours the first-leg rule.
inline Trip random_trip(const Network& net, Rng& rng, std::vector<int> route, double rate, double capacity) {
  Trip t;
  t.origin = route.front();
  t.destination = route.back();
  t.capacity = capacity;
  const double first = rate * *net.edge_length(route[0], route[1]);
  t.soc_ini = std::min(capacity, std::max(first, rng.uniform(0.05, 1.0) * capacity));
  t.route = std::move(route);
  return t;
}

}  // namespace pevsim::testing
