#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pevsim/error.hpp"
#include "pevsim/network.hpp"
#include "pevsim/random.hpp"

namespace pevsim {

/// One origin-destination journey with a fixed node route. SOC values are in
/// energy units (the same units as rate * distance).
struct Trip {
  int origin = 0;
  int destination = 0;
  std::vector<int> route;
  double soc_ini = 0.0;
  double capacity = 0.0;

  friend bool operator==(const Trip&, const Trip&) = default;
};

using AreaPair = std::pair<Area, Area>;

struct PairWeight {
  Area from = Area::Residential;
  Area to = Area::Commercial;
  double weight = 0.0;
};

struct DemandConfig {
  std::size_t trip_count = 100;
  std::vector<PairWeight> pair_weights;
  double soc_lo = 0.25;  // fractions of capacity
  double soc_hi = 1.0;
  double capacity = 2.0;
  double rate = 1.0;  // energy per distance unit, used for the first-leg floor
  std::uint64_t seed = 7;
};

/// Weight for each of the 9 ordered area pairs, indexed from * 3 + to.
/// Later entries for the same pair overwrite earlier ones.
inline std::array<double, 9> pair_weight_table(const DemandConfig& cfg) {
  std::array<double, 9> w{};
  for (const PairWeight& pw : cfg.pair_weights) {
    w[static_cast<std::size_t>(pw.from) * 3 + static_cast<std::size_t>(pw.to)] = pw.weight;
  }
  return w;
}

inline void validate(const DemandConfig& cfg) {
  double total = 0.0;
  for (const PairWeight& pw : cfg.pair_weights) {
    if (!(pw.weight >= 0.0)) throw Error(ErrorCode::InvalidConfig, "pair weights must be nonnegative");
  }
  for (double w : pair_weight_table(cfg)) total += w;
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidConfig, "pair weights are all zero");
  if (!(cfg.soc_lo > 0.0 && cfg.soc_lo <= cfg.soc_hi && cfg.soc_hi <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "soc_ini_range must satisfy 0 < lo <= hi <= 1");
  }
  if (!(cfg.capacity > 0.0)) throw Error(ErrorCode::InvalidConfig, "capacity must be positive");
  if (!(cfg.rate > 0.0)) throw Error(ErrorCode::InvalidConfig, "rate must be positive");
}

/// Checks the Trip invariants against a network: endpoints match the route,
/// the route follows edges, and 0 < soc_ini <= capacity.
inline void validate_trip(const Network& net, const Trip& trip) {
  if (trip.route.empty()) throw Error(ErrorCode::SchemaError, "trip route is empty");
  for (int id : trip.route) {
    if (!net.contains(id)) throw Error(ErrorCode::UnknownNode, "route node " + std::to_string(id + 1));
  }
  if (trip.route.front() != trip.origin || trip.route.back() != trip.destination) {
    throw Error(ErrorCode::SchemaError, "route must start at origin and end at destination");
  }
  for (std::size_t i = 0; i + 1 < trip.route.size(); ++i) {
    if (!net.edge_length(trip.route[i], trip.route[i + 1])) {
      throw Error(ErrorCode::RouteNotConnected, "no road between " + std::to_string(trip.route[i] + 1) +
                                                    " and " + std::to_string(trip.route[i + 1] + 1));
    }
  }
  if (!(trip.capacity > 0.0) || !(trip.soc_ini > 0.0) || trip.soc_ini > trip.capacity) {
    throw Error(ErrorCode::SocOutOfRange, "need 0 < soc_ini <= capacity");
  }
}

/// Samples trips between area clusters.
///
/// Each trip draws an ordered area pair with probability proportional to its
/// weight, then an origin and a distinct destination uniformly within those
/// areas. The route is the network shortest path. soc_ini is uniform in
/// [lo * C, hi * C] and raised to the first leg's energy when below it, so a
/// driver never sets off unable to reach the next node.
inline std::vector<Trip> generate_trips(const Network& net, const DemandConfig& cfg) {
  validate(cfg);
  const auto weights = pair_weight_table(cfg);

  std::array<std::vector<int>, 3> members;
  for (const Node& n : net.nodes()) members[static_cast<std::size_t>(n.area)].push_back(n.id);
  for (std::size_t i = 0; i < 9; ++i) {
    if (weights[i] <= 0.0) continue;
    const auto& from = members[i / 3];
    const auto& to = members[i % 3];
    if (from.empty() || to.empty()) {
      throw Error(ErrorCode::EmptyAreaClass,
                  "area '" + std::string(area_name(kAllAreas[from.empty() ? i / 3 : i % 3])) +
                      "' has a nonzero weight but no nodes");
    }
    if (i / 3 == i % 3 && from.size() < 2) {
      throw Error(ErrorCode::EmptyAreaClass, "area '" + std::string(area_name(kAllAreas[i / 3])) +
                                                 "' needs two nodes for trips within it");
    }
  }

  std::array<double, 9> cumulative{};
  double running = 0.0;
  for (std::size_t i = 0; i < 9; ++i) {
    running += weights[i];
    cumulative[i] = running;
  }

  Rng rng(cfg.seed);
  std::vector<Trip> trips;
  trips.reserve(cfg.trip_count);
  for (std::size_t t = 0; t < cfg.trip_count; ++t) {
    const double pick = rng.uniform() * running;
    std::size_t pair = 0;
    while (pair < 8 && (cumulative[pair] <= pick || weights[pair] <= 0.0)) ++pair;
    const auto& from = members[pair / 3];
    const auto& to = members[pair % 3];

    Trip trip;
    trip.origin = from[rng.below(from.size())];
    do {
      trip.destination = to[rng.below(to.size())];
    } while (trip.destination == trip.origin);
    trip.route = shortest_path(net, trip.origin, trip.destination).route;
    trip.capacity = cfg.capacity;
    trip.soc_ini = rng.uniform(cfg.soc_lo * cfg.capacity, cfg.soc_hi * cfg.capacity);

    const double first_leg = cfg.rate * *net.edge_length(trip.route[0], trip.route[1]);
    if (first_leg > cfg.capacity) {
      throw Error(ErrorCode::InvalidConfig, "first leg of a generated trip exceeds battery capacity");
    }
    if (trip.soc_ini < first_leg) trip.soc_ini = first_leg;
    trips.push_back(std::move(trip));
  }
  return trips;
}

/// Trip counts per ordered area pair (origin area, destination area).
inline std::array<std::size_t, 9> area_pair_counts(const Network& net, const std::vector<Trip>& trips) {
  std::array<std::size_t, 9> counts{};
  for (const Trip& t : trips) {
    ++counts[static_cast<std::size_t>(net.area(t.origin)) * 3 + static_cast<std::size_t>(net.area(t.destination))];
  }
  return counts;
}

}  // namespace pevsim
