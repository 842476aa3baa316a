#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pevsim/demand.hpp"
#include "pevsim/error.hpp"
#include "pevsim/network.hpp"
#include "pevsim/parallel.hpp"

namespace pevsim {

/// A set of exactly k station nodes out of N. Equivalent to a length-N 0/1
/// chromosome with k ones.
class Deployment {
 public:
  Deployment() = default;

  static Deployment from_stations(std::size_t node_count, std::vector<int> stations) {
    std::sort(stations.begin(), stations.end());
    for (std::size_t i = 0; i < stations.size(); ++i) {
      if (stations[i] < 0 || static_cast<std::size_t>(stations[i]) >= node_count) {
        throw Error(ErrorCode::UnknownNode, "station " + std::to_string(stations[i] + 1) + " is not a node");
      }
      if (i > 0 && stations[i] == stations[i - 1]) {
        throw Error(ErrorCode::InvalidCardinality, "station " + std::to_string(stations[i] + 1) + " listed twice");
      }
    }
    Deployment d;
    d.node_count_ = node_count;
    d.stations_ = std::move(stations);
    return d;
  }

  static Deployment from_bits(std::span<const std::uint8_t> bits) {
    std::vector<int> stations;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) stations.push_back(static_cast<int>(i));
    }
    return from_stations(bits.size(), std::move(stations));
  }

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t size() const noexcept { return stations_.size(); }
  const std::vector<int>& stations() const noexcept { return stations_; }

  bool contains(int id) const { return std::binary_search(stations_.begin(), stations_.end(), id); }

  std::vector<std::uint8_t> bits() const {
    std::vector<std::uint8_t> b(node_count_, 0);
    for (int s : stations_) b[static_cast<std::size_t>(s)] = 1;
    return b;
  }

  friend bool operator==(const Deployment&, const Deployment&) = default;

 private:
  std::size_t node_count_ = 0;
  std::vector<int> stations_;  // sorted ascending
};

struct EvalParams {
  double alpha = 1.0;  // weight on detour energy when the trip is not finished
  double beta = 2.0;   // weight on the energy still needed to finish the route
  double rate = 1.0;   // energy per distance unit
};

inline void validate(const EvalParams& p) {
  if (!(p.alpha >= 0.0) || !(p.beta >= p.alpha) || !(p.beta >= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "need beta >= alpha >= 0 and beta >= 1");
  }
  if (!(p.rate > 0.0) || !std::isfinite(p.rate)) throw Error(ErrorCode::InvalidConfig, "rate must be positive");
}

/// Absolute slack for energy comparisons, so a battery holding exactly the
/// energy of the remaining legs is not declared short by accumulated rounding.
inline constexpr double kEnergySlack = 1e-9;

constexpr bool fits_within(double cost, double budget) noexcept { return cost <= budget + kEnergySlack; }

struct DetourEvent {
  int at_node = 0;             // forced-detour point u
  std::size_t route_index = 0; // position of u in the route
  int station = 0;
  int next_node = 0;           // next route node v
  double soc_on_arrival = 0.0; // SOC when the PEV reached u
  double extra_soc = 0.0;      // rate*(d(u,s)+d(s,v)) - rate*len(u,v), floored at 0
};

/// Full record of the greedy forward simulation of one trip.
///
/// Index m in the per-m vectors is a detour budget: a run allowed m detours
/// takes the first m events and strands at the next forced-detour point.
struct DetourTrace {
  std::vector<DetourEvent> events;
  bool reached = false;
  std::vector<std::optional<std::size_t>> strand_index_per_m;  // route index, absent if finished
  std::vector<std::optional<int>> strand_node_per_m;
  std::vector<double> soc_rest_per_m;
  std::vector<double> soc_detour_prefix;  // size n+1, prefix[0] == 0

  std::size_t detours() const noexcept { return events.size(); }
  /// True when the SOC was short at least once (Scenario Two).
  bool forced() const noexcept { return !events.empty() || !reached; }
};

struct DetourChoice {
  int station = 0;
  double distance = 0.0;  // d(u,s) + d(s,v)
};

/// Best station for a forced detour from u back to route node v: reachable
/// with the current SOC, able to reach v on a full charge, minimizing
/// d(u,s) + d(s,v). Ties go to the lowest station id.
inline std::optional<DetourChoice> best_detour(const Network& net, const Deployment& deployment, int u, int v,
                                               double soc, double capacity, double rate) {
  std::optional<DetourChoice> best;
  const DistanceTable& d = net.distances();
  for (int s : deployment.stations()) {
    if (!fits_within(rate * d(u, s), soc) || !fits_within(rate * d(s, v), capacity)) continue;
    const double total = d(u, s) + d(s, v);
    if (!best || total < best->distance) best = DetourChoice{s, total};
  }
  return best;
}

inline DetourTrace simulate_trip(const Network& net, const Trip& trip, const Deployment& deployment,
                                 const EvalParams& params) {
  if (deployment.node_count() != net.size()) {
    throw Error(ErrorCode::InvalidCardinality, "deployment size does not match the network");
  }
  const auto& route = trip.route;
  const std::size_t legs = route.empty() ? 0 : route.size() - 1;
  const double rate = params.rate;

  std::vector<double> leg_len(legs);
  for (std::size_t i = 0; i < legs; ++i) {
    const auto len = net.edge_length(route[i], route[i + 1]);
    if (!len) throw Error(ErrorCode::RouteNotConnected, "trip route leaves the road network");
    leg_len[i] = *len;
  }
  // Remaining route distance from each route index.
  std::vector<double> remaining(route.size(), 0.0);
  for (std::size_t i = legs; i-- > 0;) remaining[i] = leg_len[i] + remaining[i + 1];

  DetourTrace trace;
  std::optional<std::size_t> strand;
  double soc = trip.soc_ini;
  for (std::size_t i = 0; i < legs; ++i) {
    const int u = route[i];
    const int v = route[i + 1];
    const double leg = rate * leg_len[i];
    if (fits_within(leg, soc)) {
      soc = std::max(0.0, soc - leg);
      continue;
    }
    const auto choice = best_detour(net, deployment, u, v, soc, trip.capacity, rate);
    if (!choice) {
      strand = i;
      break;
    }
    DetourEvent ev;
    ev.at_node = u;
    ev.route_index = i;
    ev.station = choice->station;
    ev.next_node = v;
    ev.soc_on_arrival = soc;
    ev.extra_soc = std::max(0.0, rate * choice->distance - leg);
    trace.events.push_back(ev);
    soc = std::max(0.0, trip.capacity - rate * net.distance(choice->station, v));
  }
  trace.reached = !strand.has_value();

  const std::size_t n = trace.events.size();
  trace.soc_detour_prefix.assign(n + 1, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    trace.soc_detour_prefix[m + 1] = trace.soc_detour_prefix[m] + trace.events[m].extra_soc;
  }
  for (std::size_t m = 0; m <= n; ++m) {
    std::optional<std::size_t> idx = m < n ? std::optional<std::size_t>(trace.events[m].route_index) : strand;
    trace.strand_index_per_m.push_back(idx);
    trace.strand_node_per_m.push_back(idx ? std::optional<int>(route[*idx]) : std::nullopt);
    trace.soc_rest_per_m.push_back(idx ? rate * remaining[*idx] : 0.0);
  }
  return trace;
}

/// E_m: unsatisfied SOC of the run limited to m detours.
inline double unsatisfied_soc(const DetourTrace& trace, std::size_t m, const EvalParams& params) {
  const std::size_t n = trace.detours();
  if (m > n) {
    throw Error(ErrorCode::IndexOutOfRange, "detour budget " + std::to_string(m) + " exceeds n = " + std::to_string(n));
  }
  if (m == n && trace.reached) return trace.soc_detour_prefix[n];
  return params.alpha * trace.soc_detour_prefix[m] + params.beta * trace.soc_rest_per_m[m];
}

struct TripOutcome {
  double score = 0.0;
  std::size_t chosen_m = 0;
  DetourTrace trace;
};

/// Scenario One scores 0. Otherwise the minimum of E_0..E_n, ties to the
/// smallest m.
inline TripOutcome evaluate_trip(const Network& net, const Trip& trip, const Deployment& deployment,
                                 const EvalParams& params) {
  TripOutcome out;
  out.trace = simulate_trip(net, trip, deployment, params);
  if (!out.trace.forced()) return out;
  out.score = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m <= out.trace.detours(); ++m) {
    const double e = unsatisfied_soc(out.trace, m, params);
    if (e < out.score) {
      out.score = e;
      out.chosen_m = m;
    }
  }
  return out;
}

inline double trip_score(const Network& net, const Trip& trip, const Deployment& deployment,
                         const EvalParams& params) {
  return evaluate_trip(net, trip, deployment, params).score;
}

/// Total unsatisfied SOC U over all trips. Trip scores may be computed on
/// several threads but are always summed in trip order.
inline double deployment_score(const Network& net, std::span<const Trip> trips, const Deployment& deployment,
                               const EvalParams& params, unsigned threads = 1) {
  std::vector<double> scores(trips.size(), 0.0);
  parallel_for(trips.size(), threads,
               [&](std::size_t i) { scores[i] = trip_score(net, trips[i], deployment, params); });
  double total = 0.0;
  for (double s : scores) total += s;
  return total;
}

/// Fit value of a deployment with total unsatisfied SOC u.
constexpr double fitness(double u) noexcept { return 1.0 / (1.0 + u); }

}  // namespace pevsim
