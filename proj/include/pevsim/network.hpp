#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pevsim/error.hpp"

namespace pevsim {

enum class Area { Residential, Commercial, Other };

inline constexpr std::array<Area, 3> kAllAreas{Area::Residential, Area::Commercial, Area::Other};

constexpr std::string_view area_name(Area area) {
  switch (area) {
    case Area::Residential: return "residential";
    case Area::Commercial: return "commercial";
    case Area::Other: return "other";
  }
  return "other";
}

inline std::optional<Area> parse_area(std::string_view name) {
  for (Area a : kAllAreas) {
    if (area_name(a) == name) return a;
  }
  return std::nullopt;
}

struct Node {
  int id = 0;
  Area area = Area::Other;
  std::optional<std::array<double, 2>> coord;  // layout only
};

struct Edge {
  int a = 0;
  int b = 0;
  double length = 1.0;
};

struct Neighbor {
  int node = 0;
  double length = 0.0;
};

struct PathResult {
  double distance = 0.0;
  std::vector<int> route;
};

/// Dense N x N shortest-path distance table.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(std::size_t n)
      : n_(n), d_(n * n, std::numeric_limits<double>::infinity()) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(int u, int v) const { return d_[index(u, v)]; }
  double& at(int u, int v) { return d_[index(u, v)]; }

  std::span<const double> row(int u) const {
    return std::span<const double>(d_).subspan(static_cast<std::size_t>(u) * n_, n_);
  }

  friend bool operator==(const DistanceTable&, const DistanceTable&) = default;

 private:
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
  }

  std::size_t n_ = 0;
  std::vector<double> d_;
};

namespace detail {

// Single-source Dijkstra over an adjacency list. Distances only.
inline std::vector<double> dijkstra(const std::vector<std::vector<Neighbor>>& adj, int source) {
  std::vector<double> dist(adj.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<std::size_t>(source)] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (const Neighbor& nb : adj[static_cast<std::size_t>(u)]) {
      const double cand = d + nb.length;
      if (cand < dist[static_cast<std::size_t>(nb.node)]) {
        dist[static_cast<std::size_t>(nb.node)] = cand;
        heap.emplace(cand, nb.node);
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Undirected road network with positive edge lengths.
///
/// Nodes are indexed 0..N-1. The graph is validated to be connected and
/// simple on construction, and the all-pairs distance table is computed once
/// and shared by every copy. Instances are immutable.
class Network {
 public:
  static Network build(std::vector<Node> nodes, std::vector<Edge> edges) {
    const std::size_t n = nodes.size();
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "network has no nodes");
    std::sort(nodes.begin(), nodes.end(), [](const Node& x, const Node& y) { return x.id < y.id; });
    for (std::size_t i = 0; i < n; ++i) {
      if (nodes[i].id != static_cast<int>(i)) {
        throw Error(ErrorCode::InvalidNode,
                    "node ids must be unique and contiguous, problem near id " +
                        std::to_string(nodes[i].id));
      }
    }

    std::vector<std::vector<Neighbor>> adj(n);
    for (const Edge& e : edges) {
      const auto valid = [n](int id) { return id >= 0 && static_cast<std::size_t>(id) < n; };
      if (!valid(e.a) || !valid(e.b)) {
        throw Error(ErrorCode::InvalidNode, "edge " + describe(e) + " references an unknown node");
      }
      if (e.a == e.b) throw Error(ErrorCode::DuplicateEdge, "self-loop at node " + std::to_string(e.a));
      if (!(e.length > 0.0) || e.length == std::numeric_limits<double>::infinity()) {
        throw Error(ErrorCode::NonPositiveLength, "edge " + describe(e) + " has length " +
                                                      std::to_string(e.length));
      }
      for (const Neighbor& nb : adj[static_cast<std::size_t>(e.a)]) {
        if (nb.node == e.b) throw Error(ErrorCode::DuplicateEdge, "edge " + describe(e) + " repeated");
      }
      adj[static_cast<std::size_t>(e.a)].push_back({e.b, e.length});
      adj[static_cast<std::size_t>(e.b)].push_back({e.a, e.length});
    }
    for (auto& list : adj) {
      std::sort(list.begin(), list.end(),
                [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
    }

    Network net;
    net.nodes_ = std::move(nodes);
    net.edges_ = std::move(edges);
    net.adj_ = std::move(adj);
    if (!net.connected()) throw Error(ErrorCode::DisconnectedGraph, "network is not connected");

    auto table = std::make_shared<DistanceTable>(n);
    for (std::size_t u = 0; u < n; ++u) {
      const auto dist = detail::dijkstra(net.adj_, static_cast<int>(u));
      for (std::size_t v = 0; v < n; ++v) table->at(static_cast<int>(u), static_cast<int>(v)) = dist[v];
    }
    net.dist_ = std::move(table);
    return net;
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  bool contains(int id) const noexcept { return id >= 0 && static_cast<std::size_t>(id) < nodes_.size(); }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  Area area(int id) const { return node(id).area; }

  /// Neighbors sorted by node id.
  std::span<const Neighbor> neighbors(int id) const { return adj_.at(static_cast<std::size_t>(id)); }
  std::size_t degree(int id) const { return neighbors(id).size(); }

  std::optional<double> edge_length(int u, int v) const {
    for (const Neighbor& nb : neighbors(u)) {
      if (nb.node == v) return nb.length;
    }
    return std::nullopt;
  }

  const DistanceTable& distances() const noexcept { return *dist_; }
  double distance(int u, int v) const { return (*dist_)(u, v); }

 private:
  Network() = default;

  static std::string describe(const Edge& e) {
    return std::to_string(e.a + 1) + "-" + std::to_string(e.b + 1);
  }

  bool connected() const {
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : adj_[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(nb.node)]) {
          seen[static_cast<std::size_t>(nb.node)] = 1;
          ++count;
          stack.push_back(nb.node);
        }
      }
    }
    return count == nodes_.size();
  }

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adj_;
  std::shared_ptr<const DistanceTable> dist_;
};

inline Network build_network(std::vector<Node> nodes, std::vector<Edge> edges) {
  return Network::build(std::move(nodes), std::move(edges));
}

/// Builds a network from a node x road 0/1 incidence matrix (rows are nodes,
/// columns are roads). All nodes get Area::Other unless `areas` is given.
inline Network from_incidence(const std::vector<std::vector<int>>& matrix,
                              std::span<const double> lengths,
                              std::span<const Area> areas = {}) {
  const std::size_t rows = matrix.size();
  const std::size_t cols = rows == 0 ? 0 : matrix.front().size();
  for (const auto& row : matrix) {
    if (row.size() != cols) throw Error(ErrorCode::MalformedColumn, "ragged incidence matrix");
  }
  if (lengths.size() != cols) {
    throw Error(ErrorCode::LengthCountMismatch, std::to_string(cols) + " roads but " +
                                                    std::to_string(lengths.size()) + " lengths");
  }
  if (!areas.empty() && areas.size() != rows) {
    throw Error(ErrorCode::InvalidConfig, "area list does not match node count");
  }

  std::vector<Node> nodes(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    nodes[i].id = static_cast<int>(i);
    if (!areas.empty()) nodes[i].area = areas[i];
  }
  std::vector<Edge> edges;
  edges.reserve(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<int> ends;
    for (std::size_t r = 0; r < rows; ++r) {
      const int v = matrix[r][c];
      if (v != 0 && v != 1) throw Error(ErrorCode::MalformedColumn, "entries must be 0 or 1");
      if (v == 1) ends.push_back(static_cast<int>(r));
    }
    if (ends.size() != 2) {
      throw Error(ErrorCode::MalformedColumn, "road " + std::to_string(c + 1) + " touches " +
                                                  std::to_string(ends.size()) + " nodes");
    }
    edges.push_back({ends[0], ends[1], lengths[c]});
  }
  return build_network(std::move(nodes), std::move(edges));
}

/// Node x road incidence matrix; columns follow the network's edge order.
inline std::vector<std::vector<int>> to_incidence(const Network& net) {
  std::vector<std::vector<int>> m(net.size(), std::vector<int>(net.edges().size(), 0));
  for (std::size_t c = 0; c < net.edges().size(); ++c) {
    const Edge& e = net.edges()[c];
    m[static_cast<std::size_t>(e.a)][c] = 1;
    m[static_cast<std::size_t>(e.b)][c] = 1;
  }
  return m;
}

inline std::vector<double> edge_lengths(const Network& net) {
  std::vector<double> out;
  out.reserve(net.edges().size());
  for (const Edge& e : net.edges()) out.push_back(e.length);
  return out;
}

/// Minimum-distance path from u to v. Among equal-distance predecessors the
/// lowest node id wins, walking back from v.
inline PathResult shortest_path(const Network& net, int u, int v) {
  if (!net.contains(u) || !net.contains(v)) {
    throw Error(ErrorCode::InvalidNode, "shortest_path endpoint out of range");
  }
  const auto row = net.distances().row(u);
  PathResult out;
  out.distance = row[static_cast<std::size_t>(v)];
  out.route.push_back(v);
  int cur = v;
  while (cur != u) {
    const double here = row[static_cast<std::size_t>(cur)];
    int pred = -1;
    for (const Neighbor& nb : net.neighbors(cur)) {  // sorted ascending
      if (row[static_cast<std::size_t>(nb.node)] + nb.length == here) {
        pred = nb.node;
        break;
      }
    }
    // Unreachable on a connected network: Dijkstra's relaxation produced
    // `here` from some neighbor with exactly this sum.
    if (pred < 0) throw Error(ErrorCode::DisconnectedGraph, "no predecessor found");
    cur = pred;
    out.route.push_back(cur);
  }
  std::reverse(out.route.begin(), out.route.end());
  return out;
}

inline DistanceTable all_pairs_distances(const Network& net) { return net.distances(); }

/// Sum of edge lengths along a route, accumulated front to back.
/// Returns nullopt when two consecutive nodes are not adjacent.
inline std::optional<double> route_length(const Network& net, std::span<const int> route) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < route.size(); ++i) {
    const auto len = net.edge_length(route[i], route[i + 1]);
    if (!len) return std::nullopt;
    total += *len;
  }
  return total;
}

/// Rectangular grid network for synthetic case studies. Node (r, c) has id
/// r * cols + c. The left third of the columns is residential, the right third
/// commercial and the rest other, giving separated area clusters.
inline Network grid_network(int rows, int cols, double spacing = 1.0) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::InvalidConfig, "grid needs at least one row and column");
  if (!(spacing > 0.0)) throw Error(ErrorCode::NonPositiveLength, "grid spacing must be positive");
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  const int third = std::max(1, cols / 3);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Node node;
      node.id = r * cols + c;
      node.area = c < third ? Area::Residential : (c >= cols - third ? Area::Commercial : Area::Other);
      node.coord = std::array<double, 2>{c * spacing, r * spacing};
      nodes.push_back(node);
      if (c + 1 < cols) edges.push_back({node.id, node.id + 1, spacing});
      if (r + 1 < rows) edges.push_back({node.id, node.id + cols, spacing});
    }
  }
  return build_network(std::move(nodes), std::move(edges));
}

}  // namespace pevsim
