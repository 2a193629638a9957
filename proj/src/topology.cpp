#include "dflsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dflsim {

std::int64_t squared_distance(GridLocation a, GridLocation b) {
  const std::int64_t dp = a.p - b.p;
  const std::int64_t dq = a.q - b.q;
  return dp * dp + dq * dq;
}

double euclidean_distance(GridLocation a, GridLocation b) {
  return std::sqrt(static_cast<double>(squared_distance(a, b)));
}

bool within_radius(GridLocation a, GridLocation b, double radius) {
  if (radius < 0.0) return false;
  if (std::isinf(radius)) return true;
  // Squared integer distances are far below 2^53, so the cast is exact.
  return static_cast<double>(squared_distance(a, b)) <= radius * radius;
}

Grid::Grid(int size) : size_(size) {
  if (size < 1) throw std::invalid_argument("grid size must be >= 1");
}

bool Grid::contains(GridLocation loc) const {
  return loc.p >= 1 && loc.p <= size_ && loc.q >= 1 && loc.q <= size_;
}

std::int64_t Grid::cell_count() const {
  return static_cast<std::int64_t>(size_) * size_;
}

std::vector<GridLocation> Grid::all_locations() const {
  std::vector<GridLocation> locations;
  locations.reserve(static_cast<std::size_t>(cell_count()));
  for (int p = 1; p <= size_; ++p)
    for (int q = 1; q <= size_; ++q) locations.push_back({p, q});
  return locations;
}

std::vector<ClientId> neighbors(ClientId i,
                                const std::vector<GridLocation>& locations,
                                double comm_radius) {
  if (i < 0 || static_cast<std::size_t>(i) >= locations.size())
    throw std::invalid_argument("neighbors: unknown client id " +
                                std::to_string(i));
  std::vector<ClientId> result;
  for (ClientId j = 0; j < static_cast<ClientId>(locations.size()); ++j) {
    if (j == i) continue;
    if (within_radius(locations[i], locations[j], comm_radius))
      result.push_back(j);
  }
  return result;
}

bool CommGraph::has_edge(ClientId i, ClientId j) const {
  if (i < 0 || static_cast<std::size_t>(i) >= adjacency.size()) return false;
  const auto& row = adjacency[i];
  return std::binary_search(row.begin(), row.end(), j);
}

std::size_t CommGraph::edge_count() const {
  std::size_t degree_sum = 0;
  for (const auto& row : adjacency) degree_sum += row.size();
  return degree_sum / 2;
}

CommGraph build_comm_graph(const std::vector<GridLocation>& locations,
                           double comm_radius, int round) {
  CommGraph graph;
  graph.round = round;
  graph.adjacency.resize(locations.size());
  const auto count = static_cast<ClientId>(locations.size());
  for (ClientId i = 0; i < count; ++i) {
    for (ClientId j = i + 1; j < count; ++j) {
      if (within_radius(locations[i], locations[j], comm_radius)) {
        graph.adjacency[i].push_back(j);
        graph.adjacency[j].push_back(i);
      }
    }
  }
  return graph;
}

std::vector<std::vector<ClientId>> connected_components(
    const CommGraph& graph) {
  const auto count = static_cast<ClientId>(graph.client_count());
  std::vector<std::vector<ClientId>> components;
  std::vector<bool> visited(count, false);
  std::vector<ClientId> stack;
  for (ClientId root = 0; root < count; ++root) {
    if (visited[root]) continue;
    std::vector<ClientId> component;
    stack.push_back(root);
    visited[root] = true;
    while (!stack.empty()) {
      const ClientId node = stack.back();
      stack.pop_back();
      component.push_back(node);
      for (ClientId next : graph.adjacency[node]) {
        if (!visited[next]) {
          visited[next] = true;
          stack.push_back(next);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

}  // namespace dflsim
