#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace dflsim {

using ClientId = int;

/// Integer coordinate pair on the G x G grid, both components in 1..G.
struct GridLocation {
  int p = 1;
  int q = 1;

  friend auto operator<=>(const GridLocation&, const GridLocation&) = default;
};

/// Squared Euclidean distance in exact integer arithmetic.
std::int64_t squared_distance(GridLocation a, GridLocation b);

double euclidean_distance(GridLocation a, GridLocation b);

/// Radius comparisons are done on squared distances so grid-point membership
/// is exact: no square roots, no tolerance.
bool within_radius(GridLocation a, GridLocation b, double radius);

/// The G x G location set.
class Grid {
 public:
  explicit Grid(int size);

  int size() const { return size_; }
  bool contains(GridLocation loc) const;
  std::int64_t cell_count() const;

  /// All grid locations in row-major order: (1,1), (1,2), ..., (G,G).
  std::vector<GridLocation> all_locations() const;

 private:
  int size_;
};

/// Clients within comm_radius of client i, excluding i itself. `locations`
/// is indexed by client id. Throws std::invalid_argument on an out-of-range
/// id (malformed simulator state).
std::vector<ClientId> neighbors(ClientId i,
                                const std::vector<GridLocation>& locations,
                                double comm_radius);

/// Materialization of every neighbor set for one round. Symmetric and
/// irreflexive by construction.
struct CommGraph {
  int round = 0;
  std::vector<std::vector<ClientId>> adjacency;  // sorted neighbor lists

  std::size_t client_count() const { return adjacency.size(); }
  bool has_edge(ClientId i, ClientId j) const;
  std::size_t edge_count() const;
};

CommGraph build_comm_graph(const std::vector<GridLocation>& locations,
                           double comm_radius, int round = 0);

/// Connected components as disjoint sorted id lists covering every client.
std::vector<std::vector<ClientId>> connected_components(const CommGraph& graph);

}  // namespace dflsim
