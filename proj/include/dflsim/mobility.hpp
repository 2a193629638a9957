#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dflsim/partition.hpp"
#include "dflsim/rng.hpp"
#include "dflsim/topology.hpp"

namespace dflsim {

enum class MobilityPattern { Static, Random, Dam, Dcm };

MobilityPattern pattern_from_string(const std::string& name);
std::string pattern_to_string(MobilityPattern pattern);

/// Maximum per-round displacement R_m; unbounded ("inf") means a mobile
/// client can reach any grid point in one round.
class MoveRadius {
 public:
  static MoveRadius unbounded();
  static MoveRadius bounded(double value);

  bool is_unbounded() const { return unbounded_; }
  double value() const { return value_; }

  /// dist(a, b) <= R_m, exact on squared integer distances.
  bool covers(GridLocation a, GridLocation b) const;

 private:
  MoveRadius(double value, bool is_unbounded)
      : value_(value), unbounded_(is_unbounded) {}
  double value_;
  bool unbounded_;
};

/// What every mobile client knows up front: identities, initial locations,
/// and per-label sample counts of the static clients.
struct StaticClientInfo {
  std::vector<ClientId> ids;
  std::vector<GridLocation> locations;
  std::vector<std::vector<std::int64_t>> histograms;

  std::size_t count() const { return ids.size(); }
};

/// Per-mobile-client movement state.
struct MobilityState {
  ClientId client = 0;
  GridLocation current;
  std::optional<GridLocation> destination;  // present only under DAM/DCM
  MobilityPattern pattern = MobilityPattern::Static;
  MoveRadius move_radius = MoveRadius::unbounded();
};

/// Label distribution a mobile client would see at a candidate location:
/// the pooled histograms of all static clients within comm_radius of it,
/// plus its own. Throws std::invalid_argument if `mobile` appears among the
/// static ids or histogram widths disagree.
LabelDistribution location_distribution(ClientId mobile, GridLocation where,
                                        const StaticClientInfo& statics,
                                        const std::vector<std::int64_t>& own_histogram,
                                        double comm_radius);

/// L2 distance between two label distributions over the same label count.
double distribution_distance(const LabelDistribution& reference,
                             const LabelDistribution& other);

/// Precomputed location_distribution over a fixed site list (the whole grid
/// for DAM, the cluster centers for DCM). Built once per run from static
/// clients' initial locations; never changes afterwards.
class LocationDistributionMap {
 public:
  LocationDistributionMap(ClientId owner, std::vector<GridLocation> sites,
                          StaticClientInfo statics,
                          std::vector<std::int64_t> own_histogram,
                          double comm_radius);

  ClientId owner() const { return owner_; }
  std::span<const GridLocation> sites() const { return sites_; }
  const LabelDistribution& site_distribution(std::size_t index) const {
    return distributions_[index];
  }

  /// Distribution at an arbitrary reference location. Sites are served from
  /// the precomputed table; other locations (a DCM client standing off the
  /// center set) are evaluated on demand.
  LabelDistribution reference_at(GridLocation where) const;

 private:
  ClientId owner_;
  std::vector<GridLocation> sites_;
  std::vector<LabelDistribution> distributions_;
  StaticClientInfo statics_;
  std::vector<std::int64_t> own_histogram_;
  double comm_radius_;
};

/// Destination probabilities over the map's sites, proportional to the
/// distribution distance from `current`. If every distance is zero the
/// result is uniform over the sites.
std::vector<double> destination_probabilities(
    const LocationDistributionMap& map, GridLocation current);

std::vector<double> dam_probabilities(const LocationDistributionMap& map,
                                      GridLocation current);

/// Same normalization restricted to the cluster-center sites. Throws
/// std::invalid_argument if the map has no sites.
std::vector<double> dcm_probabilities(const LocationDistributionMap& map,
                                      GridLocation current);

/// Greedy cluster centers in discovery order; every static client ends up
/// within comm_radius of at least one center.
struct ClusterCenters {
  std::vector<GridLocation> centers;
};

/// Iterative max-coverage selection: each step picks a grid point covering
/// the most not-yet-covered static clients; ties after the first step are
/// re-filtered by coverage over all static clients, remaining ties broken
/// uniformly at random. Throws std::invalid_argument without static clients.
ClusterCenters cluster_centers(const StaticClientInfo& statics,
                               double comm_radius, const Grid& grid,
                               std::mt19937_64& rng);

/// Uniform draw from the in-grid ball of radius R_m around the current
/// location. The current location is always in the support.
GridLocation step_random(const MobilityState& state, const Grid& grid,
                         std::mt19937_64& rng);

struct StepOutcome {
  GridLocation location;
  GridLocation destination;
};

/// One DAM/DCM movement step: resample the destination when it is absent or
/// already reached, then move to it if within R_m, otherwise to the
/// reachable location closest to it (ties uniform at random). The
/// destination persists until reached.
StepOutcome step_toward(const MobilityState& state,
                        const LocationDistributionMap& map, const Grid& grid,
                        std::mt19937_64& rng);

/// Applies the pattern-appropriate step to every mobile client in ascending
/// client-id order. `maps` is parallel to `states` and may be empty for
/// Static/Random patterns. Each client draws from its own per-(client, round)
/// substream, so serial and parallel execution agree.
void advance_round(std::vector<MobilityState>& states, const Grid& grid,
                   std::span<const LocationDistributionMap> maps,
                   const RunSeed& seeds, int round);

}  // namespace dflsim
