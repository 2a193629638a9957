#include "dflsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dflsim/errors.hpp"

namespace dflsim {

MobilityPattern pattern_from_string(const std::string& name) {
  if (name == "static") return MobilityPattern::Static;
  if (name == "random") return MobilityPattern::Random;
  if (name == "dam") return MobilityPattern::Dam;
  if (name == "dcm") return MobilityPattern::Dcm;
  throw ConfigError("unknown mobility pattern '" + name +
                    "' (expected static|random|dam|dcm)");
}

std::string pattern_to_string(MobilityPattern pattern) {
  switch (pattern) {
    case MobilityPattern::Static: return "static";
    case MobilityPattern::Random: return "random";
    case MobilityPattern::Dam: return "dam";
    case MobilityPattern::Dcm: return "dcm";
  }
  return "?";
}

MoveRadius MoveRadius::unbounded() {
  return MoveRadius(std::numeric_limits<double>::infinity(), true);
}

MoveRadius MoveRadius::bounded(double value) {
  if (!(value >= 0.0) || std::isinf(value))
    throw ConfigError("move radius must be finite and >= 0 (or \"inf\")");
  return MoveRadius(value, false);
}

bool MoveRadius::covers(GridLocation a, GridLocation b) const {
  if (unbounded_) return true;
  return static_cast<double>(squared_distance(a, b)) <= value_ * value_;
}

namespace {

void check_static_info(const StaticClientInfo& statics) {
  if (statics.locations.size() != statics.ids.size() ||
      statics.histograms.size() != statics.ids.size())
    throw std::invalid_argument(
        "static client info: ids, locations, histograms must be parallel");
}

}  // namespace

LabelDistribution location_distribution(
    ClientId mobile, GridLocation where, const StaticClientInfo& statics,
    const std::vector<std::int64_t>& own_histogram, double comm_radius) {
  check_static_info(statics);
  std::vector<std::int64_t> pooled = own_histogram;
  for (std::size_t s = 0; s < statics.count(); ++s) {
    if (statics.ids[s] == mobile)
      throw std::invalid_argument(
          "location_distribution: client " + std::to_string(mobile) +
          " is listed as static");
    if (!within_radius(statics.locations[s], where, comm_radius)) continue;
    const auto& histogram = statics.histograms[s];
    if (histogram.size() != pooled.size())
      throw std::invalid_argument(
          "location_distribution: histogram label counts disagree");
    for (std::size_t l = 0; l < pooled.size(); ++l) pooled[l] += histogram[l];
  }
  return normalize(pooled);
}

double distribution_distance(const LabelDistribution& reference,
                             const LabelDistribution& other) {
  if (reference.probs.size() != other.probs.size())
    throw std::invalid_argument(
        "distribution_distance: dimension mismatch");
  double sum = 0.0;
  for (std::size_t l = 0; l < reference.probs.size(); ++l) {
    const double diff = reference.probs[l] - other.probs[l];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

LocationDistributionMap::LocationDistributionMap(
    ClientId owner, std::vector<GridLocation> sites, StaticClientInfo statics,
    std::vector<std::int64_t> own_histogram, double comm_radius)
    : owner_(owner),
      sites_(std::move(sites)),
      statics_(std::move(statics)),
      own_histogram_(std::move(own_histogram)),
      comm_radius_(comm_radius) {
  check_static_info(statics_);
  distributions_.reserve(sites_.size());
  for (GridLocation site : sites_)
    distributions_.push_back(location_distribution(
        owner_, site, statics_, own_histogram_, comm_radius_));
}

LabelDistribution LocationDistributionMap::reference_at(
    GridLocation where) const {
  for (std::size_t k = 0; k < sites_.size(); ++k)
    if (sites_[k] == where) return distributions_[k];
  return location_distribution(owner_, where, statics_, own_histogram_,
                               comm_radius_);
}

std::vector<double> destination_probabilities(
    const LocationDistributionMap& map, GridLocation current) {
  const LabelDistribution reference = map.reference_at(current);
  const std::size_t count = map.sites().size();
  std::vector<double> distances(count);
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    distances[k] = distribution_distance(reference, map.site_distribution(k));
    total += distances[k];
  }
  if (total <= 0.0) {
    // Fully homogeneous map: every candidate is equally informative.
    std::fill(distances.begin(), distances.end(),
              1.0 / static_cast<double>(count));
    return distances;
  }
  for (double& value : distances) value /= total;
  return distances;
}

std::vector<double> dam_probabilities(const LocationDistributionMap& map,
                                      GridLocation current) {
  return destination_probabilities(map, current);
}

std::vector<double> dcm_probabilities(const LocationDistributionMap& map,
                                      GridLocation current) {
  if (map.sites().empty())
    throw std::invalid_argument("dcm_probabilities: no cluster centers");
  return destination_probabilities(map, current);
}

namespace {

std::size_t coverage(GridLocation center, const std::vector<GridLocation>& points,
                     const std::vector<bool>& active, double radius) {
  std::size_t covered = 0;
  for (std::size_t s = 0; s < points.size(); ++s)
    if (active[s] && within_radius(center, points[s], radius)) ++covered;
  return covered;
}

GridLocation sample_site(std::span<const GridLocation> sites,
                         std::span<const double> probabilities,
                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    cumulative += probabilities[k];
    if (u < cumulative) return sites[k];
  }
  return sites.back();  // residual rounding mass
}

std::vector<GridLocation> reachable_ball(GridLocation from, MoveRadius radius,
                                         const Grid& grid) {
  std::vector<GridLocation> ball;
  for (GridLocation loc : grid.all_locations())
    if (radius.covers(from, loc)) ball.push_back(loc);
  return ball;
}

}  // namespace

ClusterCenters cluster_centers(const StaticClientInfo& statics,
                               double comm_radius, const Grid& grid,
                               std::mt19937_64& rng) {
  check_static_info(statics);
  if (statics.count() == 0)
    throw std::invalid_argument("cluster_centers: no static clients");

  const std::vector<GridLocation> candidates = grid.all_locations();
  std::vector<bool> uncovered(statics.count(), true);
  const std::vector<bool> everyone(statics.count(), true);
  std::size_t remaining = statics.count();

  ClusterCenters result;
  int step = 1;
  while (remaining > 0) {
    std::size_t best = 0;
    std::vector<GridLocation> tied;
    for (GridLocation candidate : candidates) {
      const std::size_t covered =
          coverage(candidate, statics.locations, uncovered, comm_radius);
      if (covered > best) {
        best = covered;
        tied.assign(1, candidate);
      } else if (covered == best && covered > 0) {
        tied.push_back(candidate);
      }
    }
    if (best == 0)
      throw std::logic_error("cluster_centers: no candidate covers anyone");

    // Prefer, among tied maximizers, the one covering the most static
    // clients overall; applies from the second center on.
    if (tied.size() > 1 && step > 1) {
      std::size_t best_overall = 0;
      std::vector<GridLocation> refined;
      for (GridLocation candidate : tied) {
        const std::size_t covered =
            coverage(candidate, statics.locations, everyone, comm_radius);
        if (covered > best_overall) {
          best_overall = covered;
          refined.assign(1, candidate);
        } else if (covered == best_overall) {
          refined.push_back(candidate);
        }
      }
      tied = std::move(refined);
    }

    GridLocation chosen = tied.front();
    if (tied.size() > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
      chosen = tied[pick(rng)];
    }

    for (std::size_t s = 0; s < statics.count(); ++s) {
      if (uncovered[s] &&
          within_radius(chosen, statics.locations[s], comm_radius)) {
        uncovered[s] = false;
        --remaining;
      }
    }
    result.centers.push_back(chosen);
    ++step;
  }
  return result;
}

GridLocation step_random(const MobilityState& state, const Grid& grid,
                         std::mt19937_64& rng) {
  const auto support = reachable_ball(state.current, state.move_radius, grid);
  std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
  return support[pick(rng)];
}

StepOutcome step_toward(const MobilityState& state,
                        const LocationDistributionMap& map, const Grid& grid,
                        std::mt19937_64& rng) {
  GridLocation destination;
  if (!state.destination.has_value() ||
      *state.destination == state.current) {
    const auto probabilities = destination_probabilities(map, state.current);
    destination = sample_site(map.sites(), probabilities, rng);
  } else {
    destination = *state.destination;
  }

  if (state.move_radius.covers(state.current, destination))
    return {destination, destination};

  // Constrained move: closest reachable grid point to the destination.
  const auto ball = reachable_ball(state.current, state.move_radius, grid);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<GridLocation> tied;
  for (GridLocation candidate : ball) {
    const std::int64_t d2 = squared_distance(candidate, destination);
    if (d2 < best) {
      best = d2;
      tied.assign(1, candidate);
    } else if (d2 == best) {
      tied.push_back(candidate);
    }
  }
  GridLocation next = tied.front();
  if (tied.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
    next = tied[pick(rng)];
  }
  return {next, destination};
}

void advance_round(std::vector<MobilityState>& states, const Grid& grid,
                   std::span<const LocationDistributionMap> maps,
                   const RunSeed& seeds, int round) {
  for (std::size_t k = 0; k < states.size(); ++k) {
    MobilityState& state = states[k];
    if ((state.pattern == MobilityPattern::Dam ||
         state.pattern == MobilityPattern::Dcm) &&
        k >= maps.size())
      throw std::invalid_argument(
          "advance_round: missing distribution map for client " +
          std::to_string(state.client));
    auto rng = seeds.stream("mobility", static_cast<std::uint64_t>(state.client),
                            static_cast<std::uint64_t>(round));
    switch (state.pattern) {
      case MobilityPattern::Static:
        break;
      case MobilityPattern::Random:
        state.current = step_random(state, grid, rng);
        break;
      case MobilityPattern::Dam:
      case MobilityPattern::Dcm: {
        const StepOutcome outcome = step_toward(state, maps[k], grid, rng);
        state.current = outcome.location;
        state.destination = outcome.destination;
        break;
      }
    }
  }
}

}  // namespace dflsim
