#pragma once

// Constrained vector cellular automaton that labels parcels urban until the
// urban area reaches a statistical target.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bigmodel/parcel.hpp"

namespace bigmodel {

struct Neighbor {
    std::size_t index;  // position in the parcel span the graph was built from
    double weight;      // neighbor area in km²
};

/// Parcels within `contact_distance_m` of each other, so parcels facing each
/// other across a road are neighbors. Symmetric, no self-loops, each
/// adjacency list sorted by index.
struct NeighborGraph {
    std::vector<std::vector<Neighbor>> adjacency;

    std::size_t size() const { return adjacency.size(); }
};

inline constexpr double kDefaultContactDistance = 60.0;

NeighborGraph build_neighbor_graph(std::span<const Parcel> parcels,
                                   double contact_distance_m = kDefaultContactDistance,
                                   unsigned jobs = 1);

struct IdentifyConfig {
    double w_density = 0.7;
    double w_neighbor = 0.3;
    double batch_fraction = 0.01;
    double target_area_km2 = 0.0;

    /// Throws InputError when a field is out of range.
    void validate() const;
};

/// Area share of urban parcels among the neighbors of `index`, counting only
/// neighbors for which `in_scope` is true (all when empty). 0 for degree 0.
double urban_neighbor_share(std::size_t index, const NeighborGraph& graph,
                            std::span<const LandState> states,
                            std::span<const char> in_scope = {});

/// w_density * density_std + w_neighbor * urban_neighbor_share.
double transition_score(std::size_t index, std::span<const Parcel> parcels,
                        const NeighborGraph& graph, std::span<const LandState> states,
                        const IdentifyConfig& config, std::span<const char> in_scope = {});

struct IterationLog {
    int iteration = 0;
    std::size_t flipped = 0;
    double flipped_area_km2 = 0.0;
    double cumulative_area_km2 = 0.0;
};

struct IdentifyResult {
    /// One state per parcel in the input span; parcels outside the run's
    /// members stay non_urban.
    std::vector<LandState> states;
    std::vector<IterationLog> log;
    double urban_area_km2 = 0.0;
    double target_area_km2 = 0.0;
    double max_flipped_area_km2 = 0.0;
    /// Area of the parcel whose flip reached the target.
    double last_flipped_area_km2 = 0.0;
};

/// Starts from all non-urban and flips the highest-scoring members (ties to
/// the lower parcel id) in batches of batch_fraction x target, refreshing
/// neighbor terms between batches, until the urban area reaches the target.
/// `members` restricts the run to a subset (e.g. one city); neighbors outside
/// it are ignored. Throws InputError if the target exceeds the members' area.
IdentifyResult identify_urban(std::span<const Parcel> parcels, const NeighborGraph& graph,
                              const IdentifyConfig& config,
                              std::span<const std::size_t> members = {});

struct CityIdentifyResult {
    std::vector<LandState> states;
    std::map<std::string, IdentifyResult> cities;
};

/// One independent run per admin id listed in `targets_km2`, in parallel.
/// Parcels of admins without a target stay non_urban.
CityIdentifyResult identify_urban_by_city(std::span<const Parcel> parcels,
                                          const NeighborGraph& graph,
                                          const std::map<std::string, double>& targets_km2,
                                          const IdentifyConfig& config, unsigned jobs = 1);

/// Indices of parcels grouped by admin id.
std::map<std::string, std::vector<std::size_t>> members_by_admin(std::span<const Parcel> parcels);

}  // namespace bigmodel
