#include "bigmodel/urban_identify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/geometry/index/rtree.hpp>

#include "bigmodel/errors.hpp"
#include "bigmodel/parallel.hpp"

namespace bigmodel {

namespace bgi = bg::index;

namespace {

using IndexedBox = std::pair<Box, std::size_t>;
using BoxTree = bgi::rtree<IndexedBox, bgi::quadratic<16>>;

constexpr double kTargetSlack = 1e-12;

bool reached(double area, double target) { return area >= target * (1.0 - kTargetSlack); }

}  // namespace

NeighborGraph build_neighbor_graph(std::span<const Parcel> parcels, double contact_distance_m,
                                   unsigned jobs) {
    if (!(contact_distance_m >= 0.0)) {
        throw InputError("contact distance must be non-negative");
    }
    std::vector<IndexedBox> boxes;
    boxes.reserve(parcels.size());
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        boxes.emplace_back(bg::return_envelope<Box>(parcels[i].geometry), i);
    }
    const BoxTree tree(boxes.begin(), boxes.end());

    // Each unordered pair is tested once (i < j) so the relation is
    // symmetric by construction.
    std::vector<std::vector<std::size_t>> forward(parcels.size());
    parallel_for(parcels.size(), jobs, [&](std::size_t i) {
        Box probe = boxes[i].first;
        probe.min_corner().x(probe.min_corner().x() - contact_distance_m);
        probe.min_corner().y(probe.min_corner().y() - contact_distance_m);
        probe.max_corner().x(probe.max_corner().x() + contact_distance_m);
        probe.max_corner().y(probe.max_corner().y() + contact_distance_m);
        std::vector<IndexedBox> hits;
        tree.query(bgi::intersects(probe), std::back_inserter(hits));
        for (const auto& [box, j] : hits) {
            if (j > i &&
                bg::distance(parcels[i].geometry, parcels[j].geometry) <= contact_distance_m) {
                forward[i].push_back(j);
            }
        }
    });

    NeighborGraph graph;
    graph.adjacency.resize(parcels.size());
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        for (const std::size_t j : forward[i]) {
            graph.adjacency[i].push_back({j, parcels[j].area_km2});
            graph.adjacency[j].push_back({i, parcels[i].area_km2});
        }
    }
    for (auto& list : graph.adjacency) {
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    }
    return graph;
}

void IdentifyConfig::validate() const {
    if (!(w_density >= 0.0) || !(w_neighbor >= 0.0) || w_density + w_neighbor <= 0.0) {
        throw InputError("identification weights must be non-negative and not both zero");
    }
    if (!(batch_fraction > 0.0 && batch_fraction <= 1.0)) {
        throw InputError("batch_fraction must lie in (0, 1]");
    }
    if (!(target_area_km2 >= 0.0)) {
        throw InputError("target area must be non-negative");
    }
}

double urban_neighbor_share(std::size_t index, const NeighborGraph& graph,
                            std::span<const LandState> states, std::span<const char> in_scope) {
    double urban = 0.0;
    double total = 0.0;
    for (const Neighbor& n : graph.adjacency[index]) {
        if (!in_scope.empty() && !in_scope[n.index]) {
            continue;
        }
        total += n.weight;
        if (states[n.index] == LandState::urban) {
            urban += n.weight;
        }
    }
    return total > 0.0 ? urban / total : 0.0;
}

double transition_score(std::size_t index, std::span<const Parcel> parcels,
                        const NeighborGraph& graph, std::span<const LandState> states,
                        const IdentifyConfig& config, std::span<const char> in_scope) {
    double score = config.w_density * parcels[index].density_std;
    if (config.w_neighbor != 0.0) {
        score += config.w_neighbor * urban_neighbor_share(index, graph, states, in_scope);
    }
    return score;
}

IdentifyResult identify_urban(std::span<const Parcel> parcels, const NeighborGraph& graph,
                              const IdentifyConfig& config, std::span<const std::size_t> members) {
    config.validate();
    if (graph.size() != parcels.size()) {
        throw InputError("neighbor graph was built for a different parcel set");
    }

    std::vector<std::size_t> all;
    if (members.empty()) {
        all.resize(parcels.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        members = all;
    }
    std::vector<char> in_scope(parcels.size(), 0);
    double available = 0.0;
    for (const std::size_t i : members) {
        in_scope[i] = 1;
        available += parcels[i].area_km2;
    }

    const double target = config.target_area_km2;
    if (target > available * (1.0 + kTargetSlack)) {
        throw InputError("urban target " + std::to_string(target) +
                         " km² exceeds the total parcel area " + std::to_string(available) +
                         " km²");
    }

    IdentifyResult result;
    result.states.assign(parcels.size(), LandState::non_urban);
    result.target_area_km2 = target;
    if (target <= 0.0) {
        return result;
    }

    const double quota = config.batch_fraction * target;
    std::vector<std::size_t> candidates(members.begin(), members.end());
    std::vector<double> scores(parcels.size(), 0.0);
    int iteration = 0;

    while (!reached(result.urban_area_km2, target) && !candidates.empty()) {
        ++iteration;
        for (const std::size_t i : candidates) {
            scores[i] = transition_score(i, parcels, graph, result.states, config, in_scope);
        }
        std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            if (scores[a] != scores[b]) {
                return scores[a] > scores[b];
            }
            return parcels[a].id < parcels[b].id;
        });

        IterationLog entry;
        entry.iteration = iteration;
        std::size_t taken = 0;
        for (const std::size_t i : candidates) {
            result.states[i] = LandState::urban;
            result.urban_area_km2 += parcels[i].area_km2;
            result.max_flipped_area_km2 = std::max(result.max_flipped_area_km2, parcels[i].area_km2);
            result.last_flipped_area_km2 = parcels[i].area_km2;
            entry.flipped_area_km2 += parcels[i].area_km2;
            ++taken;
            if (reached(result.urban_area_km2, target) || entry.flipped_area_km2 >= quota) {
                break;
            }
        }
        entry.flipped = taken;
        entry.cumulative_area_km2 = result.urban_area_km2;
        result.log.push_back(entry);
        candidates.erase(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(taken));
    }
    return result;
}

std::map<std::string, std::vector<std::size_t>> members_by_admin(std::span<const Parcel> parcels) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        groups[parcels[i].admin_id].push_back(i);
    }
    return groups;
}

CityIdentifyResult identify_urban_by_city(std::span<const Parcel> parcels,
                                          const NeighborGraph& graph,
                                          const std::map<std::string, double>& targets_km2,
                                          const IdentifyConfig& config, unsigned jobs) {
    const auto groups = members_by_admin(parcels);
    std::vector<std::string> cities;
    for (const auto& [city, target] : targets_km2) {
        cities.push_back(city);
    }

    std::vector<IdentifyResult> runs(cities.size());
    parallel_for(cities.size(), jobs, [&](std::size_t c) {
        const auto it = groups.find(cities[c]);
        if (it == groups.end()) {
            if (targets_km2.at(cities[c]) > 0.0) {
                throw InputError("city '" + cities[c] + "' has a target but no parcels");
            }
            runs[c].states.assign(parcels.size(), LandState::non_urban);
            return;
        }
        IdentifyConfig city_config = config;
        city_config.target_area_km2 = targets_km2.at(cities[c]);
        runs[c] = identify_urban(parcels, graph, city_config, it->second);
    });

    CityIdentifyResult result;
    result.states.assign(parcels.size(), LandState::non_urban);
    for (std::size_t c = 0; c < cities.size(); ++c) {
        if (const auto it = groups.find(cities[c]); it != groups.end()) {
            for (const std::size_t i : it->second) {
                result.states[i] = runs[c].states[i];
            }
        }
        runs[c].states.clear();
        result.cities.emplace(cities[c], std::move(runs[c]));
    }
    return result;
}

}  // namespace bigmodel
