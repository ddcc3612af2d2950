#include "bigmodel/parcel.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "bigmodel/errors.hpp"

namespace bigmodel {

std::string_view to_string(LandState state) {
    return state == LandState::urban ? "urban" : "non_urban";
}

LandState parse_land_state(std::string_view text) {
    if (text == "urban" || text == "1") {
        return LandState::urban;
    }
    if (text == "non_urban" || text == "0") {
        return LandState::non_urban;
    }
    throw InputError("unknown land state '" + std::string(text) + "'");
}

Parcel make_parcel(Polygon geometry, std::string admin_id) {
    Parcel parcel;
    parcel.area_km2 = bg::area(geometry) / kSquareMetersPerKm2;
    parcel.geometry = std::move(geometry);
    parcel.admin_id = std::move(admin_id);
    return parcel;
}

void assign_parcel_ids(std::vector<Parcel>& parcels) {
    struct Key {
        const std::string* admin;
        double min_x, min_y, max_x, max_y, area;
    };
    std::vector<Key> keys;
    keys.reserve(parcels.size());
    for (const auto& p : parcels) {
        const auto box = bg::return_envelope<Box>(p.geometry);
        keys.push_back({&p.admin_id, box.min_corner().x(), box.min_corner().y(),
                        box.max_corner().x(), box.max_corner().y(), p.area_km2});
    }
    std::vector<std::size_t> order(parcels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Key& ka = keys[a];
        const Key& kb = keys[b];
        return std::tie(*ka.admin, ka.min_x, ka.min_y, ka.max_x, ka.max_y, ka.area) <
               std::tie(*kb.admin, kb.min_x, kb.min_y, kb.max_x, kb.max_y, kb.area);
    });
    std::vector<Parcel> sorted;
    sorted.reserve(parcels.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted.push_back(std::move(parcels[order[i]]));
        sorted.back().id = i;
    }
    parcels = std::move(sorted);
}

double total_area_km2(std::span<const Parcel> parcels) {
    double total = 0.0;
    for (const auto& p : parcels) {
        total += p.area_km2;
    }
    return total;
}

std::vector<LandState> states_of(std::span<const Parcel> parcels) {
    std::vector<LandState> states;
    states.reserve(parcels.size());
    for (const auto& p : parcels) {
        states.push_back(p.state);
    }
    return states;
}

}  // namespace bigmodel
