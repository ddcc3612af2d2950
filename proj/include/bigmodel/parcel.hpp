#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bigmodel/geometry.hpp"

namespace bigmodel {

/// Urban is encoded as 1 in every export.
enum class LandState : std::uint8_t { non_urban = 0, urban = 1 };

std::string_view to_string(LandState state);
LandState parse_land_state(std::string_view text);

using ParcelId = std::uint64_t;

/// Admin id given to parcels that fall outside every administrative unit.
inline constexpr std::string_view kUnassignedAdmin = "unassigned";

/// The atomic simulation unit: a built-up area bounded by road space.
struct Parcel {
    ParcelId id = 0;
    Polygon geometry;
    double area_km2 = 0.0;
    std::string admin_id;
    std::int64_t poi_count = 0;
    double density_raw = 1.0;
    double density_std = 0.0;
    LandState state = LandState::non_urban;
    /// Iteration at which a simulation flipped the parcel; empty otherwise.
    std::optional<int> flip_iteration;
};

Parcel make_parcel(Polygon geometry, std::string admin_id);

/// Sorts parcels by (admin_id, min-x, min-y) and numbers them 0..n-1.
/// Remaining ties fall back to max-x, max-y and area, then input order.
void assign_parcel_ids(std::vector<Parcel>& parcels);

double total_area_km2(std::span<const Parcel> parcels);

std::vector<LandState> states_of(std::span<const Parcel> parcels);

}  // namespace bigmodel
