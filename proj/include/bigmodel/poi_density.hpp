#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bigmodel/geometry.hpp"
#include "bigmodel/parcel.hpp"

namespace bigmodel {

struct PoiPoint {
    std::string id;
    Point location;
    std::string category;
};

/// POIs per km²; the floor is the density assumed for a parcel with no POIs.
struct DensityStats {
    double max_raw = 1.0;
    double min_raw_floor = 1.0;
};

struct PoiAssignment {
    std::vector<Parcel> parcels;
    std::size_t inside = 0;
    std::size_t near = 0;
    std::vector<std::string> discarded;
};

/// A POI inside (or on the boundary of) a parcel counts for it, lowest id
/// first on shared boundaries. A POI inside no parcel counts for the nearest
/// parcel within `near_distance_m` (ties to the lower id) or is discarded.
/// `poi_count` is reset before counting.
PoiAssignment assign_pois(std::vector<Parcel> parcels, std::span<const PoiPoint> pois,
                          double near_distance_m = 50.0, unsigned jobs = 1);

/// max(poi_count / area_km2, 1). Throws InputError for non-positive area.
double raw_density(std::int64_t poi_count, double area_km2);
double raw_density(const Parcel& parcel);

DensityStats compute_density_stats(std::span<const Parcel> parcels);

/// log(raw) / log(max_raw), or 0 when max_raw is within 1e-12 of 1.
/// Throws InputError when raw < 1 or raw exceeds max_raw.
double standardize_density(double raw, const DensityStats& stats);

/// Fills density_raw and density_std for every parcel, with max_raw taken
/// over the whole input set.
DensityStats apply_density(std::vector<Parcel>& parcels);

}  // namespace bigmodel
