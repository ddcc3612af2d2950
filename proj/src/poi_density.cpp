#include "bigmodel/poi_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/geometry/index/rtree.hpp>

#include "bigmodel/errors.hpp"
#include "bigmodel/parallel.hpp"

namespace bigmodel {

namespace bgi = bg::index;

namespace {

using IndexedBox = std::pair<Box, std::size_t>;
using BoxTree = bgi::rtree<IndexedBox, bgi::quadratic<16>>;

struct Placement {
    std::optional<std::size_t> parcel;
    bool inside = false;
};

}  // namespace

PoiAssignment assign_pois(std::vector<Parcel> parcels, std::span<const PoiPoint> pois,
                          double near_distance_m, unsigned jobs) {
    if (!(near_distance_m >= 0.0)) {
        throw InputError("near distance must be non-negative");
    }
    std::vector<IndexedBox> boxes;
    boxes.reserve(parcels.size());
    for (std::size_t i = 0; i < parcels.size(); ++i) {
        boxes.emplace_back(bg::return_envelope<Box>(parcels[i].geometry), i);
    }
    const BoxTree tree(boxes.begin(), boxes.end());

    std::vector<Placement> placement(pois.size());
    parallel_for(pois.size(), jobs, [&](std::size_t k) {
        const Point& p = pois[k].location;
        std::vector<IndexedBox> hits;
        const Box probe(Point(p.x() - near_distance_m, p.y() - near_distance_m),
                        Point(p.x() + near_distance_m, p.y() + near_distance_m));
        tree.query(bgi::intersects(probe), std::back_inserter(hits));

        std::optional<std::size_t> inside;
        std::optional<std::size_t> nearest;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [box, i] : hits) {
            const Parcel& parcel = parcels[i];
            if (bg::covered_by(p, box) && bg::covered_by(p, parcel.geometry)) {
                if (!inside || parcel.id < parcels[*inside].id) {
                    inside = i;
                }
                continue;
            }
            const double d = bg::distance(p, parcel.geometry);
            if (d <= near_distance_m &&
                (d < best || (d == best && parcel.id < parcels[*nearest].id))) {
                best = d;
                nearest = i;
            }
        }
        if (inside) {
            placement[k] = {inside, true};
        } else {
            placement[k] = {nearest, false};
        }
    });

    PoiAssignment result;
    for (auto& parcel : parcels) {
        parcel.poi_count = 0;
    }
    for (std::size_t k = 0; k < pois.size(); ++k) {
        if (!placement[k].parcel) {
            result.discarded.push_back(pois[k].id);
            continue;
        }
        ++parcels[*placement[k].parcel].poi_count;
        if (placement[k].inside) {
            ++result.inside;
        } else {
            ++result.near;
        }
    }
    result.parcels = std::move(parcels);
    return result;
}

double raw_density(std::int64_t poi_count, double area_km2) {
    if (!(area_km2 > 0.0)) {
        throw InputError("raw density needs a positive parcel area");
    }
    return std::max(static_cast<double>(poi_count) / area_km2, 1.0);
}

double raw_density(const Parcel& parcel) { return raw_density(parcel.poi_count, parcel.area_km2); }

DensityStats compute_density_stats(std::span<const Parcel> parcels) {
    DensityStats stats;
    for (const auto& p : parcels) {
        stats.max_raw = std::max(stats.max_raw, raw_density(p));
    }
    return stats;
}

double standardize_density(double raw, const DensityStats& stats) {
    if (!(raw >= stats.min_raw_floor)) {
        throw InputError("raw density below the 1 POI/km² floor");
    }
    if (raw > stats.max_raw) {
        throw InputError("raw density exceeds the region maximum; stats must cover the same region");
    }
    if (stats.max_raw <= 1.0 + 1e-12) {
        return 0.0;
    }
    return std::log(raw) / std::log(stats.max_raw);
}

DensityStats apply_density(std::vector<Parcel>& parcels) {
    for (auto& p : parcels) {
        p.density_raw = raw_density(p);
    }
    const DensityStats stats = compute_density_stats(parcels);
    for (auto& p : parcels) {
        p.density_std = standardize_density(p.density_raw, stats);
    }
    return stats;
}

}  // namespace bigmodel
