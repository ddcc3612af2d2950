#pragma once

// Road-network-to-parcel delineation: merge road layers, trim short
// dangles, extend free ends, buffer into road space, subtract road space
// from each administrative unit, and overlay the result on unit boundaries.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bigmodel/geometry.hpp"
#include "bigmodel/parcel.hpp"

namespace bigmodel {

struct RoadSegment {
    std::uint64_t id = 0;
    LineString geometry;
    /// 1 = expressway ... 5 = local.
    int road_class = 5;
};

/// One input layer. `crs` is the layer's CRS label (e.g. "EPSG:32650").
struct RoadLayer {
    std::string crs;
    std::vector<RoadSegment> segments;
};

struct AdminUnit {
    std::string id;
    Polygon boundary;
    std::string name;
};

struct RoadSpace {
    MultiPolygon polygons;
    double total_area = 0.0;  // m²
};

/// Road class -> buffer half-width in meters.
using WidthTable = std::map<int, double>;

WidthTable default_width_table();

inline constexpr double kMinHalfWidth = 2.0;
inline constexpr double kMaxHalfWidth = 30.0;

struct AicpParams {
    double trim_threshold_m = 200.0;
    double extension_m = 20.0;
    WidthTable widths = default_width_table();
    double min_parcel_area_m2 = 1000.0;
    double snap_tolerance_m = kSnapTolerance;
};

/// Concatenates layers into one, re-issuing ids 0..n-1 in layer order.
/// Throws InputError if any layer lacks a CRS, the CRS labels differ, or a
/// segment has fewer than two vertices or non-finite coordinates.
RoadLayer merge_road_layers(std::span<const RoadLayer> layers);

/// Whether each endpoint (front, back) of each segment touches no other
/// segment within `tolerance`. A closed segment's ends touch each other.
struct EndpointFreedom {
    bool front = false;
    bool back = false;
};
std::vector<EndpointFreedom> free_endpoints(std::span<const RoadSegment> segments,
                                            double tolerance = kSnapTolerance);

/// Repeatedly removes segments that have a free endpoint and are shorter
/// than `threshold_m` until none remain. Input order is preserved.
std::vector<RoadSegment> trim_dangles(std::span<const RoadSegment> segments,
                                      double threshold_m = 200.0,
                                      double tolerance = kSnapTolerance);

/// Moves every free endpoint `extension_m` outward along its terminal edge.
std::vector<RoadSegment> extend_ends(std::span<const RoadSegment> segments,
                                     double extension_m = 20.0,
                                     double tolerance = kSnapTolerance);

/// Flat-capped, mitre-joined (limit 2) buffers per road class, unioned.
/// Throws InputError naming any class missing from `widths` or any width
/// outside [2, 30].
RoadSpace build_road_space(std::span<const RoadSegment> segments, const WidthTable& widths);

struct DelineationReport {
    double admin_area_m2 = 0.0;
    double parcel_area_m2 = 0.0;
    double road_area_m2 = 0.0;  // road space inside the unit
    double sliver_area_m2 = 0.0;
    std::size_t sliver_count = 0;

    /// |admin - (parcels + road + slivers)| / admin.
    double relative_conservation_error() const;
};

struct Delineation {
    std::vector<Parcel> parcels;
    DelineationReport report;
};

/// Connected components of (unit - road space), dropping components below
/// `min_parcel_area_m2`. Parcel ids follow assign_parcel_ids within the unit.
Delineation delineate_parcels(const AdminUnit& admin, const RoadSpace& road_space,
                              double min_parcel_area_m2 = 1000.0);

struct OverlayResult {
    std::vector<Parcel> parcels;
    /// Ids (in the renumbered output) of parcels outside every unit.
    std::vector<ParcelId> unassigned;
};

/// Assigns each parcel to the unit holding it. With `split`, parcels that
/// straddle units are cut at unit boundaries and each piece goes to its
/// unit; otherwise the whole parcel goes to the unit with the largest
/// share. Pieces thinner than `tolerance` x perimeter are discarded. Output
/// ids are reissued with assign_parcel_ids.
OverlayResult overlay_admin(std::span<const Parcel> parcels, std::span<const AdminUnit> units,
                            bool split = true, double tolerance = kSnapTolerance);

/// Runs the whole chain over every unit on up to `jobs` threads. Result ids
/// are global and independent of `jobs`.
struct AicpResult {
    std::vector<Parcel> parcels;
    std::map<std::string, DelineationReport> reports;
    std::size_t segments_in = 0;
    std::size_t segments_trimmed = 0;
};

AicpResult run_aicp(std::span<const RoadLayer> layers, std::span<const AdminUnit> units,
                    const AicpParams& params, unsigned jobs = 1);

}  // namespace bigmodel
