#include "bigmodel/road_parcel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include <boost/geometry/index/rtree.hpp>

#include "bigmodel/errors.hpp"
#include "bigmodel/parallel.hpp"

namespace bigmodel {

namespace bgi = bg::index;

namespace {

using IndexedBox = std::pair<Box, std::size_t>;
using BoxTree = bgi::rtree<IndexedBox, bgi::quadratic<16>>;

Box expanded(Box box, double margin) {
    box.min_corner().x(box.min_corner().x() - margin);
    box.min_corner().y(box.min_corner().y() - margin);
    box.max_corner().x(box.max_corner().x() + margin);
    box.max_corner().y(box.max_corner().y() + margin);
    return box;
}

Box point_box(const Point& p, double margin) { return expanded(Box(p, p), margin); }

// Freedom of the endpoints of segments[active[i]], considering only the
// active segments as potential contacts.
std::vector<EndpointFreedom> freedom_of(std::span<const RoadSegment> segments,
                                        std::span<const std::size_t> active, double tolerance) {
    std::vector<IndexedBox> boxes;
    boxes.reserve(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
        boxes.emplace_back(bg::return_envelope<Box>(segments[active[i]].geometry), i);
    }
    const BoxTree tree(boxes.begin(), boxes.end());

    std::vector<EndpointFreedom> result(active.size());
    std::vector<IndexedBox> hits;
    for (std::size_t i = 0; i < active.size(); ++i) {
        const LineString& line = segments[active[i]].geometry;
        auto is_free = [&](const Point& end, const Point& other_end) {
            if (bg::distance(end, other_end) <= tolerance) {
                return false;
            }
            hits.clear();
            tree.query(bgi::intersects(point_box(end, tolerance)), std::back_inserter(hits));
            for (const auto& [box, j] : hits) {
                if (j != i && bg::distance(end, segments[active[j]].geometry) <= tolerance) {
                    return false;
                }
            }
            return true;
        };
        result[i].front = is_free(line.front(), line.back());
        result[i].back = is_free(line.back(), line.front());
    }
    return result;
}

// Translates `line[end]` by `distance` away from the nearest distinct vertex
// on its side of the polyline.
void push_end(LineString& line, const LineString& original, bool front, double distance) {
    const std::size_t n = original.size();
    const Point& tip = front ? original.front() : original.back();
    for (std::size_t step = 1; step < n; ++step) {
        const Point& prev = front ? original[step] : original[n - 1 - step];
        const double dx = tip.x() - prev.x();
        const double dy = tip.y() - prev.y();
        const double len = std::hypot(dx, dy);
        if (len > 0.0) {
            Point moved(tip.x() + distance * dx / len, tip.y() + distance * dy / len);
            (front ? line.front() : line.back()) = moved;
            return;
        }
    }
}

}  // namespace

WidthTable default_width_table() { return {{1, 30.0}, {2, 20.0}, {3, 12.0}, {4, 6.0}, {5, 2.0}}; }

RoadLayer merge_road_layers(std::span<const RoadLayer> layers) {
    RoadLayer merged;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const RoadLayer& layer = layers[l];
        if (layer.crs.empty()) {
            throw InputError("road layer " + std::to_string(l) + " has no CRS metadata");
        }
        if (merged.crs.empty()) {
            merged.crs = layer.crs;
        } else if (merged.crs != layer.crs) {
            throw InputError("road layer " + std::to_string(l) + " has CRS '" + layer.crs +
                             "' but earlier layers use '" + merged.crs + "'");
        }
        for (std::size_t s = 0; s < layer.segments.size(); ++s) {
            const RoadSegment& seg = layer.segments[s];
            if (seg.geometry.size() < 2 || !all_finite(seg.geometry)) {
                throw InputError("road layer " + std::to_string(l) + " segment " +
                                 std::to_string(s) +
                                 " needs at least two finite vertices");
            }
            RoadSegment copy = seg;
            copy.id = merged.segments.size();
            merged.segments.push_back(std::move(copy));
        }
    }
    return merged;
}

std::vector<EndpointFreedom> free_endpoints(std::span<const RoadSegment> segments,
                                            double tolerance) {
    std::vector<std::size_t> all(segments.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return freedom_of(segments, all, tolerance);
}

std::vector<RoadSegment> trim_dangles(std::span<const RoadSegment> segments, double threshold_m,
                                      double tolerance) {
    if (!(threshold_m > 0.0)) {
        throw InputError("dangle threshold must be positive");
    }
    std::vector<std::size_t> active(segments.size());
    std::iota(active.begin(), active.end(), std::size_t{0});

    std::vector<double> lengths(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
        lengths[i] = length(segments[i].geometry);
    }

    for (;;) {
        const auto freedom = freedom_of(segments, active, tolerance);
        std::vector<std::size_t> kept;
        kept.reserve(active.size());
        for (std::size_t i = 0; i < active.size(); ++i) {
            const bool dangling = freedom[i].front || freedom[i].back;
            if (!(dangling && lengths[active[i]] < threshold_m)) {
                kept.push_back(active[i]);
            }
        }
        if (kept.size() == active.size()) {
            break;
        }
        active = std::move(kept);
    }

    std::vector<RoadSegment> out;
    out.reserve(active.size());
    for (const std::size_t i : active) {
        out.push_back(segments[i]);
    }
    return out;
}

std::vector<RoadSegment> extend_ends(std::span<const RoadSegment> segments, double extension_m,
                                     double tolerance) {
    if (!(extension_m >= 0.0)) {
        throw InputError("extension length must be non-negative");
    }
    const auto freedom = free_endpoints(segments, tolerance);
    std::vector<RoadSegment> out(segments.begin(), segments.end());
    if (extension_m == 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (freedom[i].front) {
            push_end(out[i].geometry, segments[i].geometry, true, extension_m);
        }
        if (freedom[i].back) {
            push_end(out[i].geometry, segments[i].geometry, false, extension_m);
        }
    }
    return out;
}

RoadSpace build_road_space(std::span<const RoadSegment> segments, const WidthTable& widths) {
    for (const auto& [road_class, width] : widths) {
        if (!(width >= kMinHalfWidth && width <= kMaxHalfWidth)) {
            std::ostringstream msg;
            msg << "half-width " << width << " for road class " << road_class
                << " is outside [" << kMinHalfWidth << ", " << kMaxHalfWidth << "]";
            throw InputError(msg.str());
        }
    }
    std::map<int, MultiLineString> by_class;
    for (const auto& seg : segments) {
        if (!widths.contains(seg.road_class)) {
            throw InputError("road class " + std::to_string(seg.road_class) +
                             " (segment " + std::to_string(seg.id) +
                             ") is not in the width table");
        }
        by_class[seg.road_class].push_back(seg.geometry);
    }

    const bg::strategy::buffer::side_straight side;
    const bg::strategy::buffer::join_miter join(2.0);
    const bg::strategy::buffer::end_flat end;
    const bg::strategy::buffer::point_square point;

    std::vector<MultiPolygon> parts;
    for (const auto& [road_class, lines] : by_class) {
        const bg::strategy::buffer::distance_symmetric<double> distance(widths.at(road_class));
        MultiPolygon buffered;
        bg::buffer(lines, buffered, distance, side, join, end, point);
        parts.push_back(std::move(buffered));
    }

    RoadSpace space;
    space.polygons = union_all(std::move(parts));
    space.total_area = area(space.polygons);
    return space;
}

double DelineationReport::relative_conservation_error() const {
    if (admin_area_m2 <= 0.0) {
        return 0.0;
    }
    return std::abs(admin_area_m2 - (parcel_area_m2 + road_area_m2 + sliver_area_m2)) /
           admin_area_m2;
}

Delineation delineate_parcels(const AdminUnit& admin, const RoadSpace& road_space,
                              double min_parcel_area_m2) {
    const double admin_area = bg::area(admin.boundary);
    if (!(admin_area > 0.0)) {
        throw InputError("administrative unit '" + admin.id + "' has zero area");
    }

    const Box admin_box = bg::return_envelope<Box>(admin.boundary);
    MultiPolygon local;
    for (const auto& poly : road_space.polygons) {
        if (bg::intersects(bg::return_envelope<Box>(poly), admin_box)) {
            local.push_back(poly);
        }
    }

    MultiPolygon remaining;
    MultiPolygon road_inside;
    if (local.empty()) {
        remaining.push_back(admin.boundary);
    } else {
        bg::difference(admin.boundary, local, remaining);
        bg::intersection(admin.boundary, local, road_inside);
    }

    Delineation result;
    result.report.admin_area_m2 = admin_area;
    result.report.road_area_m2 = area(road_inside);
    for (auto& component : remaining) {
        const double a = bg::area(component);
        if (a < min_parcel_area_m2) {
            result.report.sliver_area_m2 += a;
            ++result.report.sliver_count;
            continue;
        }
        result.report.parcel_area_m2 += a;
        result.parcels.push_back(make_parcel(std::move(component), admin.id));
    }
    assign_parcel_ids(result.parcels);
    return result;
}

OverlayResult overlay_admin(std::span<const Parcel> parcels, std::span<const AdminUnit> units,
                            bool split, double tolerance) {
    std::vector<IndexedBox> boxes;
    boxes.reserve(units.size());
    for (std::size_t u = 0; u < units.size(); ++u) {
        boxes.emplace_back(bg::return_envelope<Box>(units[u].boundary), u);
    }
    const BoxTree tree(boxes.begin(), boxes.end());

    OverlayResult result;
    std::vector<IndexedBox> hits;
    for (const Parcel& parcel : parcels) {
        const double parcel_area = bg::area(parcel.geometry);
        const double min_piece = tolerance * bg::perimeter(parcel.geometry);

        hits.clear();
        tree.query(bgi::intersects(bg::return_envelope<Box>(parcel.geometry)),
                   std::back_inserter(hits));
        std::sort(hits.begin(), hits.end(),
                  [](const IndexedBox& a, const IndexedBox& b) { return a.second < b.second; });

        std::vector<std::pair<std::size_t, MultiPolygon>> overlaps;
        double covered = 0.0;
        for (const auto& [box, u] : hits) {
            MultiPolygon inter;
            bg::intersection(parcel.geometry, units[u].boundary, inter);
            const double a = area(inter);
            if (a > min_piece) {
                covered += a;
                overlaps.emplace_back(u, std::move(inter));
            }
        }

        auto emit = [&](Polygon geometry, const std::string& admin_id) {
            Parcel piece = parcel;
            piece.area_km2 = bg::area(geometry) / kSquareMetersPerKm2;
            piece.geometry = std::move(geometry);
            piece.admin_id = admin_id;
            result.parcels.push_back(std::move(piece));
        };

        if (overlaps.empty()) {
            emit(parcel.geometry, std::string(kUnassignedAdmin));
            continue;
        }
        if (!split) {
            const auto best = std::max_element(
                overlaps.begin(), overlaps.end(), [](const auto& a, const auto& b) {
                    return area(a.second) < area(b.second);
                });
            emit(parcel.geometry, units[best->first].id);
            continue;
        }
        if (overlaps.size() == 1 && parcel_area - covered <= min_piece) {
            emit(parcel.geometry, units[overlaps.front().first].id);
            continue;
        }
        for (auto& [u, pieces] : overlaps) {
            for (auto& piece : pieces) {
                if (bg::area(piece) > min_piece) {
                    emit(std::move(piece), units[u].id);
                }
            }
        }
        if (parcel_area - covered > min_piece) {
            MultiPolygon outside;
            outside.push_back(parcel.geometry);
            for (const auto& [u, pieces] : overlaps) {
                MultiPolygon rest;
                bg::difference(outside, units[u].boundary, rest);
                outside = std::move(rest);
            }
            for (auto& piece : outside) {
                if (bg::area(piece) > min_piece) {
                    emit(std::move(piece), std::string(kUnassignedAdmin));
                }
            }
        }
    }

    assign_parcel_ids(result.parcels);
    for (const auto& p : result.parcels) {
        if (p.admin_id == kUnassignedAdmin) {
            result.unassigned.push_back(p.id);
        }
    }
    return result;
}

AicpResult run_aicp(std::span<const RoadLayer> layers, std::span<const AdminUnit> units,
                    const AicpParams& params, unsigned jobs) {
    const RoadLayer merged = merge_road_layers(layers);
    const auto trimmed =
        trim_dangles(merged.segments, params.trim_threshold_m, params.snap_tolerance_m);
    const auto extended = extend_ends(trimmed, params.extension_m, params.snap_tolerance_m);

    double max_width = 0.0;
    for (const auto& [road_class, width] : params.widths) {
        max_width = std::max(max_width, width);
    }

    std::vector<IndexedBox> boxes;
    boxes.reserve(extended.size());
    for (std::size_t i = 0; i < extended.size(); ++i) {
        boxes.emplace_back(bg::return_envelope<Box>(extended[i].geometry), i);
    }
    const BoxTree tree(boxes.begin(), boxes.end());

    // Each unit only needs the road space near it; buffering per unit keeps
    // the boolean operations local.
    std::vector<Delineation> per_unit(units.size());
    parallel_for(units.size(), jobs, [&](std::size_t u) {
        const Box reach = expanded(bg::return_envelope<Box>(units[u].boundary), 2.0 * max_width);
        std::vector<IndexedBox> hits;
        tree.query(bgi::intersects(reach), std::back_inserter(hits));
        std::sort(hits.begin(), hits.end(),
                  [](const IndexedBox& a, const IndexedBox& b) { return a.second < b.second; });
        std::vector<RoadSegment> nearby;
        nearby.reserve(hits.size());
        for (const auto& [box, i] : hits) {
            nearby.push_back(extended[i]);
        }
        const RoadSpace space = build_road_space(nearby, params.widths);
        per_unit[u] = delineate_parcels(units[u], space, params.min_parcel_area_m2);
    });

    AicpResult result;
    result.segments_in = merged.segments.size();
    result.segments_trimmed = merged.segments.size() - trimmed.size();
    for (std::size_t u = 0; u < units.size(); ++u) {
        result.reports[units[u].id] = per_unit[u].report;
        for (auto& p : per_unit[u].parcels) {
            result.parcels.push_back(std::move(p));
        }
    }
    assign_parcel_ids(result.parcels);
    return result;
}

}  // namespace bigmodel
