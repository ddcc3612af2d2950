#include "bigmodel/geometry.hpp"

#include <cmath>
#include <utility>

namespace bigmodel {

Polygon make_rectangle(double min_x, double min_y, double max_x, double max_y) {
    Polygon p;
    auto& ring = p.outer();
    ring = {{min_x, min_y}, {min_x, max_y}, {max_x, max_y}, {max_x, min_y}, {min_x, min_y}};
    return p;
}

bool normalize_polygon(Polygon& polygon) {
    if (polygon.outer().size() < 3) {
        return false;
    }
    bg::correct(polygon);
    return all_finite(polygon) && bg::is_valid(polygon) && bg::area(polygon) > 0.0;
}

bool all_finite(const LineString& line) {
    for (const auto& p : line) {
        if (!std::isfinite(p.x()) || !std::isfinite(p.y())) {
            return false;
        }
    }
    return true;
}

bool all_finite(const Polygon& polygon) {
    auto ring_ok = [](const auto& ring) {
        for (const auto& p : ring) {
            if (!std::isfinite(p.x()) || !std::isfinite(p.y())) {
                return false;
            }
        }
        return true;
    };
    if (!ring_ok(polygon.outer())) {
        return false;
    }
    for (const auto& inner : polygon.inners()) {
        if (!ring_ok(inner)) {
            return false;
        }
    }
    return true;
}

double length(const LineString& line) { return bg::length(line); }

double area(const MultiPolygon& polygons) {
    double total = 0.0;
    for (const auto& p : polygons) {
        total += bg::area(p);
    }
    return total;
}

MultiPolygon union_all(std::vector<MultiPolygon> parts) {
    if (parts.empty()) {
        return {};
    }
    while (parts.size() > 1) {
        std::vector<MultiPolygon> next;
        next.reserve((parts.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
            MultiPolygon merged;
            bg::union_(parts[i], parts[i + 1], merged);
            next.push_back(std::move(merged));
        }
        if (parts.size() % 2 == 1) {
            next.push_back(std::move(parts.back()));
        }
        parts = std::move(next);
    }
    return std::move(parts.front());
}

}  // namespace bigmodel
