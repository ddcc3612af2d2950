#pragma once

// Shared synthetic inputs for the unit tests.

#include <cstdint>
#include <random>
#include <vector>

#include "bigmodel/parcel.hpp"
#include "bigmodel/road_parcel.hpp"

namespace bigmodel::testing {

inline LineString segment(double x0, double y0, double x1, double y1) {
    return LineString{{x0, y0}, {x1, y1}};
}

inline RoadSegment road(std::uint64_t id, LineString geometry, int road_class = 3) {
    return {id, std::move(geometry), road_class};
}

/// n vertical and m horizontal through-streets spanning [0,w] x [0,h],
/// including the four boundary lines.
inline std::vector<RoadSegment> street_grid(int n, int m, double w, double h, int road_class = 3) {
    std::vector<RoadSegment> roads;
    for (int i = 0; i < n; ++i) {
        const double x = w * i / (n - 1);
        roads.push_back(road(roads.size(), segment(x, 0, x, h), road_class));
    }
    for (int j = 0; j < m; ++j) {
        const double y = h * j / (m - 1);
        roads.push_back(road(roads.size(), segment(0, y, w, y), road_class));
    }
    return roads;
}

inline AdminUnit square_admin(std::string id, double x0, double y0, double size) {
    return {std::move(id), make_rectangle(x0, y0, x0 + size, y0 + size), "unit"};
}

/// Axis-aligned rectangular parcels on a regular grid with `gap` meters of
/// road between them; ids follow assign_parcel_ids.
inline std::vector<Parcel> parcel_grid(int cols, int rows, double cell, double gap,
                                       const std::string& admin = "A", double x0 = 0,
                                       double y0 = 0) {
    std::vector<Parcel> parcels;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double x = x0 + c * (cell + gap);
            const double y = y0 + r * (cell + gap);
            parcels.push_back(make_parcel(make_rectangle(x, y, x + cell, y + cell), admin));
        }
    }
    assign_parcel_ids(parcels);
    return parcels;
}

}  // namespace bigmodel::testing
