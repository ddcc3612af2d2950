#pragma once

// Planar geometry vocabulary shared by every module. Coordinates are meters
// in a projected CRS; polygons follow the Boost.Geometry default (clockwise
// outer rings, closed).

#include <cstdint>
#include <span>
#include <vector>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/linestring.hpp>
#include <boost/geometry/geometries/multi_linestring.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace bigmodel {

namespace bg = boost::geometry;

using Point = bg::model::d2::point_xy<double>;
using LineString = bg::model::linestring<Point>;
using MultiLineString = bg::model::multi_linestring<LineString>;
using Polygon = bg::model::polygon<Point>;
using MultiPolygon = bg::model::multi_polygon<Polygon>;
using Box = bg::model::box<Point>;

inline constexpr double kSquareMetersPerKm2 = 1.0e6;

/// Default tolerance for snapping and coincidence tests, in meters.
inline constexpr double kSnapTolerance = 0.01;

/// Axis-aligned rectangle as a closed clockwise polygon.
Polygon make_rectangle(double min_x, double min_y, double max_x, double max_y);

/// Corrects ring orientation/closure in place and reports whether the
/// result is a valid simple polygon with positive area.
bool normalize_polygon(Polygon& polygon);

bool all_finite(const LineString& line);
bool all_finite(const Polygon& polygon);

double length(const LineString& line);

/// Sum of the areas of the member polygons.
double area(const MultiPolygon& polygons);

/// Union of many polygons by pairwise reduction, which keeps the operand
/// sizes balanced.
MultiPolygon union_all(std::vector<MultiPolygon> parts);

}  // namespace bigmodel
