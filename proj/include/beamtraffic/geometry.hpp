#pragma once

// Planar computational geometry for beam-border delimitation.
//
// Delaunay triangulation is built by lifting every point onto the paraboloid
// z = x^2 + y^2 and keeping the downward-facing facets of the 3-D convex hull
// of the lifted set. Orientation and in-circle predicates are exact on the
// input doubles: a floating-point filter decides clear cases and the rest are
// evaluated in arbitrary-precision integers. Only bit-identical points count
// as duplicates.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "beamtraffic/geo.hpp"

namespace beamtraffic {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

// Geographic points are treated as planar (x = lon, y = lat) in degrees.
inline Point2 to_planar(const GeoPoint& p) { return {p.lon, p.lat}; }

/// Closed polygon, counter-clockwise, last vertex connects to the first.
struct Polygon {
    std::vector<Point2> vertices;

    std::size_t size() const { return vertices.size(); }
    double area() const;  // signed shoelace area; positive for ccw
};

struct Triangulation {
    std::vector<Point2> points;                 // distinct input points, first-occurrence order
    std::vector<std::size_t> source_index;      // points[i] came from input[source_index[i]]
    std::vector<std::array<std::size_t, 3>> triangles;  // ccw vertex indices into points
    std::size_t duplicates_removed = 0;
};

/// Delaunay triangulation via paraboloid lifting. Co-circular regions are
/// triangulated as a fan from their lowest-index vertex. Throws
/// InvalidArgument for fewer than 3 input points and CollinearInput when
/// fewer than 3 are distinct or every point lies on one line.
Triangulation delaunay(std::span<const Point2> points);

/// Boundary of a triangulation as a strictly convex ccw polygon.
Polygon triangulation_hull(const Triangulation& tri);

/// Convex hull by monotone chain on the same exact predicates. Collinear
/// boundary points are dropped. Output starts at the lexicographically
/// smallest (x, y) vertex.
Polygon convex_hull(std::span<const Point2> points);

/// Closed-polygon membership: boundary points count as inside. Works for any
/// convex polygon in either orientation.
bool point_in_polygon(const Point2& p, const Polygon& poly);
inline bool point_in_polygon(const GeoPoint& p, const Polygon& poly) {
    return point_in_polygon(to_planar(p), poly);
}

}  // namespace beamtraffic
