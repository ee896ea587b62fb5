#include "beamtraffic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "beamtraffic/error.hpp"

namespace beamtraffic {

namespace {

using boost::multiprecision::cpp_int;

void require_finite(std::span<const Point2> pts) {
    for (const auto& p : pts) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw InvalidArgument("non-finite point coordinate");
        }
    }
}

bool lex_less(const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// Every double is m * 2^e with integer m; scaling all values by the smallest
// such 2^e turns them into exact integers.
template <std::size_t N>
std::array<cpp_int, N> exact_scaled(const std::array<double, N>& v) {
    int emin = std::numeric_limits<int>::max();
    for (double x : v) {
        if (x != 0.0) {
            int e = 0;
            std::frexp(x, &e);
            emin = std::min(emin, e - 53);
        }
    }
    std::array<cpp_int, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        if (v[i] == 0.0) {
            continue;
        }
        int e = 0;
        const double f = std::frexp(v[i], &e);
        out[i] = cpp_int(static_cast<std::int64_t>(std::ldexp(std::abs(f), 53))) << (e - 53 - emin);
        if (v[i] < 0) {
            out[i] = -out[i];
        }
    }
    return out;
}

// Floating-point filter bounds (Shewchuk's A bounds, rounded up).
constexpr double kOrientBound = 3.4e-16;
constexpr double kInCircleBound = 1.2e-15;

// > 0 when c lies left of the directed line a -> b.
int orient2d(const Point2& a, const Point2& b, const Point2& c) {
    const double lhs = (b.x - a.x) * (c.y - a.y);
    const double rhs = (b.y - a.y) * (c.x - a.x);
    const double det = lhs - rhs;
    if (std::abs(det) > kOrientBound * (std::abs(lhs) + std::abs(rhs))) {
        return det > 0.0 ? 1 : -1;
    }
    const auto v = exact_scaled<6>({a.x, a.y, b.x, b.y, c.x, c.y});
    const cpp_int exact = (v[2] - v[0]) * (v[5] - v[1]) - (v[3] - v[1]) * (v[4] - v[0]);
    return exact.sign();
}

// Orientation of the lifted points l(p) = (x, y, x^2 + y^2):
// sign of det[l(b)-l(a); l(c)-l(a); l(d)-l(a)]. Positive means l(d) lies on
// the side of the normal (l(b)-l(a)) x (l(c)-l(a)). Translating all points by
// -a shears the lifted space and leaves the determinant unchanged.
int lifted_orient(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double x1 = b.x - a.x, y1 = b.y - a.y;
    const double x2 = c.x - a.x, y2 = c.y - a.y;
    const double x3 = d.x - a.x, y3 = d.y - a.y;
    const double w1 = x1 * x1 + y1 * y1;
    const double w2 = x2 * x2 + y2 * y2;
    const double w3 = x3 * x3 + y3 * y3;
    const double det = w1 * (x2 * y3 - x3 * y2) - w2 * (x1 * y3 - x3 * y1) + w3 * (x1 * y2 - x2 * y1);
    const double permanent = w1 * (std::abs(x2 * y3) + std::abs(x3 * y2)) +
                             w2 * (std::abs(x1 * y3) + std::abs(x3 * y1)) +
                             w3 * (std::abs(x1 * y2) + std::abs(x2 * y1));
    if (std::abs(det) > kInCircleBound * permanent) {
        return det > 0.0 ? 1 : -1;
    }
    const auto v = exact_scaled<8>({a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y});
    const cpp_int X1 = v[2] - v[0], Y1 = v[3] - v[1];
    const cpp_int X2 = v[4] - v[0], Y2 = v[5] - v[1];
    const cpp_int X3 = v[6] - v[0], Y3 = v[7] - v[1];
    const cpp_int W1 = X1 * X1 + Y1 * Y1;
    const cpp_int W2 = X2 * X2 + Y2 * Y2;
    const cpp_int W3 = X3 * X3 + Y3 * Y3;
    const cpp_int exact = W1 * (X2 * Y3 - X3 * Y2) - W2 * (X1 * Y3 - X3 * Y1) + W3 * (X1 * Y2 - X2 * Y1);
    return exact.sign();
}

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

using Tri = std::array<std::size_t, 3>;

// Incremental 3-D convex hull of the lifted points, returning the
// downward-facing facets projected back to the plane as ccw triangles.
// Requires indices i0..i3 to span a non-degenerate tetrahedron.
std::vector<Tri> lower_hull_facets(const std::vector<Point2>& pts,
                                   const std::array<std::uint32_t, 4>& seed) {
    struct Face {
        std::array<std::uint32_t, 3> v;
        bool alive;
    };
    std::vector<Face> faces;
    std::unordered_map<std::uint64_t, std::uint32_t> edge_owner;

    auto add_face = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        const auto id = static_cast<std::uint32_t>(faces.size());
        faces.push_back({{a, b, c}, true});
        edge_owner[edge_key(a, b)] = id;
        edge_owner[edge_key(b, c)] = id;
        edge_owner[edge_key(c, a)] = id;
    };
    auto add_oriented = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t inner) {
        if (lifted_orient(pts[a], pts[b], pts[c], pts[inner]) > 0) {
            add_face(a, c, b);
        } else {
            add_face(a, b, c);
        }
    };

    const auto [s0, s1, s2, s3] = seed;
    add_oriented(s0, s1, s2, s3);
    add_oriented(s0, s1, s3, s2);
    add_oriented(s0, s2, s3, s1);
    add_oriented(s1, s2, s3, s0);

    std::vector<std::uint32_t> visible_stamp;
    std::vector<std::uint32_t> visible;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> horizon;
    std::size_t alive_count = 4;

    for (std::uint32_t p = 0; p < pts.size(); ++p) {
        if (p == s0 || p == s1 || p == s2 || p == s3) {
            continue;
        }
        visible.clear();
        visible_stamp.resize(faces.size(), 0);
        for (std::uint32_t f = 0; f < faces.size(); ++f) {
            const auto& face = faces[f];
            if (face.alive &&
                lifted_orient(pts[face.v[0]], pts[face.v[1]], pts[face.v[2]], pts[p]) > 0) {
                visible.push_back(f);
                visible_stamp[f] = p + 1;
            }
        }
        if (visible.empty()) {
            // Every lifted point is extreme on a strictly convex paraboloid.
            throw InvariantViolation("lifted point not on hull");
        }
        horizon.clear();
        for (auto f : visible) {
            const auto& v = faces[f].v;
            for (int k = 0; k < 3; ++k) {
                const auto a = v[k];
                const auto b = v[(k + 1) % 3];
                const auto twin = edge_owner.at(edge_key(b, a));
                if (visible_stamp[twin] != p + 1) {
                    horizon.emplace_back(a, b);
                }
            }
        }
        for (auto f : visible) {
            auto& face = faces[f];
            face.alive = false;
            for (int k = 0; k < 3; ++k) {
                const auto key = edge_key(face.v[k], face.v[(k + 1) % 3]);
                auto it = edge_owner.find(key);
                if (it != edge_owner.end() && it->second == f) {
                    edge_owner.erase(it);
                }
            }
        }
        for (const auto& [a, b] : horizon) {
            add_face(a, b, p);
        }
        alive_count = alive_count - visible.size() + horizon.size();

        if (faces.size() > 4 * alive_count + 64) {
            std::vector<Face> compact;
            compact.reserve(alive_count);
            for (const auto& f : faces) {
                if (f.alive) {
                    compact.push_back(f);
                }
            }
            faces.clear();
            edge_owner.clear();
            for (const auto& f : compact) {
                add_face(f.v[0], f.v[1], f.v[2]);
            }
        }
    }

    std::vector<Tri> out;
    for (const auto& f : faces) {
        if (!f.alive) {
            continue;
        }
        const auto& v = f.v;
        // The facet normal's z component is the planar orientation.
        if (orient2d(pts[v[0]], pts[v[1]], pts[v[2]]) < 0) {
            out.push_back({v[0], v[2], v[1]});
        }
    }
    return out;
}

// Hull vertex indices in ccw order starting at the lexicographically
// smallest point, collinear points dropped. Empty result when collinear.
std::vector<std::size_t> monotone_chain(const std::vector<Point2>& pts) {
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lex_less(pts[a], pts[b]); });
    order.erase(std::unique(order.begin(), order.end(),
                            [&](std::size_t a, std::size_t b) { return pts[a] == pts[b]; }),
                order.end());
    if (order.size() < 3) {
        return {};
    }
    std::vector<std::size_t> hull(2 * order.size());
    std::size_t k = 0;
    for (auto i : order) {
        while (k >= 2 && orient2d(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0) {
            --k;
        }
        hull[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (auto it = order.rbegin() + 1; it != order.rend(); ++it) {
        while (k >= lower && orient2d(pts[hull[k - 2]], pts[hull[k - 1]], pts[*it]) <= 0) {
            --k;
        }
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    if (hull.size() < 3) {
        return {};
    }
    return hull;
}

// Re-triangulates every co-circular region as a fan from its lowest-index
// vertex by flipping shared diagonals of exactly co-circular quads.
void canonicalize_cocircular(const std::vector<Point2>& pts, std::vector<Tri>& tris) {
    bool flipped = true;
    while (flipped) {
        flipped = false;
        std::unordered_map<std::uint64_t, std::size_t> owner;
        owner.reserve(tris.size() * 3);
        for (std::size_t t = 0; t < tris.size(); ++t) {
            for (int k = 0; k < 3; ++k) {
                owner[edge_key(static_cast<std::uint32_t>(tris[t][k]),
                               static_cast<std::uint32_t>(tris[t][(k + 1) % 3]))] = t;
            }
        }
        std::vector<char> touched(tris.size(), 0);
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (touched[t]) {
                continue;
            }
            for (int k = 0; k < 3; ++k) {
                const auto a = tris[t][k];
                const auto b = tris[t][(k + 1) % 3];
                const auto c = tris[t][(k + 2) % 3];
                auto it = owner.find(edge_key(static_cast<std::uint32_t>(b),
                                              static_cast<std::uint32_t>(a)));
                if (it == owner.end() || touched[it->second]) {
                    continue;
                }
                const auto u = it->second;
                std::size_t d = 0;
                for (auto v : tris[u]) {
                    if (v != a && v != b) {
                        d = v;
                    }
                }
                const auto lowest = std::min({a, b, c, d});
                if (lowest == a || lowest == b) {
                    continue;
                }
                if (lifted_orient(pts[a], pts[b], pts[c], pts[d]) != 0) {
                    continue;
                }
                tris[t] = {a, d, c};
                tris[u] = {d, b, c};
                touched[t] = touched[u] = 1;
                flipped = true;
                break;
            }
        }
    }
}

Polygon polygon_from(std::span<const Point2> pts, const std::vector<std::size_t>& idx) {
    Polygon poly;
    poly.vertices.reserve(idx.size());
    for (auto i : idx) {
        poly.vertices.push_back(pts[i]);
    }
    return poly;
}

}  // namespace

double Polygon::area() const {
    double twice = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[(i + 1) % vertices.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

Triangulation delaunay(std::span<const Point2> points) {
    if (points.size() < 3) {
        throw InvalidArgument("delaunay needs at least 3 points");
    }
    require_finite(points);

    Triangulation out;
    std::vector<Point2> unique;
    std::map<std::pair<double, double>, std::size_t> seen;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (seen.emplace(std::pair{points[i].x, points[i].y}, i).second) {
            out.points.push_back(points[i]);
            out.source_index.push_back(i);
            unique.push_back(points[i]);
        } else {
            ++out.duplicates_removed;
        }
    }
    if (unique.size() < 3) {
        throw CollinearInput();
    }

    const auto n = static_cast<std::uint32_t>(unique.size());
    std::uint32_t i2 = 2;
    while (i2 < n && orient2d(unique[0], unique[1], unique[i2]) == 0) {
        ++i2;
    }
    if (i2 == n) {
        throw CollinearInput();
    }
    std::uint32_t i3 = 2;
    while (i3 < n && (i3 == i2 || lifted_orient(unique[0], unique[1], unique[i2], unique[i3]) == 0)) {
        ++i3;
    }

    std::vector<Tri> tris;
    if (i3 == n) {
        // All points co-circular: the lifted set is planar and the whole hull
        // is one flat facet, fanned from vertex 0.
        auto ring = monotone_chain(unique);
        if (ring.size() != unique.size()) {
            throw InvariantViolation("co-circular points missing from hull");
        }
        const auto start = std::find(ring.begin(), ring.end(), std::size_t{0});
        std::rotate(ring.begin(), start, ring.end());
        for (std::size_t k = 1; k + 1 < ring.size(); ++k) {
            tris.push_back({ring[0], ring[k], ring[k + 1]});
        }
    } else {
        tris = lower_hull_facets(unique, {0u, 1u, i2, i3});
        canonicalize_cocircular(unique, tris);
    }

    for (auto& t : tris) {
        std::rotate(t.begin(), std::min_element(t.begin(), t.end()), t.end());
    }
    std::sort(tris.begin(), tris.end());
    out.triangles = std::move(tris);
    return out;
}

Polygon triangulation_hull(const Triangulation& tri) {
    std::unordered_map<std::uint64_t, char> directed;
    for (const auto& t : tri.triangles) {
        for (int k = 0; k < 3; ++k) {
            directed[edge_key(static_cast<std::uint32_t>(t[k]),
                              static_cast<std::uint32_t>(t[(k + 1) % 3]))] = 1;
        }
    }
    std::unordered_map<std::size_t, std::size_t> next;
    for (const auto& t : tri.triangles) {
        for (int k = 0; k < 3; ++k) {
            const auto a = t[k];
            const auto b = t[(k + 1) % 3];
            if (!directed.count(edge_key(static_cast<std::uint32_t>(b),
                                         static_cast<std::uint32_t>(a)))) {
                next[a] = b;
            }
        }
    }
    if (next.size() < 3) {
        throw CollinearInput();
    }
    std::size_t start = next.begin()->first;
    for (const auto& [v, _] : next) {
        if (lex_less(tri.points[v], tri.points[start])) {
            start = v;
        }
    }
    std::vector<std::size_t> ring;
    std::size_t cur = start;
    do {
        ring.push_back(cur);
        cur = next.at(cur);
        if (ring.size() > next.size()) {
            throw InvariantViolation("triangulation boundary is not a simple cycle");
        }
    } while (cur != start);

    std::vector<std::size_t> strict;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const auto prev = ring[(i + ring.size() - 1) % ring.size()];
        const auto nxt = ring[(i + 1) % ring.size()];
        if (orient2d(tri.points[prev], tri.points[ring[i]], tri.points[nxt]) != 0) {
            strict.push_back(ring[i]);
        }
    }
    return polygon_from(tri.points, strict);
}

Polygon convex_hull(std::span<const Point2> points) {
    if (points.size() < 3) {
        throw InvalidArgument("convex hull needs at least 3 points");
    }
    require_finite(points);
    const auto ring = monotone_chain(std::vector<Point2>(points.begin(), points.end()));
    if (ring.empty()) {
        throw CollinearInput();
    }
    return polygon_from(points, ring);
}

bool point_in_polygon(const Point2& p, const Polygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) {
        return false;
    }
    const double orientation = poly.area() >= 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double px = p.x - a.x, py = p.y - a.y;
        const double cross = orientation * (ex * py - ey * px);
        // Relative slack absorbs rounding for points on an edge.
        const double slack = 1e-10 * std::hypot(ex, ey) * std::hypot(px, py);
        if (cross < -slack) {
            return false;
        }
    }
    return true;
}

}  // namespace beamtraffic
