#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "facloc/rng.hpp"

namespace facloc {

/// A location in 1-D or 2-D Euclidean space. For dim == 1 only `x` is
/// meaningful and `y` is kept at 0 so that 1-D points can be lifted to the
/// plane for free.
struct Point {
    double x{0.0};
    double y{0.0};
    int dim{2};

    Point() = default;
    explicit Point(double x_) : x(x_), y(0.0), dim(1) {}
    Point(double x_, double y_) : x(x_), y(y_), dim(2) {}

    Point lifted() const { return dim == 2 ? *this : Point(x, 0.0); }
};

inline bool finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Circle {
    Point center;       // 2-D
    double radius{0.0}; // >= 0
};

/// Circumcenter O, centroid G, orthocenter H and circumradius R of a
/// triangle. O, G, H are collinear with d(O,G) = d(O,H)/3.
struct EulerReport {
    Point circumcenter;
    Point centroid;
    Point orthocenter;
    double circumradius{0.0};
};

struct degenerate_triangle : std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {

inline void require_planar(const Point& p, const char* where) {
    if (p.dim != 2) throw std::invalid_argument(std::string(where) + ": 2-D point required");
}

inline double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// max pairwise distance of a triangle, used as the scale of degeneracy tests
inline double triangle_scale(const Point& a, const Point& b, const Point& c);

} // namespace detail

inline double distance(const Point& p, const Point& q) {
    if (p.dim != q.dim) throw std::invalid_argument("distance: dimension mismatch");
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline Point centroid(const std::vector<Point>& points) {
    if (points.empty()) throw std::invalid_argument("centroid: empty input");
    const int dim = points.front().dim;
    double sx = 0.0, sy = 0.0;
    for (const Point& p : points) {
        if (p.dim != dim) throw std::invalid_argument("centroid: dimension mismatch");
        sx += p.x;
        sy += p.y;
    }
    const double n = static_cast<double>(points.size());
    Point g(sx / n, sy / n);
    g.dim = dim;
    return g;
}

inline double detail::triangle_scale(const Point& a, const Point& b, const Point& c) {
    return std::max({distance(a, b), distance(b, c), distance(a, c)});
}

/// Circle through three non-collinear points. Degeneracy test is
/// scale-relative: |cross| <= 1e-12 * scale^2 signals a degenerate triangle.
inline Circle circumcircle(const Point& a, const Point& b, const Point& c) {
    detail::require_planar(a, "circumcircle");
    detail::require_planar(b, "circumcircle");
    detail::require_planar(c, "circumcircle");
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double cr = detail::cross(bx, by, cx, cy);
    const double scale = detail::triangle_scale(a, b, c);
    if (std::abs(cr) <= 1e-12 * scale * scale)
        throw degenerate_triangle("circumcircle: collinear or duplicate points");
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    const double d = 2.0 * cr;
    const double ux = (cy * b2 - by * c2) / d;
    const double uy = (bx * c2 - cx * b2) / d;
    Circle out;
    out.center = Point(a.x + ux, a.y + uy);
    out.radius = std::sqrt(ux * ux + uy * uy);
    return out;
}

/// Intersection of the altitudes from a and b.
inline Point orthocenter(const Point& a, const Point& b, const Point& c) {
    detail::require_planar(a, "orthocenter");
    detail::require_planar(b, "orthocenter");
    detail::require_planar(c, "orthocenter");
    // (H - a) . (c - b) = 0 and (H - b) . (c - a) = 0
    const double e1x = c.x - b.x, e1y = c.y - b.y;
    const double e2x = c.x - a.x, e2y = c.y - a.y;
    const double det = detail::cross(e1x, e1y, e2x, e2y);
    const double scale = detail::triangle_scale(a, b, c);
    if (std::abs(det) <= 1e-12 * scale * scale)
        throw degenerate_triangle("orthocenter: collinear or duplicate points");
    const double r1 = e1x * a.x + e1y * a.y;
    const double r2 = e2x * b.x + e2y * b.y;
    return Point((r1 * e2y - r2 * e1y) / det, (e1x * r2 - e2x * r1) / det);
}

inline EulerReport euler_data(const Point& a, const Point& b, const Point& c) {
    EulerReport rep;
    const Circle cc = circumcircle(a, b, c);
    rep.circumcenter = cc.center;
    rep.circumradius = cc.radius;
    rep.centroid = centroid({a, b, c});
    rep.orthocenter = orthocenter(a, b, c);
    return rep;
}

/// Closed-triangle membership with a scale-relative slack.
inline bool point_in_triangle(const Point& p, const Point& a, const Point& b, const Point& c,
                              double tol = 1e-12) {
    const double s = detail::triangle_scale(a, b, c);
    const double slack = tol * s * s;
    const double d1 = detail::cross(b.x - a.x, b.y - a.y, p.x - a.x, p.y - a.y);
    const double d2 = detail::cross(c.x - b.x, c.y - b.y, p.x - b.x, p.y - b.y);
    const double d3 = detail::cross(a.x - c.x, a.y - c.y, p.x - c.x, p.y - c.y);
    const bool has_neg = d1 < -slack || d2 < -slack || d3 < -slack;
    const bool has_pos = d1 > slack || d2 > slack || d3 > slack;
    return !(has_neg && has_pos);
}

namespace detail {

inline bool circle_contains(const Circle& c, const Point& p, double slack = 1e-12) {
    return distance(c.center, p) <= c.radius + slack * (1.0 + c.radius);
}

inline Circle circle_from_pair(const Point& a, const Point& b) {
    Circle c;
    c.center = Point(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
    c.radius = 0.5 * distance(a, b);
    return c;
}

// Circle with all boundary points on its rim: for three points the
// circumcircle. A degenerate (collinear) triple falls back to the widest
// pair circle, which encloses the redundant middle point.
inline Circle circle_from_boundary(const std::vector<Point>& r) {
    if (r.empty()) return Circle{Point(0.0, 0.0), 0.0};
    if (r.size() == 1) return Circle{r[0], 0.0};
    if (r.size() == 2) return circle_from_pair(r[0], r[1]);
    try {
        return circumcircle(r[0], r[1], r[2]);
    } catch (const degenerate_triangle&) {
        Circle best = circle_from_pair(r[0], r[1]);
        for (int i = 0; i < 3; ++i) {
            const Circle c = circle_from_pair(r[i], r[(i + 1) % 3]);
            if (c.radius > best.radius) best = c;
        }
        return best;
    }
}

inline Circle welzl(std::vector<Point>& pts, std::size_t n, std::vector<Point>& boundary) {
    if (n == 0 || boundary.size() == 3) return circle_from_boundary(boundary);
    const Point p = pts[n - 1];
    Circle c = welzl(pts, n - 1, boundary);
    if (circle_contains(c, p)) return c;
    boundary.push_back(p);
    c = welzl(pts, n - 1, boundary);
    boundary.pop_back();
    return c;
}

} // namespace detail

/// Smallest circle enclosing all points (Welzl). The input order is
/// randomized with a fixed internal seed, so the result is deterministic.
inline Circle min_enclosing_circle(const std::vector<Point>& points) {
    if (points.empty()) throw std::invalid_argument("min_enclosing_circle: empty input");
    std::vector<Point> pts;
    pts.reserve(points.size());
    for (const Point& p : points) {
        detail::require_planar(p, "min_enclosing_circle");
        pts.push_back(p);
    }
    SplitMix64 rng(0x7a636f6c636166ULL);
    for (std::size_t i = pts.size(); i > 1; --i)
        std::swap(pts[i - 1], pts[rng.next_u64() % i]);
    std::vector<Point> boundary;
    return detail::welzl(pts, pts.size(), boundary);
}

} // namespace facloc
