#pragma once

// Test-side oracles, kept independent of the library's computation paths:
// the enclosing circle by candidate enumeration, the circumcenter by
// intersecting perpendicular bisectors, and the orthocenter through the
// centroid identity H = 3G - 2O.

#include <limits>
#include <stdexcept>
#include <vector>

#include "facloc/geometry.hpp"

namespace oracles {

using facloc::Circle;
using facloc::Point;

inline bool contains_all(const Circle& c, const std::vector<Point>& pts, double slack) {
    for (const Point& p : pts)
        if (facloc::distance(c.center, p) > c.radius + slack) return false;
    return true;
}

// Smallest enclosing circle by trying every pair (as a diameter) and every
// non-degenerate triple (as a circumcircle).
inline Circle brute_force_mec(const std::vector<Point>& pts) {
    if (pts.empty()) throw std::invalid_argument("brute_force_mec: empty input");
    const double slack = 1e-10;
    Circle best{pts.front(), std::numeric_limits<double>::infinity()};
    if (contains_all(Circle{pts.front(), 0.0}, pts, slack)) return Circle{pts.front(), 0.0};
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Circle c;
            c.center = Point(0.5 * (pts[i].x + pts[j].x), 0.5 * (pts[i].y + pts[j].y));
            c.radius = 0.5 * facloc::distance(pts[i], pts[j]);
            if (c.radius < best.radius && contains_all(c, pts, slack * (1.0 + c.radius))) best = c;
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                try {
                    const Circle cc = facloc::circumcircle(pts[i], pts[j], pts[k]);
                    if (cc.radius < best.radius && contains_all(cc, pts, slack * (1.0 + cc.radius)))
                        best = cc;
                } catch (const facloc::degenerate_triangle&) {
                }
            }
        }
    return best;
}

// Circumcenter as the intersection of the perpendicular bisectors of ab and
// ac, solved with Cramer's rule.
inline Point bisector_circumcenter(const Point& a, const Point& b, const Point& c) {
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double acx = c.x - a.x, acy = c.y - a.y;
    const double det = abx * acy - aby * acx;
    if (det == 0.0) throw std::invalid_argument("bisector_circumcenter: degenerate");
    const double r1 = abx * 0.5 * (a.x + b.x) + aby * 0.5 * (a.y + b.y);
    const double r2 = acx * 0.5 * (a.x + c.x) + acy * 0.5 * (a.y + c.y);
    return Point((r1 * acy - r2 * aby) / det, (abx * r2 - acx * r1) / det);
}

inline Point euler_orthocenter(const Point& a, const Point& b, const Point& c) {
    const Point o = bisector_circumcenter(a, b, c);
    return Point(a.x + b.x + c.x - 2.0 * o.x, a.y + b.y + c.y - 2.0 * o.y);
}

} // namespace oracles
