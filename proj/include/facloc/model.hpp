#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "facloc/geometry.hpp"
#include "facloc/rng.hpp"

namespace facloc {

constexpr double kProbTol = 1e-12;   // lottery probabilities must sum to 1 within this
constexpr double kMergeTol = 1e-12;  // atoms closer than this per coordinate are merged
constexpr double kTieTol = 1e-9;     // extreme-agent tie tolerance, scale-relative

/// A reported location profile. Agents are addressed by 0-based index.
struct Instance {
    int dim{2}; // 1 or 2
    std::vector<Point> points;

    Instance() = default;
    Instance(int dim_, std::vector<Point> pts) : dim(dim_), points(std::move(pts)) { validate(); }

    std::size_t size() const { return points.size(); }

    void validate() const {
        if (dim != 1 && dim != 2) throw std::invalid_argument("Instance: dim must be 1 or 2");
        if (points.empty()) throw std::invalid_argument("Instance: at least one agent required");
        for (const Point& p : points) {
            if (p.dim != dim) throw std::invalid_argument("Instance: point dimension mismatch");
            if (!finite(p)) throw std::invalid_argument("Instance: non-finite coordinate");
        }
    }

    // 1-D derived quantities
    double left() const {
        require_line();
        double v = points.front().x;
        for (const Point& p : points) v = std::min(v, p.x);
        return v;
    }
    double right() const {
        require_line();
        double v = points.front().x;
        for (const Point& p : points) v = std::max(v, p.x);
        return v;
    }
    double midpoint() const { return 0.5 * (left() + right()); }

    void require_line() const {
        if (dim != 1) throw std::invalid_argument("Instance: 1-D instance required");
    }
    void require_plane() const {
        if (dim != 2) throw std::invalid_argument("Instance: 2-D instance required");
    }
};

/// Tagged union of the supported prediction types: the full location profile,
/// the optimal facility location, the identities of the extreme agents, or
/// nothing. Only the fields of the active kind are meaningful.
struct Prediction {
    enum class Kind { none, full_locations, optimal_facility, extreme_ids };

    Kind kind{Kind::none};
    std::vector<Point> locations; // full_locations
    Point facility;               // optimal_facility
    std::vector<int> ids;         // extreme_ids, 0-based

    static Prediction none() { return Prediction{}; }
    static Prediction full(std::vector<Point> locs) {
        Prediction p;
        p.kind = Kind::full_locations;
        p.locations = std::move(locs);
        return p;
    }
    static Prediction optimal(Point f) {
        Prediction p;
        p.kind = Kind::optimal_facility;
        p.facility = f;
        return p;
    }
    static Prediction extremes(std::vector<int> ids) {
        Prediction p;
        p.kind = Kind::extreme_ids;
        p.ids = std::move(ids);
        return p;
    }
};

struct LotteryAtom {
    Point point;
    double prob{0.0};
};

/// A finitely supported distribution over facility locations. Canonical form:
/// atoms sorted by coordinates, coincident atoms merged, zero-mass atoms
/// dropped, probabilities summing to 1 within kProbTol.
struct Lottery {
    std::vector<LotteryAtom> atoms;

    static Lottery canonical(std::vector<LotteryAtom> raw) {
        std::vector<LotteryAtom> kept;
        kept.reserve(raw.size());
        for (const LotteryAtom& a : raw) {
            if (a.prob < 0.0) throw std::invalid_argument("Lottery: negative probability");
            if (a.prob > 0.0) kept.push_back(a);
        }
        if (kept.empty()) throw std::invalid_argument("Lottery: empty support");
        std::sort(kept.begin(), kept.end(), [](const LotteryAtom& a, const LotteryAtom& b) {
            if (a.point.x != b.point.x) return a.point.x < b.point.x;
            return a.point.y < b.point.y;
        });
        Lottery out;
        for (const LotteryAtom& a : kept) {
            if (!out.atoms.empty() && std::abs(out.atoms.back().point.x - a.point.x) <= kMergeTol &&
                std::abs(out.atoms.back().point.y - a.point.y) <= kMergeTol) {
                out.atoms.back().prob += a.prob;
            } else {
                out.atoms.push_back(a);
            }
        }
        out.validate();
        return out;
    }

    static Lottery degenerate(const Point& p) { return canonical({{p, 1.0}}); }

    void validate() const {
        if (atoms.empty()) throw std::invalid_argument("Lottery: empty support");
        double sum = 0.0;
        const int dim = atoms.front().point.dim;
        for (const LotteryAtom& a : atoms) {
            if (a.point.dim != dim) throw std::invalid_argument("Lottery: mixed dimensions");
            if (a.prob <= 0.0) throw std::invalid_argument("Lottery: nonpositive probability");
            sum += a.prob;
        }
        if (std::abs(sum - 1.0) > kProbTol)
            throw std::invalid_argument("Lottery: probabilities do not sum to 1");
    }

    /// Convex mixture of lotteries; weights must sum to 1.
    static Lottery mix(const std::vector<std::pair<double, Lottery>>& parts) {
        std::vector<LotteryAtom> raw;
        for (const auto& [w, lot] : parts) {
            if (w < 0.0) throw std::invalid_argument("Lottery::mix: negative weight");
            for (const LotteryAtom& a : lot.atoms) raw.push_back({a.point, w * a.prob});
        }
        return canonical(std::move(raw));
    }
};

/// Egalitarian optimum: facility o(x) and its cost (the radius of the
/// smallest enclosing circle; the half-width of the extreme interval in 1-D).
struct OptimalSolution {
    Point facility;
    double cost{0.0};
};

inline double agent_expected_cost(const Lottery& lot, const Point& agent) {
    lot.validate();
    double s = 0.0;
    for (const LotteryAtom& a : lot.atoms) s += a.prob * distance(agent, a.point);
    return s;
}

/// C(f, x): the expected maximum agent distance, computed exactly over the
/// finite support.
inline double egalitarian_cost(const Lottery& lot, const Instance& inst) {
    lot.validate();
    double total = 0.0;
    for (const LotteryAtom& a : lot.atoms) {
        double worst = 0.0;
        for (const Point& p : inst.points) worst = std::max(worst, distance(p, a.point));
        total += a.prob * worst;
    }
    return total;
}

inline OptimalSolution optimal_solution(const Instance& inst) {
    OptimalSolution opt;
    if (inst.dim == 1) {
        opt.facility = Point(inst.midpoint());
        opt.cost = 0.5 * (inst.right() - inst.left());
    } else {
        const Circle mec = min_enclosing_circle(inst.points);
        opt.facility = mec.center;
        opt.cost = mec.radius;
    }
    return opt;
}

/// C(f,x) / C(o(x),x). A zero optimum yields 1 when the lottery also has zero
/// cost (unanimity) and infinity otherwise.
inline double approx_ratio(const Lottery& lot, const Instance& inst) {
    const double cost = egalitarian_cost(lot, inst);
    const double opt = optimal_solution(inst).cost;
    if (opt == 0.0) return cost == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return cost / opt;
}

/// Displaces every point by an independent seeded offset of norm <= epsilon.
/// Deterministic per seed. Used to break cocircular ties before requesting
/// extreme-agent predictions.
inline Instance perturb(const Instance& inst, double epsilon, std::uint64_t seed) {
    inst.require_plane();
    if (!(epsilon > 0.0)) throw std::invalid_argument("perturb: epsilon must be positive");
    SplitMix64 rng(seed);
    Instance out = inst;
    for (Point& p : out.points) {
        const double ang = rng.uniform(0.0, 6.283185307179586476925286766559);
        const double r = epsilon * std::sqrt(rng.uniform());
        p.x += r * std::cos(ang);
        p.y += r * std::sin(ang);
    }
    return out;
}

/// Indices of the agents within tie_tol of the maximum distance from the
/// optimal facility. For n >= 2 distinct points at least two indices are
/// returned (the enclosing circle is supported by at least two points).
inline std::vector<int> extreme_ids(const Instance& inst, double tie_tol = kTieTol) {
    const OptimalSolution opt = optimal_solution(inst);
    std::vector<int> ids;
    const double cutoff = opt.cost - tie_tol * (1.0 + opt.cost);
    for (std::size_t i = 0; i < inst.points.size(); ++i)
        if (distance(inst.points[i], opt.facility) >= cutoff) ids.push_back(static_cast<int>(i));
    return ids;
}

} // namespace facloc
