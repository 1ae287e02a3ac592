#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "facloc/model.hpp"

namespace facloc {

/// Fixed phantom points mixed into the coordinatewise median. Constants of
/// the mechanism, independent of the reports.
struct GcmConfig {
    std::vector<Point> phantoms;
};

/// Ordered identities of the agents predicted to be extreme (0-based).
struct ExtremePrediction {
    std::vector<int> ids;
};

namespace detail {

inline double lower_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

inline void require_ids(const ExtremePrediction& pred, std::size_t n, const char* where) {
    if (pred.ids.size() < 2) throw std::invalid_argument(std::string(where) + ": at least two ids required");
    std::vector<int> seen(n, 0);
    for (int id : pred.ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= n)
            throw std::invalid_argument(std::string(where) + ": id out of range");
        if (seen[id]++) throw std::invalid_argument(std::string(where) + ": duplicate id");
    }
}

} // namespace detail

/// Generalized coordinatewise median: the lower median of each coordinate
/// over the reported locations and the phantom points.
inline Lottery gcm(const Instance& inst, const GcmConfig& cfg) {
    inst.require_plane();
    std::vector<double> xs, ys;
    xs.reserve(inst.size() + cfg.phantoms.size());
    ys.reserve(inst.size() + cfg.phantoms.size());
    for (const Point& p : inst.points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    for (const Point& p : cfg.phantoms) {
        if (p.dim != 2 || !finite(p)) throw std::invalid_argument("gcm: phantoms must be finite 2-D points");
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    return Lottery::degenerate(Point(detail::lower_median(xs), detail::lower_median(ys)));
}

/// Clamps the predicted facility into the bounding box of the reports,
/// coordinate by coordinate.
inline Lottery minimum_bounding_box(const Instance& inst, const Point& f_star) {
    inst.require_plane();
    if (f_star.dim != 2) throw std::invalid_argument("minimum_bounding_box: 2-D prediction required");
    double xlo = inst.points.front().x, xhi = xlo;
    double ylo = inst.points.front().y, yhi = ylo;
    for (const Point& p : inst.points) {
        xlo = std::min(xlo, p.x);
        xhi = std::max(xhi, p.x);
        ylo = std::min(ylo, p.y);
        yhi = std::max(yhi, p.y);
    }
    return Lottery::degenerate(Point(std::clamp(f_star.x, xlo, xhi), std::clamp(f_star.y, ylo, yhi)));
}

/// Centroid of the k predicted-extreme agents with probability 1/2, each of
/// their reported locations with probability 1/(2k). Always uses the
/// reported locations; the prediction contributes identities only.
inline Lottery centroid_extremes(const Instance& inst, const ExtremePrediction& pred) {
    inst.require_plane();
    detail::require_ids(pred, inst.size(), "centroid_extremes");
    std::vector<Point> chosen;
    chosen.reserve(pred.ids.size());
    for (int id : pred.ids) chosen.push_back(inst.points[id]);
    const double k = static_cast<double>(chosen.size());
    std::vector<LotteryAtom> raw;
    raw.push_back({centroid(chosen), 0.5});
    for (const Point& p : chosen) raw.push_back({p, 0.5 / k});
    return Lottery::canonical(std::move(raw));
}

using ExtremeOracle = std::function<ExtremePrediction(const Instance&)>;

/// The accurate prediction source: the ids of the agents on the boundary of
/// the smallest enclosing circle.
inline ExtremeOracle accurate_extreme_oracle(double tie_tol = kTieTol) {
    return [tie_tol](const Instance& inst) { return ExtremePrediction{extreme_ids(inst, tie_tol)}; };
}

/// Requests extreme ids on a perturbed copy of the instance (so that at most
/// three agents are extreme except for seeded coincidences), then runs
/// centroid_extremes on the original reports with those ids.
inline Lottery centroid_extremes_perturbed(const Instance& inst, double epsilon, std::uint64_t seed,
                                           const ExtremeOracle& oracle = accurate_extreme_oracle()) {
    const Instance shaken = perturb(inst, epsilon, seed);
    return centroid_extremes(inst, oracle(shaken));
}

/// Centroid of all reports with probability 1/2, each report with
/// probability 1/(2n).
inline Lottery centroid_all(const Instance& inst) {
    inst.require_plane();
    const double n = static_cast<double>(inst.size());
    std::vector<LotteryAtom> raw;
    raw.push_back({centroid(inst.points), 0.5});
    for (const Point& p : inst.points) raw.push_back({p, 0.5 / n});
    return Lottery::canonical(std::move(raw));
}

} // namespace facloc
