#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "facloc/model.hpp"

namespace facloc {

/// Rewrite of a lottery on a two-agent line instance into one supported only
/// on {x_L, M, x_R} inside the extreme interval. p_*/pi_* are the mass and
/// conditional mean over the open halves (x_L, M) and (M, x_R); q_* are the
/// convex coefficients with pi_left = q_left*x_L + (1-q_left)*M and
/// pi_right = q_right*x_R + (1-q_right)*M. pi/q fields are meaningful only
/// when the matching mass is positive.
struct OnlyMDecomposition {
    double p_left{0.0};
    double p_right{0.0};
    double pi_left{0.0};
    double pi_right{0.0};
    double q_left{0.0};
    double q_right{0.0};
};

/// Mixing weight between the prediction-following and the prediction-free
/// mechanism; delta must lie in [0, 0.5].
struct MixtureParam {
    double delta{0.0};

    explicit MixtureParam(double d) : delta(d) {
        if (!(d >= 0.0 && d <= 0.5)) throw std::invalid_argument("MixtureParam: delta outside [0, 0.5]");
    }
};

namespace detail {

inline void require_two_agent_line(const Instance& inst, const char* where) {
    inst.require_line();
    if (inst.size() != 2) throw std::invalid_argument(std::string(where) + ": two-agent instance required");
}

inline double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

} // namespace detail

/// Lower median of the reported locations (ties break to the left).
inline Lottery median_line(const Instance& inst) {
    inst.require_line();
    std::vector<double> xs;
    xs.reserve(inst.size());
    for (const Point& p : inst.points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    return Lottery::degenerate(Point(xs[(xs.size() - 1) / 2]));
}

/// x_L with probability 1/4, x_R with probability 1/4, M with probability 1/2.
inline Lottery lrm(const Instance& inst) {
    inst.require_line();
    const double xl = inst.left(), xr = inst.right();
    return Lottery::canonical({{Point(xl), 0.25}, {Point(xr), 0.25}, {Point(0.5 * (xl + xr)), 0.5}});
}

/// The predicted facility clamped into the extreme interval [x_L, x_R].
inline Lottery minmaxp(const Instance& inst, const Point& f_star) {
    inst.require_line();
    if (f_star.dim != 1) throw std::invalid_argument("minmaxp: 1-D prediction required");
    return Lottery::degenerate(Point(detail::clamp(f_star.x, inst.left(), inst.right())));
}

/// lrm with probability 2*delta, minmaxp with probability 1-2*delta.
inline Lottery mixed_delta(const Instance& inst, const Point& f_star, const MixtureParam& param) {
    const double w = 2.0 * param.delta;
    if (w == 0.0) return minmaxp(inst, f_star);
    if (w == 1.0) return lrm(inst);
    return Lottery::mix({{w, lrm(inst)}, {1.0 - w, minmaxp(inst, f_star)}});
}

inline OnlyMDecomposition onlym_decompose(const Lottery& lot, const Instance& inst) {
    detail::require_two_agent_line(inst, "onlym_decompose");
    lot.validate();
    const double xl = inst.left(), xr = inst.right();
    if (xl == xr) throw std::invalid_argument("onlym_decompose: degenerate instance x_L = x_R");
    const double m = 0.5 * (xl + xr);
    OnlyMDecomposition dec;
    double wl = 0.0, wr = 0.0; // probability-weighted atom sums per open half
    for (const LotteryAtom& a : lot.atoms) {
        const double v = a.point.x;
        if (v > xl && v < m) {
            dec.p_left += a.prob;
            wl += a.prob * v;
        } else if (v > m && v < xr) {
            dec.p_right += a.prob;
            wr += a.prob * v;
        }
    }
    if (dec.p_left > 0.0) {
        dec.pi_left = wl / dec.p_left;
        dec.q_left = detail::clamp((m - dec.pi_left) / (m - xl), 0.0, 1.0);
    }
    if (dec.p_right > 0.0) {
        dec.pi_right = wr / dec.p_right;
        dec.q_right = detail::clamp((dec.pi_right - m) / (xr - m), 0.0, 1.0);
    }
    return dec;
}

/// Moves the open-interval mass onto {x_L, M, x_R}: q_l*p_l to x_L,
/// (1-q_l)*p_l + (1-q_r)*p_r to M, q_r*p_r to x_R. Atoms exactly at x_L, M,
/// x_R and atoms outside [x_L, x_R] are untouched.
inline Lottery onlym_transform(const Lottery& lot, const Instance& inst) {
    detail::require_two_agent_line(inst, "onlym_transform");
    const OnlyMDecomposition dec = onlym_decompose(lot, inst);
    const double xl = inst.left(), xr = inst.right();
    const double m = 0.5 * (xl + xr);
    std::vector<LotteryAtom> raw;
    for (const LotteryAtom& a : lot.atoms) {
        const double v = a.point.x;
        const bool moved = (v > xl && v < m) || (v > m && v < xr);
        if (!moved) raw.push_back(a);
    }
    const double to_left = dec.q_left * dec.p_left;
    const double to_mid = (1.0 - dec.q_left) * dec.p_left + (1.0 - dec.q_right) * dec.p_right;
    const double to_right = dec.q_right * dec.p_right;
    if (to_left > 0.0) raw.push_back({Point(xl), to_left});
    if (to_mid > 0.0) raw.push_back({Point(m), to_mid});
    if (to_right > 0.0) raw.push_back({Point(xr), to_right});
    return Lottery::canonical(std::move(raw));
}

} // namespace facloc
