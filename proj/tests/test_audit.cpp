#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "facloc/audit.hpp"
#include "test_helpers.hpp"

using namespace facloc;
using Catch::Matchers::WithinAbs;

namespace {

Instance line2(double a, double b) { return Instance(1, {Point(a), Point(b)}); }

bool all_pass(const std::vector<TruthReport>& reps) {
    for (const auto& r : reps)
        if (!r.pass) return false;
    return true;
}

// wraps a fixed lottery as a two-agent line mechanism
Mechanism fixed_lottery_mechanism(const Lottery& lot) {
    return {"fixed", 1, Prediction::Kind::none,
            [lot](const Instance&, const Prediction&) { return lot; }};
}

} // namespace

TEST_CASE("truthfulness audit on reference mechanisms") {
    CHECK(all_pass(audit_truthfulness(mechanism_lrm(), line2(0.0, 1.0), Prediction::none())));

    const Instance inst = line2(0.0, 2.0);
    CHECK(all_pass(audit_truthfulness(mechanism_minmaxp(), inst, Prediction::optimal(Point(5.0)))));

    const auto broken = audit_truthfulness(mechanism_broken_line(), line2(0.0, 1.0), Prediction::none());
    REQUIRE(!all_pass(broken));
    bool found_gain = false;
    for (const auto& r : broken) found_gain = found_gain || r.margin < -1e-9;
    CHECK(found_gain);
}

TEST_CASE("estimators on the mixture family") {
    const Mechanism quarter = mechanism_mixed(0.25);
    const InstanceGenerator gen = gen_two_agent_line();
    CHECK_THAT(estimate_consistency(quarter, gen, 100, 7), WithinAbs(1.25, 1e-9));
    CHECK_THAT(estimate_robustness(quarter, gen, adversary_facility_grid(), 100, 7),
               WithinAbs(1.75, 1e-3));

    CHECK_THAT(estimate_robustness(mechanism_minmaxp(), gen, adversary_facility_grid(), 100, 7),
               WithinAbs(2.0, 1e-3));
}

TEST_CASE("estimators on plane mechanisms") {
    // the enclosing-circle center lies inside the bounding box, so the clamp
    // returns it unchanged regardless of n
    CHECK_THAT(estimate_consistency(mechanism_mbb(), gen_plane(2, 2), 150, 9), WithinAbs(1.0, 1e-9));
    CHECK_THAT(estimate_consistency(mechanism_mbb(), gen_plane(2, 10), 150, 9), WithinAbs(1.0, 1e-9));
    CHECK(estimate_consistency(mechanism_centroid_extremes(), gen_plane(2, 12), 300, 9) <=
          5.0 / 3.0 + 1e-9);
    CHECK(estimate_robustness(mechanism_centroid_extremes(), gen_plane(2, 7), adversary_extreme_ids(),
                              40, 9) <= 2.0 + 1e-9);
}

TEST_CASE("tradeoff sweep endpoints and frontier identity") {
    const auto pts = tradeoff_sweep({0.0, 0.25, 0.5}, 120, 42);
    REQUIRE(pts.size() == 3);
    CHECK_THAT(pts[0].consistency, WithinAbs(1.0, 1e-9));
    CHECK_THAT(pts[0].robustness, WithinAbs(2.0, 1e-3));
    CHECK_THAT(pts[1].consistency, WithinAbs(1.25, 1e-9));
    CHECK_THAT(pts[1].robustness, WithinAbs(1.75, 1e-3));
    CHECK_THAT(pts[2].consistency, WithinAbs(1.5, 1e-9));
    CHECK_THAT(pts[2].robustness, WithinAbs(1.5, 1e-3));
    for (const auto& p : pts) CHECK_THAT(p.consistency + p.robustness, WithinAbs(3.0, 1.1e-3));
}

TEST_CASE("lower-bound probe: the quartile lottery sits on the boundary") {
    const ProbeReport rep = lower_bound_probe_line(mechanism_mixed(0.5), 0.5, line2(0.0, 1.0));
    CHECK_THAT(rep.p_leq_l, WithinAbs(0.25, 1e-12));
    CHECK_THAT(rep.p_m, WithinAbs(0.5, 1e-12));
    CHECK_THAT(rep.robustness_bound, WithinAbs(0.25, 1e-12));
    CHECK_THAT(rep.consistency_value, WithinAbs(0.5, 1e-12));
    CHECK(rep.robustness_side_ok);
    CHECK(rep.consistency_side_ok);
    CHECK(rep.binding == "both");
}

TEST_CASE("lower-bound probe: the clamped prediction binds on the consistency side") {
    const ProbeReport rep = lower_bound_probe_line(mechanism_minmaxp(), 0.0, line2(0.0, 1.0));
    CHECK_THAT(rep.p_m, WithinAbs(1.0, 1e-12));
    CHECK(rep.p_leq_l == 0.0);
    CHECK(rep.consistency_side_ok);
    CHECK(rep.consistency_side_binds);
    CHECK(rep.binding == "consistency");
}

TEST_CASE("claiming a point beyond the frontier is infeasible") {
    CHECK(frontier_claim_feasible(0.3, 0.3));
    CHECK(frontier_claim_feasible(0.3, 0.2));
    CHECK_FALSE(frontier_claim_feasible(0.3, 0.4)); // 1.3-consistent and better than 1.7-robust
}

TEST_CASE("probe agrees on a lottery and its rewrite") {
    SplitMix64 rng(181);
    for (int t = 0; t < 100; ++t) {
        const double a = rng.uniform(-4.0, 4.0);
        const double b = a + rng.uniform(0.1, 4.0);
        const Instance inst = line2(a, b);
        const Lottery lot = helpers::random_line_lottery(rng, inst);
        const ProbeReport raw = lower_bound_probe_line(fixed_lottery_mechanism(lot), 0.3, inst);
        const ProbeReport rewritten =
            lower_bound_probe_line(fixed_lottery_mechanism(onlym_transform(lot, inst)), 0.3, inst);
        CHECK_THAT(raw.consistency_value, WithinAbs(rewritten.consistency_value, 1e-9));
        CHECK_THAT(raw.truthful_cost_left, WithinAbs(rewritten.truthful_cost_left, 1e-9));
        CHECK_THAT(raw.truthful_cost_right, WithinAbs(rewritten.truthful_cost_right, 1e-9));
        CHECK_THAT(raw.p_leq_l, WithinAbs(rewritten.p_leq_l, 1e-9));
        CHECK_THAT(raw.p_m, WithinAbs(rewritten.p_m, 1e-9));
    }
}

TEST_CASE("witness thm2") {
    const WitnessReport rep = witness("thm2");
    CHECK(rep.pass);
    CHECK_THAT(rep.bound, WithinAbs(std::sqrt(1.25), 1e-15));
    CHECK(rep.computed >= 1.1180 - 1e-3);
    CHECK_THAT(rep.computed, WithinAbs(std::sqrt(1.25), 1e-3));
}

TEST_CASE("witness thm4") {
    const WitnessReport rep = witness("thm4");
    CHECK(rep.pass);
    CHECK_THAT(rep.computed, WithinAbs(1.0 + std::sqrt(2.0), 1e-9));
}

TEST_CASE("witness thm5") {
    const WitnessReport rep = witness("thm5");
    CHECK(rep.pass);
    CHECK(rep.computed <= 2.0 + 1e-9);
}

TEST_CASE("witness thm3 fixtures evaluate a supplied mechanism") {
    const Mechanism median = mechanism_median();
    const WitnessReport det = witness("thm3-det", &median);
    CHECK(det.pass);
    CHECK(det.computed >= 2.0 - 1e-9);

    const Mechanism quartiles = mechanism_lrm();
    const WitnessReport rand = witness("thm3-rand", &quartiles);
    CHECK(rand.pass);
    CHECK_THAT(rand.computed, WithinAbs(1.5, 1e-9));

    CHECK_THROWS_AS(witness("thm3-det"), std::invalid_argument);
    CHECK_THROWS_AS(witness("nope"), std::invalid_argument);
}

TEST_CASE("every shipped mechanism passes a small truthfulness sample") {
    SplitMix64 rng(191);
    DeviationGridSpec grid;
    grid.per_axis = 15;
    for (const Mechanism& mech : shipped_mechanisms()) {
        const InstanceGenerator gen = mech.dim == 1 ? gen_line(2, 5) : gen_plane(2, 5);
        for (int t = 0; t < 25; ++t) {
            const Instance inst = gen(rng);
            const Prediction pred = accurate_prediction(inst, mech.expects);
            const auto reps = audit_truthfulness(mech, inst, pred, grid);
            for (const auto& r : reps) {
                INFO(mech.id << " agent " << r.agent << " margin " << r.margin);
                CHECK(r.pass);
            }
        }
    }
}
