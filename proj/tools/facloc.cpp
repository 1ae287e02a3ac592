// Command-line front end: evaluate mechanisms on instance files, audit
// truthfulness, estimate consistency/robustness, sweep the delta-mixture
// frontier, replay lower-bound witness instances, and inspect enclosing
// circles and OnlyM rewrites.
//
// Exit codes: 0 success / all checks passed, 1 audit or witness failure,
// 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "facloc/facloc.hpp"

namespace {

using facloc::json;

struct CommonOpts {
    std::uint64_t seed{42};
    std::string format{"json"};
    std::string out_path;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("FACLOC_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::runtime_error("FACLOC_SEED: not an unsigned integer");
        }
    }
    return 42;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "random seed (FACLOC_SEED overrides the default)")
        ->default_val(opts.seed);
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->default_val("json");
    cmd->add_option("--out", opts.out_path, "write the report to this file instead of stdout");
}

void write_output(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + opts.out_path + "'");
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Fills in the accurate prediction when the instance file carries none but
// the mechanism consumes one.
facloc::Prediction effective_prediction(const facloc::Mechanism& mech, const facloc::Instance& inst,
                                        const facloc::Prediction& from_file) {
    if (from_file.kind == facloc::Prediction::Kind::none &&
        mech.expects != facloc::Prediction::Kind::none)
        return facloc::accurate_prediction(inst, mech.expects);
    return from_file;
}

facloc::InstanceGenerator generator_by_name(const std::string& name, int mech_dim) {
    if (name == "line2") return facloc::gen_two_agent_line();
    if (name == "line") return facloc::gen_line();
    if (name == "plane") return facloc::gen_plane();
    if (name == "plane-diam") return facloc::gen_plane_diameter();
    if (name.empty()) return mech_dim == 1 ? facloc::gen_two_agent_line() : facloc::gen_plane();
    throw std::runtime_error("unknown generator '" + name + "'");
}

void check_dim(const facloc::Mechanism& mech, const facloc::Instance& inst) {
    if (mech.dim != inst.dim)
        throw std::runtime_error("mechanism '" + mech.id + "' is defined on " +
                                 std::to_string(mech.dim) + "-D instances");
}

int run_eval(const CommonOpts& opts, const std::string& mech_id, const std::string& inst_path) {
    const facloc::Mechanism mech = facloc::make_mechanism(mech_id, opts.seed);
    auto [inst, pred] = facloc::load_instance(inst_path);
    check_dim(mech, inst);
    const facloc::Lottery lot = mech.run(inst, effective_prediction(mech, inst, pred));
    const double cost = facloc::egalitarian_cost(lot, inst);
    const facloc::OptimalSolution opt = facloc::optimal_solution(inst);
    const double ratio = facloc::approx_ratio(lot, inst);
    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "x,y,prob,cost,opt_cost,ratio\n";
        for (const facloc::LotteryAtom& a : lot.atoms)
            csv << facloc::fmt12(a.point.x) << ',' << facloc::fmt12(a.point.dim == 2 ? a.point.y : 0.0)
                << ',' << facloc::fmt12(a.prob) << ',' << facloc::fmt12(cost) << ','
                << facloc::fmt12(opt.cost) << ',' << facloc::fmt12(ratio) << '\n';
        write_output(opts, csv.str());
    } else {
        json j{{"mechanism", mech.id},
               {"instance", facloc::instance_to_json(inst)},
               {"lottery", facloc::lottery_to_json(lot)},
               {"cost", cost},
               {"optimal", json{{"facility", facloc::io_detail::point_to_json(opt.facility)},
                                {"cost", opt.cost}}},
               {"ratio", ratio}};
        write_output(opts, dump(j));
    }
    return 0;
}

int run_audit(const CommonOpts& opts, const std::string& mech_id, const std::string& inst_path,
              int grid) {
    const facloc::Mechanism mech = facloc::make_mechanism(mech_id, opts.seed);
    auto [inst, pred] = facloc::load_instance(inst_path);
    check_dim(mech, inst);
    facloc::DeviationGridSpec spec;
    spec.per_axis = grid;
    const auto reports =
        facloc::audit_truthfulness(mech, inst, effective_prediction(mech, inst, pred), spec);
    bool all_pass = true;
    for (const auto& r : reports) all_pass = all_pass && r.pass;
    if (opts.format == "csv") {
        write_output(opts, facloc::truth_reports_to_csv(reports));
    } else {
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(facloc::truth_report_to_json(r));
        write_output(opts, dump(json{{"mechanism", mech.id},
                                     {"pass", all_pass},
                                     {"note", "one-sided grid audit: violations are exact, "
                                              "compliance is certified up to grid resolution"},
                                     {"agents", rows}}));
    }
    return all_pass ? 0 : 1;
}

int run_estimate(const CommonOpts& opts, const std::string& mech_id, int trials,
                 const std::string& gen_name, int grid, bool robust) {
    const facloc::Mechanism mech = facloc::make_mechanism(mech_id, opts.seed);
    const facloc::InstanceGenerator gen = generator_by_name(gen_name, mech.dim);
    double value = 0.0;
    if (robust) {
        value = facloc::estimate_robustness(mech, gen, facloc::default_adversary(mech.expects, grid),
                                            trials, opts.seed);
    } else {
        value = facloc::estimate_consistency(mech, gen, trials, opts.seed);
    }
    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "mechanism,trials,seed,value\n"
            << mech.id << ',' << trials << ',' << opts.seed << ',' << facloc::fmt12(value) << '\n';
        write_output(opts, csv.str());
    } else {
        write_output(opts, dump(json{{"mechanism", mech.id},
                                     {"measure", robust ? "robustness" : "consistency"},
                                     {"trials", trials},
                                     {"seed", opts.seed},
                                     {"value", value}}));
    }
    return 0;
}

int run_sweep(const CommonOpts& opts, const std::string& deltas_arg, int trials,
              const std::string& plot_path) {
    std::vector<double> deltas;
    std::stringstream ss(deltas_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            deltas.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::runtime_error("sweep: bad delta '" + tok + "'");
        }
    }
    if (deltas.empty()) throw std::runtime_error("sweep: no deltas given");
    for (double d : deltas)
        if (!(d >= 0.0 && d <= 0.5)) throw std::runtime_error("sweep: delta outside [0, 0.5]");
    const auto pts = facloc::tradeoff_sweep(deltas, trials, opts.seed);
    if (!plot_path.empty()) {
        std::vector<std::vector<double>> curve;
        for (const auto& p : pts) curve.push_back({p.delta, p.consistency, p.robustness});
        facloc::emit_plot_data(curve, "delta,consistency,robustness", plot_path);
    }
    if (opts.format == "csv") {
        write_output(opts, facloc::tradeoff_to_csv(pts));
    } else {
        json rows = json::array();
        for (const auto& p : pts)
            rows.push_back(json{{"delta", p.delta}, {"consistency", p.consistency},
                                {"robustness", p.robustness}});
        write_output(opts, dump(json{{"trials", trials}, {"seed", opts.seed}, {"frontier", rows}}));
    }
    return 0;
}

int run_witness(const CommonOpts& opts, const std::string& name, const std::string& mech_id) {
    std::optional<facloc::Mechanism> mech;
    if (!mech_id.empty()) mech = facloc::make_mechanism(mech_id, opts.seed);
    facloc::WitnessReport rep;
    try {
        rep = facloc::witness(name, mech ? &*mech : nullptr);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(e.what());
    }
    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "name,computed,bound,pass\n"
            << rep.name << ',' << facloc::fmt12(rep.computed) << ',' << facloc::fmt12(rep.bound)
            << ',' << (rep.pass ? 1 : 0) << '\n';
        write_output(opts, csv.str());
    } else {
        write_output(opts, dump(facloc::witness_report_to_json(rep)));
    }
    std::cerr << (rep.pass ? "PASS" : "FAIL") << " witness " << rep.name << " computed "
              << facloc::fmt12(rep.computed) << " bound " << facloc::fmt12(rep.bound) << "\n";
    return rep.pass ? 0 : 1;
}

int run_mec(const CommonOpts& opts, const std::string& inst_path) {
    auto [inst, pred] = facloc::load_instance(inst_path);
    (void)pred;
    const facloc::OptimalSolution opt = facloc::optimal_solution(inst);
    const std::vector<int> ids = facloc::extreme_ids(inst);
    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "center_x,center_y,radius,extreme_ids\n"
            << facloc::fmt12(opt.facility.x) << ','
            << facloc::fmt12(opt.facility.dim == 2 ? opt.facility.y : 0.0) << ','
            << facloc::fmt12(opt.cost) << ',';
        for (std::size_t i = 0; i < ids.size(); ++i) csv << (i ? ";" : "") << ids[i];
        csv << '\n';
        write_output(opts, csv.str());
    } else {
        write_output(opts, dump(json{{"center", facloc::io_detail::point_to_json(opt.facility)},
                                     {"radius", opt.cost},
                                     {"extreme_ids", ids}}));
    }
    return 0;
}

int run_transform(const CommonOpts& opts, const std::string& inst_path, const std::string& lot_path,
                  const std::string& mech_id) {
    auto [inst, pred] = facloc::load_instance(inst_path);
    inst.require_line();
    facloc::Lottery input = [&] {
        if (!lot_path.empty()) return facloc::load_lottery(lot_path, inst.dim);
        const facloc::Mechanism mech = facloc::make_mechanism(mech_id, opts.seed);
        check_dim(mech, inst);
        return mech.run(inst, effective_prediction(mech, inst, pred));
    }();
    const facloc::OnlyMDecomposition dec = facloc::onlym_decompose(input, inst);
    const facloc::Lottery output = facloc::onlym_transform(input, inst);
    const double cost_in = facloc::egalitarian_cost(input, inst);
    const double cost_out = facloc::egalitarian_cost(output, inst);
    if (opts.format == "csv") {
        write_output(opts, facloc::lottery_to_csv(output));
    } else {
        json j{{"instance", facloc::instance_to_json(inst)},
               {"input", facloc::lottery_to_json(input)},
               {"decomposition",
                json{{"p_left", dec.p_left},
                     {"p_right", dec.p_right},
                     {"pi_left", dec.pi_left},
                     {"pi_right", dec.pi_right},
                     {"q_left", dec.q_left},
                     {"q_right", dec.q_right}}},
               {"transformed", facloc::lottery_to_json(output)},
               {"cost_before", cost_in},
               {"cost_after", cost_out},
               {"agent_costs_before",
                json::array({facloc::agent_expected_cost(input, facloc::Point(inst.left())),
                             facloc::agent_expected_cost(input, facloc::Point(inst.right()))})},
               {"agent_costs_after",
                json::array({facloc::agent_expected_cost(output, facloc::Point(inst.left())),
                             facloc::agent_expected_cost(output, facloc::Point(inst.right()))})}};
        write_output(opts, dump(j));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truthful facility-location mechanisms with predictions: evaluation, "
                 "truthfulness audits, consistency/robustness estimation, frontier sweeps, "
                 "and lower-bound witness replays for the egalitarian social cost."};
    app.require_subcommand(1);

    CommonOpts opts;
    try {
        opts.seed = default_seed();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::string mech_id, inst_path, gen_name, deltas = "0,0.1,0.2,0.3,0.4,0.5";
    std::string plot_path, witness_name, lot_path, witness_mech;
    int grid = 41, rob_grid = 101;
    int cons_trials = 500, rob_trials = 200, sweep_trials = 400;

    CLI::App* eval = app.add_subcommand(
        "eval", "Run a mechanism on an instance file and report its lottery, egalitarian "
                "cost, and approximation ratio against the enclosing-circle optimum.");
    add_common(eval, opts);
    eval->add_option("--mech", mech_id, "mechanism id (median, lrm, minmaxp, mixed:<delta>, "
                                        "gcm:<phantom-file>, mbb, centroid-ext, "
                                        "centroid-ext-perturbed:<eps>, centroid-all, broken)")
        ->required();
    eval->add_option("--instance", inst_path, "instance JSON file")->required();

    CLI::App* audit = app.add_subcommand(
        "audit", "Search for profitable unilateral misreports with exact expected costs over "
                 "the deviation grid (truthfulness in expectation).");
    add_common(audit, opts);
    audit->add_option("--mech", mech_id, "mechanism id")->required();
    audit->add_option("--instance", inst_path, "instance JSON file")->required();
    audit->add_option("--grid", grid, "deviation grid points per axis")->default_val(41);

    CLI::App* cons = app.add_subcommand(
        "consistency", "Worst approximation ratio over seeded instances with accurate "
                       "predictions.");
    add_common(cons, opts);
    cons->add_option("--mech", mech_id, "mechanism id")->required();
    cons->add_option("--trials", cons_trials, "number of instances")->default_val(500);
    cons->add_option("--gen", gen_name, "instance generator: line2, line, plane, plane-diam");

    CLI::App* rob = app.add_subcommand(
        "robustness", "Worst approximation ratio over seeded instances and adversarial "
                      "predictions (facility grids with clamping probes, extreme-id subsets).");
    add_common(rob, opts);
    rob->add_option("--mech", mech_id, "mechanism id")->required();
    rob->add_option("--trials", rob_trials, "number of instances")->default_val(200);
    rob->add_option("--gen", gen_name, "instance generator: line2, line, plane, plane-diam");
    rob->add_option("--grid", rob_grid, "facility-adversary grid points per axis")->default_val(101);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Consistency/robustness frontier of the delta-mixture of the quartile "
                 "lottery and the clamped-prediction mechanism: (1+delta, 2-delta).");
    add_common(sweep, opts);
    sweep->add_option("--deltas", deltas, "comma-separated deltas in [0, 0.5]")
        ->default_val("0,0.1,0.2,0.3,0.4,0.5");
    sweep->add_option("--trials", sweep_trials, "instances per delta")->default_val(400);
    sweep->add_option("--emit-plot-data", plot_path, "also write the frontier as CSV to this path");

    CLI::App* wit = app.add_subcommand(
        "witness", "Replay a named lower-bound witness instance and check the computed "
                   "quantity against its bound (thm2, thm4, thm5, thm3-det, thm3-rand).");
    add_common(wit, opts);
    wit->add_option("name", witness_name, "witness name")->required();
    wit->add_option("--mech", witness_mech, "mechanism under test (thm3-det / thm3-rand)");

    CLI::App* mec = app.add_subcommand(
        "mec", "Smallest enclosing circle of an instance: the egalitarian optimum, its cost, "
               "and the extreme agents on the boundary.");
    add_common(mec, opts);
    mec->add_option("--instance", inst_path, "instance JSON file")->required();

    CLI::App* trans = app.add_subcommand(
        "transform-onlym", "Rewrite a lottery on a two-agent line instance so its interior "
                           "support moves to {x_L, M, x_R}, preserving all expected costs.");
    add_common(trans, opts);
    trans->add_option("--instance", inst_path, "two-agent 1-D instance JSON file")->required();
    trans->add_option("--lottery", lot_path, "lottery JSON file to transform");
    trans->add_option("--mech", mech_id, "transform this mechanism's output instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (eval->parsed()) return run_eval(opts, mech_id, inst_path);
        if (audit->parsed()) return run_audit(opts, mech_id, inst_path, grid);
        if (cons->parsed()) return run_estimate(opts, mech_id, cons_trials, gen_name, rob_grid, false);
        if (rob->parsed()) return run_estimate(opts, mech_id, rob_trials, gen_name, rob_grid, true);
        if (sweep->parsed()) return run_sweep(opts, deltas, sweep_trials, plot_path);
        if (wit->parsed()) return run_witness(opts, witness_name, witness_mech);
        if (mec->parsed()) return run_mec(opts, inst_path);
        if (trans->parsed()) {
            if (lot_path.empty() == mech_id.empty())
                throw std::runtime_error("transform-onlym: exactly one of --lottery and --mech required");
            return run_transform(opts, inst_path, lot_path, mech_id);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
