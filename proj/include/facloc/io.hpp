#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "facloc/audit.hpp"
#include "facloc/model.hpp"

namespace facloc {

using json = nlohmann::ordered_json;

/// Doubles are rendered with 12 significant digits in CSV output.
inline std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace io_detail {

inline Point parse_point(const json& j, int dim) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim))
        throw std::runtime_error("point: expected an array of " + std::to_string(dim) + " numbers");
    for (const auto& c : j)
        if (!c.is_number()) throw std::runtime_error("point: coordinates must be numbers");
    return dim == 1 ? Point(j[0].get<double>()) : Point(j[0].get<double>(), j[1].get<double>());
}

inline json point_to_json(const Point& p) {
    return p.dim == 1 ? json::array({p.x}) : json::array({p.x, p.y});
}

} // namespace io_detail

inline Prediction parse_prediction(const json& j, int dim, std::size_t n_agents) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::runtime_error("prediction: object with a \"kind\" field expected");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "none") return Prediction::none();
    if (kind == "full") {
        if (!j.contains("points")) throw std::runtime_error("prediction full: \"points\" missing");
        std::vector<Point> locs;
        for (const auto& pj : j.at("points")) locs.push_back(io_detail::parse_point(pj, dim));
        if (locs.size() != n_agents)
            throw std::runtime_error("prediction full: one predicted location per agent expected");
        return Prediction::full(std::move(locs));
    }
    if (kind == "facility") {
        if (!j.contains("point")) throw std::runtime_error("prediction facility: \"point\" missing");
        return Prediction::optimal(io_detail::parse_point(j.at("point"), dim));
    }
    if (kind == "extreme_ids") {
        if (!j.contains("ids")) throw std::runtime_error("prediction extreme_ids: \"ids\" missing");
        std::vector<int> ids;
        for (const auto& idj : j.at("ids")) {
            if (!idj.is_number_integer()) throw std::runtime_error("prediction extreme_ids: integer ids expected");
            const int id = idj.get<int>();
            if (id < 0 || static_cast<std::size_t>(id) >= n_agents)
                throw std::runtime_error("prediction extreme_ids: id out of range (ids are 0-based)");
            ids.push_back(id);
        }
        return Prediction::extremes(std::move(ids));
    }
    throw std::runtime_error("prediction: unknown kind '" + kind + "'");
}

/// Instance schema: {"dim":1|2, "points":[[..],..], "prediction":{...}};
/// the prediction member is optional.
inline std::pair<Instance, Prediction> parse_instance(const json& j) {
    if (!j.is_object()) throw std::runtime_error("instance: JSON object expected");
    if (!j.contains("dim") || !j.at("dim").is_number_integer())
        throw std::runtime_error("instance: integer \"dim\" field required");
    const int dim = j.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw std::runtime_error("instance: dim must be 1 or 2");
    if (!j.contains("points") || !j.at("points").is_array() || j.at("points").empty())
        throw std::runtime_error("instance: nonempty \"points\" array required");
    std::vector<Point> pts;
    for (const auto& pj : j.at("points")) pts.push_back(io_detail::parse_point(pj, dim));
    Instance inst(dim, std::move(pts));
    Prediction pred = Prediction::none();
    if (j.contains("prediction")) pred = parse_prediction(j.at("prediction"), dim, inst.size());
    return {std::move(inst), std::move(pred)};
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

inline std::pair<Instance, Prediction> load_instance(const std::string& path) {
    try {
        return parse_instance(read_json_file(path));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("instance '") + path + "': " + e.what());
    }
}

/// Lottery schema: {"atoms":[{"point":[..],"prob":p},..]}.
inline Lottery parse_lottery(const json& j, int dim) {
    if (!j.is_object() || !j.contains("atoms") || !j.at("atoms").is_array())
        throw std::runtime_error("lottery: object with an \"atoms\" array expected");
    std::vector<LotteryAtom> atoms;
    for (const auto& aj : j.at("atoms")) {
        if (!aj.is_object() || !aj.contains("point") || !aj.contains("prob"))
            throw std::runtime_error("lottery atom: \"point\" and \"prob\" required");
        atoms.push_back({io_detail::parse_point(aj.at("point"), dim), aj.at("prob").get<double>()});
    }
    try {
        return Lottery::canonical(std::move(atoms));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("lottery: ") + e.what());
    }
}

inline Lottery load_lottery(const std::string& path, int dim) {
    return parse_lottery(read_json_file(path), dim);
}

/// Phantom-point file: {"points":[[x,y],..]} or a bare [[x,y],..] array.
inline std::vector<Point> load_phantoms(const std::string& path) {
    const json j = read_json_file(path);
    const json& arr = j.is_object() && j.contains("points") ? j.at("points") : j;
    if (!arr.is_array() || arr.empty())
        throw std::runtime_error("phantom file '" + path + "': nonempty points array expected");
    std::vector<Point> pts;
    for (const auto& pj : arr) pts.push_back(io_detail::parse_point(pj, 2));
    return pts;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline json lottery_to_json(const Lottery& lot) {
    json atoms = json::array();
    for (const LotteryAtom& a : lot.atoms)
        atoms.push_back(json{{"point", io_detail::point_to_json(a.point)}, {"prob", a.prob}});
    return json{{"atoms", atoms}};
}

inline json instance_to_json(const Instance& inst) {
    json pts = json::array();
    for (const Point& p : inst.points) pts.push_back(io_detail::point_to_json(p));
    return json{{"dim", inst.dim}, {"points", pts}};
}

inline json truth_report_to_json(const TruthReport& rep) {
    return json{{"agent", rep.agent},
                {"truthful_cost", rep.truthful_cost},
                {"best_deviation", io_detail::point_to_json(rep.best_deviation)},
                {"deviated_cost", rep.deviated_cost},
                {"margin", rep.margin},
                {"pass", rep.pass}};
}

inline json witness_report_to_json(const WitnessReport& rep) {
    return json{{"name", rep.name},
                {"computed", rep.computed},
                {"bound", rep.bound},
                {"pass", rep.pass},
                {"derivation", rep.derivation},
                {"notes", rep.notes}};
}

inline json probe_report_to_json(const ProbeReport& rep) {
    return json{{"delta", rep.delta},
                {"p_leq_l", rep.p_leq_l},
                {"p_m", rep.p_m},
                {"robustness_bound", rep.robustness_bound},
                {"consistency_value", rep.consistency_value},
                {"truthful_cost_left", rep.truthful_cost_left},
                {"truthful_cost_right", rep.truthful_cost_right},
                {"deviation_cost_ratio", rep.deviation_cost_ratio},
                {"misreport_cost_ratio", rep.misreport_cost_ratio},
                {"robustness_side_ok", rep.robustness_side_ok},
                {"consistency_side_ok", rep.consistency_side_ok},
                {"binding", rep.binding}};
}

// CSV column sets are frozen; see README.
inline std::string truth_reports_to_csv(const std::vector<TruthReport>& reps) {
    std::ostringstream out;
    out << "agent,truthful_cost,best_dev_x,best_dev_y,deviated_cost,margin,pass\n";
    for (const TruthReport& r : reps)
        out << r.agent << ',' << fmt12(r.truthful_cost) << ',' << fmt12(r.best_deviation.x) << ','
            << fmt12(r.best_deviation.dim == 2 ? r.best_deviation.y : 0.0) << ','
            << fmt12(r.deviated_cost) << ',' << fmt12(r.margin) << ',' << (r.pass ? 1 : 0) << '\n';
    return out.str();
}

inline std::string tradeoff_to_csv(const std::vector<TradeoffPoint>& pts) {
    std::ostringstream out;
    out << "delta,consistency,robustness\n";
    for (const TradeoffPoint& p : pts)
        out << fmt12(p.delta) << ',' << fmt12(p.consistency) << ',' << fmt12(p.robustness) << '\n';
    return out.str();
}

inline std::string lottery_to_csv(const Lottery& lot) {
    std::ostringstream out;
    out << "x,y,prob\n";
    for (const LotteryAtom& a : lot.atoms)
        out << fmt12(a.point.x) << ',' << fmt12(a.point.dim == 2 ? a.point.y : 0.0) << ','
            << fmt12(a.prob) << '\n';
    return out.str();
}

/// Writes a curve as CSV with the given header, one row per point, 12
/// significant digits per value.
inline void emit_plot_data(const std::vector<std::vector<double>>& curve, const std::string& header,
                           const std::string& path) {
    if (curve.empty()) throw std::runtime_error("emit_plot_data: empty curve");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_plot_data: cannot write '" + path + "'");
    out << header << '\n';
    for (const auto& row : curve) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt12(row[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("emit_plot_data: write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Mechanism identifiers
// ---------------------------------------------------------------------------

/// Parses a mechanism identifier: median, lrm, minmaxp, mixed:<delta>,
/// gcm:<phantom-file>, mbb, centroid-ext, centroid-ext-perturbed:<eps>,
/// centroid-all, broken.
inline Mechanism make_mechanism(const std::string& spec, std::uint64_t seed = 42) {
    const auto colon = spec.find(':');
    const std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    const auto need_arg = [&](const char* what) {
        if (arg.empty()) throw std::runtime_error("mechanism '" + head + "' requires :<" + what + ">");
    };
    if (head == "median") return mechanism_median();
    if (head == "lrm") return mechanism_lrm();
    if (head == "minmaxp") return mechanism_minmaxp();
    if (head == "broken") return mechanism_broken_line();
    if (head == "mbb") return mechanism_mbb();
    if (head == "centroid-ext") return mechanism_centroid_extremes();
    if (head == "centroid-all") return mechanism_centroid_all();
    if (head == "mixed") {
        need_arg("delta");
        try {
            return mechanism_mixed(std::stod(arg));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("mechanism mixed: ") + e.what());
        }
    }
    if (head == "gcm") {
        need_arg("phantom-file");
        return mechanism_gcm(GcmConfig{load_phantoms(arg)});
    }
    if (head == "centroid-ext-perturbed") {
        need_arg("eps");
        double eps = 0.0;
        try {
            eps = std::stod(arg);
        } catch (const std::exception&) {
            throw std::runtime_error("mechanism centroid-ext-perturbed: bad epsilon '" + arg + "'");
        }
        if (!(eps > 0.0)) throw std::runtime_error("mechanism centroid-ext-perturbed: epsilon must be positive");
        return mechanism_centroid_extremes_perturbed(eps, seed);
    }
    throw std::runtime_error("unknown mechanism '" + spec + "'");
}

} // namespace facloc
