#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#ifndef FACLOC_CLI_PATH
#error "FACLOC_CLI_PATH must be defined"
#endif
#ifndef FACLOC_DATA_DIR
#error "FACLOC_DATA_DIR must be defined"
#endif

namespace {

struct CmdResult {
    int exit_code{0};
    std::string out;
};

CmdResult run_cli(const std::string& args, bool raw = false) {
    const std::string cmd =
        (raw ? args : std::string(FACLOC_CLI_PATH) + " " + args) + " 2>/dev/null";
    std::array<char, 4096> buf{};
    CmdResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string data(const std::string& name) { return std::string(FACLOC_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli eval reports the quartile lottery and its ratio") {
    const CmdResult res = run_cli("eval --mech lrm --instance " + data("two_line.json"));
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j.at("mechanism") == "lrm");
    CHECK(j.at("lottery").at("atoms").size() == 3);
    CHECK(std::abs(j.at("ratio").get<double>() - 1.5) < 1e-12);
}

TEST_CASE("cli eval synthesizes the accurate prediction when absent") {
    const CmdResult res = run_cli("eval --mech minmaxp --instance " + data("two_line.json"));
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(std::abs(j.at("ratio").get<double>() - 1.0) < 1e-12);
}

TEST_CASE("cli mec prints center, radius and extreme agents") {
    const CmdResult res = run_cli("mec --instance " + data("triangle.json"));
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(std::abs(j.at("center")[0].get<double>() - 2.0) < 1e-9);
    CHECK(std::abs(j.at("center")[1].get<double>() - 1.0) < 1e-9);
    CHECK(std::abs(j.at("radius").get<double>() - std::sqrt(5.0)) < 1e-9);
    CHECK(j.at("extreme_ids").size() == 3);
}

TEST_CASE("cli witness exits zero on pass and nonzero on a failing mechanism") {
    CHECK(run_cli("witness thm4").exit_code == 0);
    CHECK(run_cli("witness thm3-det --mech median").exit_code == 0);
    // the quartile lottery is 1.5-consistent on the fixture, under the bound 2
    CHECK(run_cli("witness thm3-det --mech lrm").exit_code == 2); // not deterministic
    CHECK(run_cli("witness thm3-rand --mech lrm").exit_code == 0);
}

TEST_CASE("cli audit flags the broken mechanism") {
    CHECK(run_cli("audit --mech lrm --instance " + data("two_line.json")).exit_code == 0);
    const CmdResult res =
        run_cli("audit --mech broken --instance " + data("two_line.json") + " --format csv");
    CHECK(res.exit_code == 1);
    CHECK(res.out.rfind("agent,truthful_cost", 0) == 0);
}

TEST_CASE("cli transform-onlym") {
    const CmdResult res = run_cli("transform-onlym --instance " + data("two_line.json") +
                                  " --lottery " + data("lottery_interior.json"));
    REQUIRE(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(std::abs(j.at("decomposition").at("q_left").get<double>() - 0.5) < 1e-12);
    CHECK(std::abs(j.at("cost_before").get<double>() - j.at("cost_after").get<double>()) < 1e-12);
    CHECK(j.at("transformed").at("atoms").size() == 2);
}

TEST_CASE("cli usage errors exit with code 2") {
    CHECK(run_cli("eval --mech nope --instance " + data("two_line.json")).exit_code == 2);
    CHECK(run_cli("eval --mech lrm --instance no_such_file.json").exit_code == 2);
    CHECK(run_cli("eval --mech mbb --instance " + data("two_line.json")).exit_code == 2);
    CHECK(run_cli("witness unknown-name").exit_code == 2);
    CHECK(run_cli("sweep --deltas 0.9").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);

    const char* bad = "bad_instance_tmp.json";
    {
        std::ofstream out(bad);
        out << "{ not json";
    }
    CHECK(run_cli(std::string("eval --mech lrm --instance ") + bad).exit_code == 2);
    std::remove(bad);
}

TEST_CASE("cli help names what each subcommand exercises") {
    const CmdResult top = run_cli("--help");
    CHECK(top.exit_code == 0);
    CHECK(top.out.find("sweep") != std::string::npos);
    CHECK(top.out.find("witness") != std::string::npos);
    const CmdResult sweep = run_cli("sweep --help");
    CHECK(sweep.exit_code == 0);
    CHECK(sweep.out.find("frontier") != std::string::npos);
    const CmdResult trans = run_cli("transform-onlym --help");
    CHECK(trans.exit_code == 0);
    CHECK(trans.out.find("x_L") != std::string::npos);
}

TEST_CASE("cli seed precedence: flag over environment over default") {
    const std::string args = "consistency --mech mixed:0.3 --trials 30 --format csv";
    const CmdResult flag = run_cli(args + " --seed 7");
    const CmdResult env = run_cli("FACLOC_SEED=7 " + std::string(FACLOC_CLI_PATH) + " " + args,
                                  /*raw=*/true);
    REQUIRE(flag.exit_code == 0);
    REQUIRE(env.exit_code == 0);
    CHECK(flag.out == env.out);
    const CmdResult override_env =
        run_cli("FACLOC_SEED=9 " + std::string(FACLOC_CLI_PATH) + " " + args + " --seed 7",
                /*raw=*/true);
    CHECK(override_env.out == flag.out);
}

TEST_CASE("cli sweep emits deterministic plot data") {
    const std::string a = "sweep_a_tmp.csv", b = "sweep_b_tmp.csv";
    const std::string args = "sweep --deltas 0,0.5 --trials 40 --seed 7 --emit-plot-data ";
    REQUIRE(run_cli(args + a).exit_code == 0);
    REQUIRE(run_cli(args + b).exit_code == 0);
    const std::string ca = slurp(a), cb = slurp(b);
    CHECK(!ca.empty());
    CHECK(ca == cb);
    CHECK(ca.rfind("delta,consistency,robustness\n", 0) == 0);
    std::remove(a.c_str());
    std::remove(b.c_str());
}
