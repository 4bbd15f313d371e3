#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

// Integration tests driving the installed binary end to end.

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SAMPCR_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("cr-exact --m 10").exit_code == 2);                      // missing required
    CHECK(run_cli("cr-exact --m 10 --p 1.5 --r1 0.9 --r2 0.5").exit_code == 2);
    CHECK(run_cli("bounds --m 1 --p 0.3 --r1 0.9 --r2 0.5").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("engine errors exit with 1") {
    // rewards out of order pass parsing but fail validation
    CHECK(run_cli("cr-exact --m 10 --p 0.3 --r1 0.5 --r2 0.9").exit_code == 1);
    CHECK(run_cli("case-study --csv /nonexistent.csv --p 0.2 --r1 0.9 --r2 0.5").exit_code == 1);
}

TEST_CASE("exact-ratio report shape and values") {
    auto r = run_cli("cr-exact --m 10 --p 0.3 --r1 0.9 --r2 0.7 --h-max 40 --ell-max 40");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["command"] == "cr-exact");
    CHECK(j["config"]["m"] == 10.0);
    CHECK(j["config"]["seed"] == 20240501);
    double inf = j["results"]["infimum"];
    CHECK(inf > 0.5);
    CHECK(inf < 1.0);
    CHECK(j["results"].contains("argmin_h"));
    CHECK_FALSE(j["results"].contains("grid"));

    auto g = run_cli("cr-exact --m 4 --p 0.3 --r1 0.9 --r2 0.7 --h-max 6 --ell-max 6 --emit-grid");
    REQUIRE(g.exit_code == 0);
    auto jg = nlohmann::json::parse(g.out);
    CHECK(jg["results"]["grid"].size() == 49);
}

TEST_CASE("csv output with commented header block") {
    auto r = run_cli("bounds --m 50 --p 0.3 --r1 0.9 --r2 0.5 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("# schema_version=1\n", 0) == 0);
    CHECK(r.out.find("# m=50") != std::string::npos);
    CHECK(r.out.find("beta,h0,h1") != std::string::npos);
}

TEST_CASE("byte-identical reruns under one seed, different under another") {
    const std::string args =
        "sweep --m-list 6 --p-list 0.3 --r1 0.9 --r2-lo 0.5 --r2-hi 0.6 --instances 3 --grid 20";
    auto a = run_cli(args + " --seed 11");
    auto b = run_cli(args + " --seed 11");
    auto c = run_cli(args + " --seed 12");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
}

TEST_CASE("output file and SAMPCR_OUT_DIR resolution") {
    const char* tmp = std::getenv("TMPDIR");
    std::string dir = tmp && *tmp ? tmp : "/tmp";
    std::string abs_path = dir + "/sampcr_cli_test_out.json";
    std::remove(abs_path.c_str());
    auto r = run_cli("--output " + abs_path + " bounds --m 20 --p 0.3 --r1 0.9 --r2 0.5");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    auto j = nlohmann::json::parse(slurp(abs_path));
    CHECK(j["command"] == "bounds");
    std::remove(abs_path.c_str());

    // relative path resolves against SAMPCR_OUT_DIR
    std::string rel = "sampcr_cli_rel_out.json";
    std::remove((dir + "/" + rel).c_str());
    std::string cmd = std::string("SAMPCR_OUT_DIR=") + dir + " " + SAMPCR_CLI_PATH +
                      " --output " + rel + " bounds --m 20 --p 0.3 --r1 0.9 --r2 0.5";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(!slurp(dir + "/" + rel).empty());
    std::remove((dir + "/" + rel).c_str());

    // unwritable path -> IO error
    CHECK(run_cli("--output /nonexistent-dir/x.json bounds --m 20 --p 0.3 --r1 0.9 --r2 0.5")
              .exit_code == 3);
}

TEST_CASE("case study over the bundled fixture") {
    const std::string csv = std::string(SAMPCR_DATA_DIR) + "/case_ramp.csv";
    auto r = run_cli("case-study --csv " + csv +
                     " --p 0.2 --gamma 0.3 --trials 50 --r1 0.9 --r2 0.5");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"]["periods"].size() == 7);
    double avg = j["results"]["alg1"]["avg_cr"];
    CHECK(avg > 0.0);
    CHECK(avg <= 1.0);
}

TEST_CASE("remaining commands smoke-run") {
    CHECK(run_cli("upper-lab --m 16 --p 0.3 --r1 0.9 --r2 0.5 --search-steps 8").exit_code == 0);
    CHECK(run_cli("robustness --m 8 --p 0.3 --delta 0.1 --r1 0.9 --r2 0.5 --grid 24 "
                  "--phat-points 5")
              .exit_code == 0);
    CHECK(run_cli("realized-cr --m 10 --p 0.3 --r1 0.9 --r2 0.5 --market-h 0 --market-ell 50 "
                  "--trials 2000")
              .exit_code == 0);
    CHECK(run_cli("ktype --m-list 4 --p 0.3 --r1 0.9 --instances 2 --orders 2 --trials 10")
              .exit_code == 0);
}
