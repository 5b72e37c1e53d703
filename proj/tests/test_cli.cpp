#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "spincoh/json_io.hpp"

using namespace spincoh;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(SPINCOH_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) out += buf.data();
    int rc = pclose(pipe);
    return {WEXITSTATUS(rc), out};
}

}  // namespace

TEST_CASE("tables subcommand passes and is deterministic byte-for-byte") {
    RunResult a = run_cli("tables --n 6");
    CHECK(a.exit_code == 0);
    RunResult b = run_cli("tables --n 6");
    CHECK(a.output == b.output);
    json j = json::parse(a.output);
    CHECK(j.at("schema_version") == "1");
    CHECK(j.at("status") == "pass");
    CHECK(j.at("config").contains("seed"));
}

TEST_CASE("cohomology torus emits the expected dims") {
    RunResult r = run_cli("cohomology torus --n 6 --operator d2 --kmax 1");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j.at("results").at("dims") == json::array({1, 4, 6, 4, 1}));
    RunResult r4 = run_cli("cohomology torus --n 4 --operator d2 --kmax 1 --kind A");
    json j4 = json::parse(r4.output);
    CHECK(j4.at("results").at("dims") == json::array({1, 2, 1}));
}

TEST_CASE("spectral cy3 reproduces the proposition dims") {
    RunResult r = run_cli("spectral cy3 --hodge h11=2,h21=3");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j.at("results").at("h_total") == json::array({1, 0, 1, 6, 1, 0, 1}));
}

TEST_CASE("unknown flags and subcommands give usage errors (exit 2)") {
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("spectral bogus").exit_code == 2);
    CHECK(run_cli("cohomology torus --n 6 --operator dX").exit_code == 2);
}

TEST_CASE("rep dump emits gammas that parse back exactly") {
    RunResult r = run_cli("rep dump --n 4 --variant even");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.output);
    SpinRep sr = SpinRep::even(2);
    for (int mu = 1; mu <= 4; ++mu) {
        QiMatrix back = matrix_from_json(j.at("results").at("gammas").at(mu - 1));
        CHECK(back == sr.gamma_dense(mu));
    }
}

TEST_CASE("curvature check loads a riemann array and validates it") {
    // constant-curvature-style tensor passes validation; broken antisymmetry
    // is rejected with a parse-level error
    json good;
    good["require_first_bianchi"] = true;
    int n = 4;
    json arr = json::array();
    for (int a = 0; a < n; ++a) {
        json l1 = json::array();
        for (int b = 0; b < n; ++b) {
            json l2 = json::array();
            for (int c = 0; c < n; ++c) {
                json l3 = json::array();
                for (int d = 0; d < n; ++d) {
                    int v = (a == c && b == d ? 1 : 0) - (a == d && b == c ? 1 : 0);
                    l3.push_back(std::to_string(v));
                }
                l2.push_back(l3);
            }
            l1.push_back(l2);
        }
        arr.push_back(l1);
    }
    good["riemann"] = arr;
    {
        std::ofstream f("/tmp/spincoh_curv_good.json");
        f << good.dump();
    }
    RunResult r = run_cli("curvature check --n 4 --in /tmp/spincoh_curv_good.json");
    CHECK(r.exit_code == 0);
    // break pair antisymmetry
    good["riemann"][0][1][2][3] = "7";
    {
        std::ofstream f("/tmp/spincoh_curv_bad.json");
        f << good.dump();
    }
    RunResult rb = run_cli("curvature check --n 4 --in /tmp/spincoh_curv_bad.json");
    CHECK(rb.exit_code == 2);
}

TEST_CASE("hodge diamond validation errors") {
    CHECK_THROWS(diamond_from_json(json{{"h11", -1}}));
    CHECK_THROWS(diamond_from_json(json{{"h11", 2}, {"h30", 2}}));
    HodgeDiamond h = diamond_from_json(json{{"h11", 2}, {"h21", 3}});
    CHECK(h.h11 == 2);
}

TEST_CASE("multivector json round-trips bit-exactly") {
    Rng rng(99123);
    for (int iter = 0; iter < 25; ++iter) {
        MultiVector v(6);
        for (int t = 0; t < 4; ++t) {
            Word w;
            for (int b = 0; b < 6; ++b)
                if (rng.below(2)) w.set(b);
            v.add_term(w, Qi(mpq_class(rng.range(-9, 9), rng.range(1, 7)),
                             mpq_class(rng.range(-9, 9), rng.range(1, 7))));
        }
        CHECK(multivector_from_json(to_json(v)) == v);
    }
}

TEST_CASE("verify subcommand runs the seeded bundles") {
    RunResult r = run_cli("verify --suite signs --seed 7");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j.at("config").at("seed") == 7);
}
