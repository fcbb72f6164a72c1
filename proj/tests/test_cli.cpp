#include <catch2/catch_amalgamated.hpp>

#include "a1fib/cli.hpp"

using namespace a1fib;
using cli::Options;

namespace {

cli::RunResult run_cmd(const std::string& command, const std::string& input,
                       const std::string& field = "rational") {
    Options o;
    o.command = command;
    o.input = input;
    o.field = field;
    return cli::run(o);
}

std::string data_path(const std::string& name) {
    return std::string(A1FIB_DATA_DIR) + "/" + name;
}

} // namespace

TEST_CASE("cli: zigzag commands") {
    auto r = run_cmd("zigzag-standardize", "[[4]]");
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["standard"] == Json::array({0, 0, -2, -2, -2}));
    CHECK(j["is_standard"] == true);

    auto rev = run_cmd("zigzag-revert", "[0,0,-2,-3]");
    CHECK(Json::parse(rev.out)["reverted"] == Json::array({0, 0, -3, -2}));

    auto ml = run_cmd("zigzag-ml", "[0,0,0]");
    CHECK(Json::parse(ml.out)["class"] == "ML1");
}

TEST_CASE("cli: determinism byte for byte") {
    auto a = run_cmd("aut-report", data_path("ex-222-1.json"));
    auto b = run_cmd("aut-report", data_path("ex-222-1.json"));
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("cli: the worked example report") {
    auto r = run_cmd("aut-report", data_path("ex-222-1.json"));
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.out)["report"];
    REQUIRE(j["fibers"].size() == 1);
    CHECK(j["fibers"][0]["N"] == 1);
    CHECK(j["fibers"][0]["torus"]["relations"] == Json::parse("[[-1,2]]"));
    CHECK(j["fibers"][0]["torus"]["slice_order"] == 2);
    CHECK(j["Upsilon"]["rank"] == 1);
    CHECK(j["flags"]["parabolic"] == false);
    CHECK(j["U_mu_generator"] == Json::array({"0", "1"}));
}

TEST_CASE("cli: multi-fiber reports") {
    auto r = run_cmd("aut-report", data_path("two-fibers.json"));
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.out)["report"];
    CHECK(j["U_mu_generator"] == Json::array({"0", "-1", "1"}));
    CHECK(j["Upsilon"]["rank"] == 1);
    CHECK(j["flags"]["parabolic"] == true);

    auto m = run_cmd("aut-report", data_path("mixed-fibers.json"));
    auto jm = Json::parse(m.out)["report"];
    CHECK(jm["Upsilon"]["rank"] == 0);
    CHECK(jm["Upsilon"]["torsion"] == 2);
}

TEST_CASE("cli: fiber build and graph") {
    auto r = run_cmd("fiber-build", data_path("ex-222-1.json"));
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["self_intersection"] == 0);
    CHECK(j["contraction_order"] == Json::array({3, 2, 1}));
    CHECK(j["model"]["components"].size() == 4);
    // round-trip: the emitted model reparses
    CHECK_NOTHROW(Json::parse(r.out));

    Options o;
    o.command = "fiber-graph";
    o.input = data_path("ex-222-1.json");
    auto dot = cli::run(o);
    REQUIRE(dot.exit_code == 0);
    CHECK(dot.out.rfind("graph fiber {", 0) == 0);
    CHECK(dot.out.find("S -- T0") != std::string::npos);
    CHECK(dot.out.find("m=2") != std::string::npos);
}

TEST_CASE("cli: puiseux point and stabilizer") {
    std::string job = R"({"tower": {"base_point": "0", "blowups": [
        {"on": 0, "at": "0"}, {"on": 1, "at": "inf"}, {"on": 2, "at": "1"}
    ]}, "center": 3})";
    auto r = run_cmd("puiseux-point", job);
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["space"]["psi"] == Json::array({"0", "1"}));
    CHECK(j["space"]["n"] == 2);
    CHECK(j["space"]["d"] == 2);
    CHECK(j["space"]["center"] == "0");
    CHECK(j["multiplicity"] == 2);

    auto s = run_cmd("stab-fiber", data_path("ex-222-1.json"));
    REQUIRE(s.exit_code == 0);
    auto js = Json::parse(s.out)["stabilizer"];
    CHECK(js["N"] == 1);
    CHECK(js["torus"]["slice_order"] == 2);
}

TEST_CASE("cli: dpd and amalgam") {
    auto r = run_cmd("dpd-classify", data_path("dpd-dg-5-2.json"));
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["class"] == "ML0");
    CHECK(j["toric"] == false);

    auto a = run_cmd("amalgam-nf", data_path("amalgam-z4z6.json"));
    REQUIRE(a.exit_code == 0);
    auto ja = Json::parse(a.out);
    CHECK(ja.contains("normal_form"));
}

TEST_CASE("cli: exit codes") {
    // schema violation
    auto bad = run_cmd("zigzag-standardize", "{\"nope\": 1}");
    CHECK(bad.exit_code == 2);
    CHECK(Json::parse(bad.err)["error"] == "schema");
    // computation error
    auto comp = run_cmd("zigzag-revert", "[1,2,3]");
    CHECK(comp.exit_code == 3);
    CHECK(Json::parse(comp.err)["error"] == "not_standard");
    // extension required over the rationals, fine over the radical field
    std::string job = R"({"tower": {"base_point": "0", "blowups": [
        {"on": 0, "at": "0"}, {"on": 1, "at": "inf"}, {"on": 2, "at": "2"}
    ]}, "center": 3})";
    auto ext = run_cmd("puiseux-point", job);
    CHECK(ext.exit_code == 4);
    CHECK(Json::parse(ext.err)["error"] == "extension_required");
    auto rad = run_cmd("puiseux-point", job, "radical");
    CHECK(rad.exit_code == 0);
    // unsupported base curve
    auto base = run_cmd("aut-report", R"({"base":"P1","fibers":[{"blowups":[]}]})");
    CHECK(base.exit_code == 3);
    CHECK(Json::parse(base.err)["error"] == "base_unsupported");
    // unknown command
    Options o;
    o.command = "nope";
    o.input = "[1]";
    CHECK(cli::run(o).exit_code == 2);
}

TEST_CASE("cli: output to file") {
    Options o;
    o.command = "zigzag-standardize";
    o.input = "[3]";
    o.out_path = std::string(A1FIB_DATA_DIR) + "/../build/cli_out_test.json";
    auto r = cli::run(o);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream f(o.out_path);
    REQUIRE(f.good());
    Json j;
    f >> j;
    CHECK(j["standard"] == Json::array({0, 0, -2, -2}));
}

TEST_CASE("cli: empty blowup list builds the single-component report") {
    auto r = run_cmd("fiber-build", R"({"blowups": []})");
    REQUIRE(r.exit_code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["model"]["components"].size() == 1);
    CHECK(j["model"]["components"][0]["weight"] == 0);
    CHECK(j["contraction_order"] == Json::array());
    CHECK(j["rooted_chain"] == true);
}
