/*
Copyright 2026 The posauction Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "posauction/brand_alloc.hpp"
#include "posauction/io.hpp"
#include "testutil.hpp"

using namespace posauction;
using testutil::Rng;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    int code = run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    INFO("missing file " << path);
    REQUIRE(bool(f));
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kMinimalDoc = R"({
  "positions": {"n": [1.0]},
  "advertisers": [{"id": "solo", "bid": 1.0, "quality": 1.0}]
})";

}  // namespace

TEST_CASE("parse a minimal document") {
    AuctionInstance inst = parse_instance(kMinimalDoc);
    CHECK(inst.advertiser_count() == 1);
    CHECK(inst.slot_count() == 1);
    CHECK(inst.positions.has_value());
    CHECK(!inst.advertisers[0].brand);
    CHECK(!inst.params.has_value());
}

TEST_CASE("parser rejects unknown keys, mixed profiles, bad shapes") {
    CHECK_THROWS_WITH_AS(parse_instance(R"({"positions": {"n": [1]}, "advertisers": [], "x": 1})"),
                         doctest::Contains("unknown key 'x'"), AuctionError);
    CHECK_THROWS_WITH_AS(
        parse_instance(
            R"({"positions": {"n": [1], "beta": [1], "eta": [1]}, "advertisers": []})"),
        doctest::Contains("ambiguous"), AuctionError);
    CHECK_THROWS_WITH_AS(parse_instance("{"), doctest::Contains("ParseError"), AuctionError);
    CHECK_THROWS_WITH_AS(
        parse_instance(R"({"positions": {"n": [1]}, "advertisers": [{"id": "a", "bid": "x",
                          "quality": 1}]})"),
        doctest::Contains("must be a number"), AuctionError);
    // validation errors surface through the parser
    CHECK_THROWS_WITH_AS(
        parse_instance(R"({"positions": {"n": [0.5, 1.0]},
                           "advertisers": [{"id": "a", "bid": 1, "quality": 1}]})"),
        doctest::Contains("NonMonotonePositions"), AuctionError);
}

TEST_CASE("emit/parse round trip is the identity on random instances") {
    Rng rng(2222);
    for (int trial = 0; trial < 100; ++trial) {
        AuctionInstance inst = trial % 2 == 0 ? testutil::random_extern_instance(rng)
                                              : testutil::random_brand_instance(rng);
        if (trial % 4 == 0) inst.params = ExternalityParams{0.25, 2.0};
        AuctionInstance back = parse_instance(emit_instance(inst));
        CHECK(back == inst);
    }
}

TEST_CASE("the serialized tight instance parses back to the generator output") {
    AuctionInstance inst = make_tight_greedy_instance(0.1);
    CHECK(parse_instance(emit_instance(inst)) == inst);
    CHECK(parse_instance(slurp(fixture_path("greedy_tight.json"))) == inst);
}

TEST_CASE("cli validate: accept and reject") {
    CliRun good = cli({"validate"}, kMinimalDoc);
    CHECK(good.code == 0);
    CHECK(good.out.find("\"valid\":true") != std::string::npos);

    CliRun bad = cli({"validate"}, R"({"positions": {"n": [0.5, 1.0]},
                                       "advertisers": [{"id": "a", "bid": 1, "quality": 1}]})");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("\"valid\":false") != std::string::npos);
    CHECK(bad.out.find("NonMonotonePositions") != std::string::npos);
}

TEST_CASE("cli gen | allocate greedy reproduces the worked welfare") {
    CliRun gen = cli({"gen", "--case", "greedy-tight", "--epsilon", "0.1"});
    REQUIRE(gen.code == 0);
    CliRun alloc = cli({"allocate", "--model", "brand", "--method", "greedy"}, gen.out);
    REQUIRE(alloc.code == 0);
    CHECK(alloc.out.find("\"total\":1.1") != std::string::npos);
    CHECK(alloc.out.find("\"allocation\":[\"brand\",\"nonbrand\"]") != std::string::npos);

    CliRun best = cli({"allocate", "--model", "brand", "--method", "enumerate"}, gen.out);
    CHECK(best.out.find("\"total\":2.1") != std::string::npos);
}

TEST_CASE("cli allocate bisection reports the fixed point and exclusions") {
    CliRun run = cli({"allocate", fixture_path("bisection_lambda10.json"), "--model",
                      "externality", "--method", "bisection"});
    REQUIRE(run.code == 0);
    CHECK(run.out.find("\"allocation\":[\"B\"]") != std::string::npos);
    CHECK(run.out.find("\"s_star\":0.473684210526") != std::string::npos);
    CHECK(run.out.find("\"skipped\":[\"A\"]") != std::string::npos);

    CliRun brute = cli({"allocate", fixture_path("bisection_lambda10.json"), "--model",
                        "externality", "--method", "brute"});
    CHECK(brute.out.find("\"allocation\":[\"B\"]") != std::string::npos);
    CHECK(brute.out.find("\"s_star\":0.473684210526") != std::string::npos);
}

TEST_CASE("cli flags p>1 click rates as warnings, not errors") {
    const char* doc = R"({
      "positions": {"n": [1.0]},
      "advertisers": [{"id": "big", "bid": 1.0, "quality": 3.0}]
    })";
    CliRun run = cli({"allocate", "--model", "separable", "--method", "rank"}, doc);
    CHECK(run.code == 0);
    CHECK(run.out.find("exceeds 1") != std::string::npos);
}

TEST_CASE("cli rejects conflicting model/method pairs and unknown commands") {
    CHECK(cli({"allocate", "--model", "brand", "--method", "bisection"}, kMinimalDoc).code == 1);
    CHECK(cli({"allocate", "--model", "separable", "--method", "greedy"}, kMinimalDoc).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"gen", "--case", "nope", "--epsilon", "0.1"}).code == 1);
    CHECK(cli({"check-axioms", "--model", "separable", "--lambda", "1"}).code == 1);
    // epsilon is required, never defaulted
    CHECK(cli({"gen", "--case", "greedy-tight"}).code == 1);
}

TEST_CASE("cli input errors exit with code 1") {
    // externality model without params in the document
    CHECK(cli({"allocate", "--model", "externality", "--method", "bisection"}, kMinimalDoc).code ==
          1);
    // model/profile mismatch
    CliRun gen = cli({"gen", "--case", "greedy-tight", "--epsilon", "0.1"});
    CHECK(cli({"allocate", "--model", "separable", "--method", "rank"}, gen.out).code == 1);
    CHECK(cli({"ratio"}, kMinimalDoc).code == 1);
    // unknown pricing rule
    CHECK(cli({"price", "--rule", "vcg"}, kMinimalDoc).code == 1);
    // missing file
    CHECK(cli({"validate", "/nonexistent/path.json"}).code == 1);
    // help is not an error
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cli check-axioms") {
    CliRun practical = cli({"check-axioms", "--model", "practical", "--lambda", "1"});
    CHECK(practical.code == 0);
    CHECK(practical.out.find("\"A1\":\"pass\"") != std::string::npos);
    CHECK(practical.out.find("\"A4\":\"pass\"") != std::string::npos);
    CHECK(practical.out.find("\"A5\":\"pass\"") != std::string::npos);

    CliRun separable = cli({"check-axioms", "--model", "separable"});
    CHECK(separable.code == 0);
    CHECK(separable.out.find("\"A4\":\"vacuous\"") != std::string::npos);
}

TEST_CASE("cli price on the GSP example") {
    const char* doc = R"({
      "positions": {"n": [1.0, 0.5]},
      "advertisers": [{"id": "hi", "bid": 2.0, "quality": 1.0},
                      {"id": "lo", "bid": 1.0, "quality": 1.0}]
    })";
    CliRun maintaining = cli({"price", "--rule", "maintaining"}, doc);
    REQUIRE(maintaining.code == 0);
    CHECK(maintaining.out.find("\"rule\":\"maintaining\"") != std::string::npos);
    CHECK(maintaining.out.find("\"cost_per_click\":1,") != std::string::npos);
    CHECK(maintaining.out.find("\"cost_per_click\":0,") != std::string::npos);

    CliRun swap = cli({"price", "--rule", "swap"}, doc);
    REQUIRE(swap.code == 0);
    CHECK(swap.out.find("\"cost_per_click\":1.5") != std::string::npos);
}

TEST_CASE("cli compare-revenue emits per-position deltas") {
    const char* doc = R"({
      "positions": {"n": [1.0, 0.7]},
      "advertisers": [{"id": "a", "bid": 1.0, "quality": 0.9},
                      {"id": "b", "bid": 1.4, "quality": 0.5}]
    })";
    CliRun run = cli({"compare-revenue", "--lambda", "0.5"}, doc);
    REQUIRE(run.code == 0);
    CHECK(run.out.find("\"allocations_identical\":true") != std::string::npos);
    CHECK(run.out.find("\"quality_sign\":1") != std::string::npos);
}

TEST_CASE("cli ratio") {
    CliRun gen = cli({"gen", "--case", "greedy-vs-standard", "--epsilon", "0.1"});
    CliRun run = cli({"ratio"}, gen.out);
    REQUIRE(run.code == 0);
    CHECK(run.out.find("\"greedy\":11") != std::string::npos);
    CHECK(run.out.find("\"optimal\":12.1") != std::string::npos);
}

TEST_CASE("cli csv flattening") {
    std::string path =
        (std::filesystem::temp_directory_path() / "posauction_slots_test.csv").string();
    CliRun run = cli({"allocate", fixture_path("bisection_lambda10.json"), "--model",
                      "externality", "--method", "bisection", "--csv", path});
    REQUIRE(run.code == 0);
    std::string csv = slurp(path);
    CHECK(csv.find("position,id,bid,quality,click_rate,price,contribution") == 0);
    CHECK(csv.find("1,B,10,0.09,") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("reports are byte-identical across runs and match the goldens") {
    struct Case {
        std::string golden;
        std::vector<std::string> args;
    };
    const std::vector<Case> cases = {
        {"greedy_tight_greedy.golden", {"allocate", fixture_path("greedy_tight.json"), "--model",
                                        "brand", "--method", "greedy"}},
        {"greedy_tight_optimal.golden", {"allocate", fixture_path("greedy_tight.json"), "--model",
                                         "brand", "--method", "enumerate"}},
        {"greedy_vs_standard_ratio.golden", {"ratio", fixture_path("greedy_vs_standard.json")}},
        {"greedy_vs_standard_rank.golden", {"allocate", fixture_path("greedy_vs_standard.json"),
                                            "--model", "brand", "--method", "rank"}},
        {"bisection_lambda10.golden", {"allocate", fixture_path("bisection_lambda10.json"),
                                       "--model", "externality", "--method", "bisection"}},
    };
    for (const auto& c : cases) {
        CliRun first = cli(c.args);
        CliRun second = cli(c.args);
        INFO("golden: " << c.golden);
        REQUIRE(first.code == 0);
        CHECK(first.out == second.out);
        CHECK(first.out == slurp(fixture_path("golden/" + c.golden)));
    }
}
