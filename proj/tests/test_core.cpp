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

#include "posauction/click_models.hpp"
#include "posauction/validate.hpp"
#include "testutil.hpp"

using namespace posauction;
using testutil::Rng;

namespace {

AuctionInstance two_slot_instance() {
    AuctionInstance inst;
    inst.positions = PositionProfile{{1.0, 0.5}};
    inst.advertisers = {{"a", 2.0, 1.0, false}, {"b", 1.0, 1.0, false}};
    return inst;
}

bool has_code(const std::vector<ValidationIssue>& issues, Errc code) {
    for (const auto& i : issues)
        if (i.code == code) return true;
    return false;
}

}  // namespace

TEST_CASE("ecpm is the bid-quality product") {
    CHECK(ecpm({"x", 2.0, 0.5, false}) == 1.0);
    CHECK(ecpm({"x", 0.0, 1.0, false}) == 0.0);
    CHECK(ecpm({"x", 10.0, 0.09, false}) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("validate accepts a well-formed instance and is idempotent") {
    AuctionInstance inst = two_slot_instance();
    CHECK(validate_instance(inst).empty());
    const AuctionInstance& same = require_valid(inst);
    CHECK(same == inst);
    CHECK(validate_instance(same).empty());
}

TEST_CASE("validate reports the complete violation list") {
    AuctionInstance inst;
    inst.positions = PositionProfile{{0.5, 1.0}};  // increasing
    inst.advertisers = {{"a", -1.0, 1.0, false}, {"a", 1.0, 1.0, false}};
    auto issues = validate_instance(inst);
    CHECK(has_code(issues, Errc::non_monotone_positions));
    CHECK(has_code(issues, Errc::negative_bid_or_quality));
    CHECK(has_code(issues, Errc::duplicate_id));
    CHECK(issues.size() >= 3);
}

TEST_CASE("validate rejects malformed profiles") {
    AuctionInstance inst;
    inst.advertisers = {{"a", 1.0, 1.0, false}};
    CHECK(has_code(validate_instance(inst), Errc::missing_profile));

    inst.brand_positions = BrandPositionProfile{{0.9, 0.5}, {1.0, 0.5}};
    CHECK(has_code(validate_instance(inst), Errc::unnormalized_brand_profile));

    inst.brand_positions = BrandPositionProfile{{1.0, 0.5}, {1.0, 0.5}};
    inst.positions = PositionProfile{{1.0}};
    CHECK(has_code(validate_instance(inst), Errc::ambiguous_profile));

    inst.positions.reset();
    inst.brand_positions = BrandPositionProfile{{1.0, 0.5}, {1.0, 0.7}};
    CHECK(validate_instance(inst).empty());
    inst.brand_positions->eta = {0.7, 0.5};
    CHECK(has_code(validate_instance(inst), Errc::unnormalized_brand_profile));
}

TEST_CASE("validate rejects bad externality params") {
    AuctionInstance inst = two_slot_instance();
    inst.params = ExternalityParams{-1.0, 1.0};
    CHECK(has_code(validate_instance(inst), Errc::invalid_params));
    inst.params = ExternalityParams{1.0, 0.0};
    CHECK(has_code(validate_instance(inst), Errc::invalid_params));
    inst.params = ExternalityParams{0.0, 1.0};
    CHECK(validate_instance(inst).empty());
}

TEST_CASE("separable welfare of the worked two-slot instance") {
    AuctionInstance inst = two_slot_instance();
    Allocation alloc{{"a", "b"}};
    WelfareReport report = welfare(alloc, inst, ClickModel::separable());
    CHECK(report.total == doctest::Approx(2.5).epsilon(1e-12));
    REQUIRE(report.per_slot.size() == 2);
    CHECK(report.per_slot[0] == doctest::Approx(2.0));
    CHECK(report.per_slot[1] == doctest::Approx(0.5));
}

TEST_CASE("externality welfare at lambda=0, nu=1 equals separable welfare") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        AuctionInstance inst = testutil::random_extern_instance(rng);
        Allocation alloc = ecpm_ranking(inst);
        double sep = welfare(alloc, inst, ClickModel::separable()).total;
        double ext = welfare(alloc, inst, ClickModel::externality({0.0, 1.0})).total;
        CHECK(sep == ext);
    }
}

TEST_CASE("externality welfare worked example") {
    AuctionInstance inst;
    inst.positions = PositionProfile{{1.0, 0.5}};
    inst.advertisers = {{"a", 1.0, 0.4, false}, {"b", 1.0, 0.2, false}};
    Allocation alloc{{"a", "b"}};
    WelfareReport report = welfare(alloc, inst, ClickModel::externality({1.0, 1.0}));
    // (0.4 + 0.1) / (1 + 0.5)
    CHECK(report.total == doctest::Approx(0.5 / 1.5).epsilon(1e-12));
}

TEST_CASE("per-slot contributions always re-sum to the total") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        AuctionInstance inst = testutil::random_extern_instance(rng);
        double lambda = std::vector<double>{0.0, 0.1, 1.0, 10.0}[rng.index(0, 3)];
        Allocation alloc = ecpm_ranking(inst);
        WelfareReport report = welfare(alloc, inst, ClickModel::externality({lambda, 1.0}));
        double sum = 0.0;
        for (double c : report.per_slot) sum += c;
        CHECK(testutil::close(sum, report.total));
        CHECK(report.per_slot.size() == inst.slot_count());
    }
}

TEST_CASE("separable welfare equals the direct position-weighted eCPM sum") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        AuctionInstance inst = testutil::random_extern_instance(rng);
        Allocation alloc = ecpm_ranking(inst);
        double direct = 0.0;
        const auto& n = inst.positions->scores;
        for (std::size_t j = 0; j < alloc.shown(); ++j) {
            const Advertiser& a = *inst.find(alloc.slots[j]);
            direct += a.bid * (n[j] * a.quality);
        }
        CHECK(welfare(alloc, inst, ClickModel::separable()).total == direct);
    }
}

TEST_CASE("empty trailing slots contribute zero") {
    AuctionInstance inst;
    inst.positions = PositionProfile{{1.0, 0.5, 0.25}};
    inst.advertisers = {{"solo", 3.0, 0.5, false}};
    WelfareReport report = welfare(Allocation{{"solo"}}, inst, ClickModel::separable());
    REQUIRE(report.per_slot.size() == 3);
    CHECK(report.per_slot[0] == doctest::Approx(1.5));
    CHECK(report.per_slot[1] == 0.0);
    CHECK(report.per_slot[2] == 0.0);
    CHECK(report.total == doctest::Approx(1.5));
}

TEST_CASE("welfare rejects a model-profile mismatch") {
    AuctionInstance inst = two_slot_instance();
    CHECK_THROWS_WITH_AS(welfare(Allocation{{"a"}}, inst, ClickModel::brand()),
                         doctest::Contains("ModelProfileMismatch"), AuctionError);
}
