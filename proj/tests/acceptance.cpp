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

Acceptance suite: every release-blocking property of the library, one
criterion per test case, each printing a single pass/fail line.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "posauction/axioms.hpp"
#include "posauction/brand_alloc.hpp"
#include "posauction/click_models.hpp"
#include "posauction/extern_alloc.hpp"
#include "posauction/pricing.hpp"
#include "testutil.hpp"

using namespace posauction;
using testutil::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void report(int criterion, bool ok, const char* what) {
    std::printf("criterion %2d: %s  %s\n", criterion, ok ? "PASS" : "FAIL", what);
    std::fflush(stdout);
}

double positive_externality_mock(std::size_t j, std::span<const double> q,
                                 std::span<const double> n) {
    double others = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k)
        if (k != j) others += q[k];
    return n[j] * q[j] * (1.0 + others);
}

}  // namespace

TEST_CASE("criterion 1: greedy's tight half bound on the two-slot instance") {
    auto start = Clock::now();
    AuctionInstance tight = make_tight_greedy_instance(0.1);
    double greedy = greedy_brand_allocate(tight).second;
    double optimal = optimal_brand_allocate(tight).second;
    double near_half = greedy_ratio(make_tight_greedy_instance(1e-6));
    double elapsed = ms_since(start);

    bool ok = greedy == 1.0 + 0.1 && optimal == 2.0 + 0.1 && std::abs(near_half - 0.5) <= 1e-6 &&
              elapsed < 1.0;
    report(1, ok, "greedy 1.1, optimal 2.1, ratio->1/2 as epsilon->0, <1ms");
    CHECK(greedy == 1.0 + 0.1);
    CHECK(optimal == 2.0 + 0.1);
    CHECK(std::abs(near_half - 0.5) <= 1e-6);
    CHECK(elapsed < 1.0);
}

TEST_CASE("criterion 2: greedy < standard < optimal on the three-slot instance") {
    auto start = Clock::now();
    AuctionInstance inst = make_greedy_vs_standard_instance(0.1);
    double greedy = greedy_brand_allocate(inst).second;
    double standard = welfare(ecpm_ranking(inst), inst, ClickModel::brand(), "rank").total;
    double optimal = optimal_brand_allocate(inst).second;
    double elapsed = ms_since(start);

    bool ok = greedy == 11.0 && std::abs(standard - 11.55) <= 1e-12 &&
              std::abs(optimal - 12.1) <= 1e-12 && greedy < standard && standard < optimal &&
              elapsed < 1.0;
    report(2, ok, "greedy 11 < standard 11.55 < optimal 12.1, <1ms");
    CHECK(greedy == 11.0);
    CHECK(standard == doctest::Approx(11.55).epsilon(1e-13));
    CHECK(optimal == doctest::Approx(12.1).epsilon(1e-13));
    CHECK(greedy < standard);
    CHECK(standard < optimal);
    CHECK(elapsed < 1.0);
}

TEST_CASE("criteria 3+4: bisection equals the oracle and admits no improving swap") {
    auto start = Clock::now();
    Rng rng(1000003);
    const std::vector<double> lambdas{0.0, 0.1, 1.0, 10.0};
    const int trials = 1000;

    int welfare_mismatches = 0, fixed_point_drifts = 0, improving_swaps = 0, oversubscribed = 0;
    for (int trial = 0; trial < trials; ++trial) {
        AuctionInstance inst = testutil::random_extern_instance(rng, 7, 5);
        if (inst.advertiser_count() > inst.slot_count()) ++oversubscribed;
        double lambda = lambdas[rng.index(0, 3)];

        ExternAllocationResult fast = bisection_allocate(inst, lambda);
        ExternAllocationResult oracle = brute_force_allocate(inst, lambda);
        if (!testutil::close(fast.s_star, oracle.s_star, 1e-9)) ++welfare_mismatches;

        double drift = std::abs(phi(fast.s_star, inst, lambda) - fast.s_star);
        if (drift > 1e-9 * std::max(1.0, fast.s_star)) ++fixed_point_drifts;

        for (std::size_t k = 0; k < fast.allocation.shown(); ++k)
            for (std::size_t m = k + 1; m < fast.allocation.shown(); ++m)
                if (swap_improves(k, m, fast.allocation, inst, lambda)) ++improving_swaps;
    }
    double elapsed = ms_since(start);

    bool ok3 = welfare_mismatches == 0 && fixed_point_drifts == 0 && elapsed < 60000.0 &&
               oversubscribed > 0;
    report(3, ok3, "1000 random instances: bisection = brute force, phi fixed point, <60s");
    CHECK(welfare_mismatches == 0);
    CHECK(fixed_point_drifts == 0);
    CHECK(elapsed < 60000.0);
    CHECK(oversubscribed > 0);  // the sweep must cover ads outnumbering slots

    bool ok4 = improving_swaps == 0;
    report(4, ok4, "no returned allocation admits an improving swap");
    CHECK(improving_swaps == 0);
}

TEST_CASE("criterion 5: swap-price deltas carry the sign of the quality gap") {
    Rng rng(424243);
    const std::vector<double> lambdas{0.01, 0.05, 0.1};
    int coincided = 0, attempts = 0;
    int sign_mismatches = 0, nonzero_at_tie = 0, comparable = 0, ties_seen = 0;

    while (coincided < 500 && attempts < 50000) {
        ++attempts;
        AuctionInstance inst = testutil::random_strict_n_instance(rng);
        double lambda = lambdas[rng.index(0, 2)];
        RevenueComparison cmp = revenue_compare(inst, lambda);
        if (!cmp.allocations_identical) continue;
        ++coincided;
        for (const auto& row : cmp.rows) {
            ++comparable;
            if (row.quality_sign == 0) {
                ++ties_seen;
                if (row.delta != 0.0) ++nonzero_at_tie;
            } else if ((row.delta > 0.0) - (row.delta < 0.0) != row.quality_sign) {
                ++sign_mismatches;
            }
        }
    }

    bool ok = coincided >= 500 && sign_mismatches == 0 && nonzero_at_tie == 0 && comparable > 0 &&
              ties_seen > 0;
    report(5, ok, "500 coinciding instances: sign(delta) = sign(q_k - q_{k+1}), ties exact 0");
    CHECK(coincided >= 500);
    CHECK(sign_mismatches == 0);
    CHECK(nonzero_at_tie == 0);
    CHECK(ties_seen > 0);  // the tie clause must not pass vacuously
}

TEST_CASE("criterion 6: the brand-last fast path equals enumeration exactly") {
    Rng rng(606060);
    const int trials = 1000;
    int mismatches = 0;
    for (int trial = 0; trial < trials; ++trial) {
        AuctionInstance inst = testutil::random_brand_instance(rng, 6, /*constant_beta=*/true);
        if (brand_last_fastpath(inst).second != optimal_brand_allocate(inst).second) ++mismatches;
    }
    bool ok = mismatches == 0;
    report(6, ok, "1000 constant-beta instances: fast path welfare == enumeration welfare");
    CHECK(mismatches == 0);
}

TEST_CASE("criterion 7: greedy keeps at least half the optimum") {
    Rng rng(770077);
    const int trials = 1000;
    int violations = 0;
    for (int trial = 0; trial < trials; ++trial) {
        AuctionInstance inst = testutil::random_brand_instance(rng, 6);
        double optimal = optimal_brand_allocate(inst).second;
        if (optimal == 0.0) continue;
        if (greedy_ratio(inst) < 0.5) ++violations;
    }
    bool ok = violations == 0;
    report(7, ok, "1000 random brand instances: greedy/optimal >= 1/2");
    CHECK(violations == 0);
}

TEST_CASE("criterion 8: optimal allocations order each class by eCPM") {
    int violations = 0;
    auto scan = [&](Rng rng, bool constant_beta, int trials) {
        for (int trial = 0; trial < trials; ++trial) {
            AuctionInstance inst = testutil::random_brand_instance(rng, 6, constant_beta);
            Allocation alloc = optimal_brand_allocate(inst).first;
            double last_brand = -1.0, last_nonbrand = -1.0;
            for (const auto& id : alloc.slots) {
                const Advertiser& a = *inst.find(id);
                double value = ecpm(a);
                double& last = a.brand ? last_brand : last_nonbrand;
                if (last >= 0.0 && value > last + 1e-15) ++violations;
                last = value;
            }
        }
    };
    scan(Rng(606060), true, 1000);   // the criterion-6 sweep
    scan(Rng(770077), false, 1000);  // the criterion-7 sweep
    bool ok = violations == 0;
    report(8, ok, "brand and non-brand eCPMs are non-increasing down the page");
    CHECK(violations == 0);
}

TEST_CASE("criterion 9: the axiom checker's verdicts on all three models") {
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<double> n_vec{1.0, 0.6, 0.3};

    bool practical_ok = true;
    for (double lambda : {0.1, 1.0, 10.0}) {
        AxiomReport r = check_axioms(as_ctr_function(ClickModel::externality({lambda, 1.0})), 3,
                                     grid, n_vec);
        for (std::size_t i = 1; i <= 5; ++i)
            practical_ok = practical_ok && r.a(i).verdict == AxiomVerdict::pass;
    }

    AxiomReport sep = check_axioms(as_ctr_function(ClickModel::separable()), 3, grid, n_vec);
    bool separable_ok = sep.a(1).verdict == AxiomVerdict::pass &&
                        sep.a(2).verdict == AxiomVerdict::pass &&
                        sep.a(3).verdict == AxiomVerdict::pass &&
                        sep.a(4).verdict == AxiomVerdict::vacuous &&
                        sep.a(5).verdict == AxiomVerdict::vacuous;

    AxiomReport mock = check_axioms(positive_externality_mock, 3, grid, n_vec);
    bool mock_ok = mock.a(4).verdict == AxiomVerdict::fail && !mock.a(4).witnesses.empty();

    bool ok = practical_ok && separable_ok && mock_ok;
    report(9, ok, "A1-A5 pass (practical), A4/A5 equality (separable), A4 fails with witness (mock)");
    CHECK(practical_ok);
    CHECK(separable_ok);
    CHECK(mock_ok);
}

TEST_CASE("criterion 10: maintaining-bid pricing recovers GSP in the separable model") {
    Rng rng(101010);
    int instances = 0, violations = 0;
    while (instances < 200) {
        AuctionInstance inst = testutil::random_extern_instance(rng, 6, 5);
        Allocation alloc = ecpm_ranking(inst);
        if (alloc.shown() < 2) continue;
        ++instances;
        for (std::size_t j = 0; j + 1 < alloc.shown(); ++j) {
            const Advertiser& here = *inst.find(alloc.slots[j]);
            const Advertiser& next = *inst.find(alloc.slots[j + 1]);
            double expected = ecpm(next) / here.quality;
            double price = maintaining_bid_price(inst, ecpm_allocator(), here.id, 1e-9);
            if (std::abs(price - expected) > 1e-6 * std::max(1.0, expected)) ++violations;
        }
    }
    bool ok = violations == 0;
    report(10, ok, "200 separable instances: price_j = b_{j+1} q_{j+1} / q_j within 1e-6");
    CHECK(violations == 0);
}
