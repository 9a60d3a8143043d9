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

#include "posauction/pricing.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "posauction/brand_alloc.hpp"
#include "posauction/extern_alloc.hpp"

namespace posauction {

Allocator ecpm_allocator() {
    return [](const AuctionInstance& inst) { return ecpm_ranking(inst); };
}

Allocator externality_allocator(double lambda) {
    return [lambda](const AuctionInstance& inst) {
        return bisection_allocate(inst, lambda).allocation;
    };
}

Allocator brand_optimal_allocator() {
    return [](const AuctionInstance& inst) { return optimal_brand_allocate(inst).first; };
}

namespace {

/// Position index as a totally ordered occupancy value; unshown sorts last.
constexpr std::size_t kUnshown = Allocation::npos;

class OccupancyTrace {
public:
    /// Records (bid, position) and checks that position improves weakly with
    /// the bid against the recorded neighbors.
    void record(double bid, std::size_t position) {
        auto [it, inserted] = samples_.emplace(bid, position);
        if (!inserted) return;  // deterministic allocator: same bid, same slot
        if (it != samples_.begin()) {
            auto left = std::prev(it);
            if (left->second < position) fail(left->first, left->second, bid, position);
        }
        auto right = std::next(it);
        if (right != samples_.end() && position < right->second)
            fail(bid, position, right->first, right->second);
    }

private:
    [[noreturn]] static void fail(double low_bid, std::size_t low_pos, double high_bid,
                                  std::size_t high_pos) {
        auto show = [](std::size_t p) {
            return p == kUnshown ? std::string("unshown") : std::to_string(p + 1);
        };
        std::ostringstream ss;
        ss << "position " << show(low_pos) << " at bid " << low_bid << " but " << show(high_pos)
           << " at higher bid " << high_bid;
        throw_invariant(Errc::non_monotone_occupancy, ss.str());
    }

    std::map<double, std::size_t> samples_;
};

}  // namespace

double maintaining_bid_price(const AuctionInstance& inst, const Allocator& allocate,
                             const AdvertiserId& id, double tol) {
    if (!(tol > 0.0)) throw_error(Errc::bad_tolerance, "tolerance must be positive");

    const Advertiser& ad = inst.require(id);

    OccupancyTrace trace;
    auto position_at = [&](double bid) {
        AuctionInstance trial = inst;
        for (auto& a : trial.advertisers)
            if (a.id == id) a.bid = bid;
        std::size_t pos = allocate(trial).position_of(id);
        trace.record(bid, pos);
        return pos;
    };

    std::size_t held = position_at(ad.bid);
    if (held == kUnshown)
        throw_error(Errc::not_shown, "advertiser '" + id + "' wins no position at its own bid");

    if (position_at(0.0) == held) return 0.0;

    double lo = 0.0, hi = ad.bid;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (position_at(mid) == held)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double adjacent_swap_price(std::size_t k, const Allocation& alloc, const AuctionInstance& inst,
                           const ClickModel& model) {
    if (k + 1 >= alloc.shown()) {
        std::ostringstream ss;
        ss << "swap price needs slots " << k << " and " << (k + 1) << " occupied ("
           << alloc.shown() << " shown)";
        throw_error(Errc::slot_empty, ss.str());
    }

    // nu scales both sides of the indifference equation, so prices are
    // computed at nu = 1.
    ClickModel normalized = model.kind() == ModelKind::externality
                                ? ClickModel::externality({model.params().lambda, 1.0})
                                : model;

    ClickModel::RateBreakdown before = normalized.rate_breakdown(inst, alloc);
    Allocation swapped = alloc;
    std::swap(swapped.slots[k], swapped.slots[k + 1]);
    ClickModel::RateBreakdown after = normalized.rate_breakdown(inst, swapped);

    double g_k = before.base[k];
    if (g_k == 0.0)
        throw_error(Errc::zero_click_rate, "slot has zero click rate; the price is undefined");

    double b_k = inst.require(alloc.slots[k]).bid;
    double b_next = inst.require(alloc.slots[k + 1]).bid;

    double rest = 0.0;  // bid-weighted base rates of the untouched slots
    for (std::size_t j = 0; j < alloc.shown(); ++j) {
        if (j == k || j == k + 1) continue;
        rest += inst.require(alloc.slots[j]).bid * before.base[j];
    }

    // The indifference equation multiplied through by the divisor: exact,
    // and the shared-divisor terms collapse to 0 when the swap is a no-op.
    double ratio = before.divisor / after.divisor;
    double shift = (before.divisor - after.divisor) / after.divisor;
    return (ratio * (b_next * after.base[k] + b_k * after.base[k + 1]) -
            b_next * before.base[k + 1] + rest * shift) /
           g_k;
}

RevenueComparison revenue_compare(const AuctionInstance& inst, double lambda) {
    if (!(lambda > 0.0))
        throw_error(Errc::invalid_params, "revenue comparison needs lambda > 0");

    Allocation separable_alloc = ecpm_ranking(inst);
    Allocation externality_alloc = bisection_allocate(inst, lambda).allocation;

    RevenueComparison cmp;
    cmp.allocations_identical = separable_alloc == externality_alloc;
    if (!cmp.allocations_identical) return cmp;

    cmp.allocation = separable_alloc;
    ClickModel model1 = ClickModel::separable();
    ClickModel model2 = ClickModel::externality({lambda, 1.0});
    for (std::size_t k = 0; k + 1 < separable_alloc.shown(); ++k) {
        RevenueRow row;
        row.position = k;
        row.price_separable = adjacent_swap_price(k, separable_alloc, inst, model1);
        row.price_externality = adjacent_swap_price(k, separable_alloc, inst, model2);
        row.delta = row.price_externality - row.price_separable;
        double q_k = inst.require(separable_alloc.slots[k]).quality;
        double q_next = inst.require(separable_alloc.slots[k + 1]).quality;
        row.quality_sign = (q_k > q_next) - (q_k < q_next);
        cmp.rows.push_back(row);
    }
    return cmp;
}

PriceSchedule price_schedule(const AuctionInstance& inst, const Allocator& allocate,
                             const ClickModel& model, const std::string& rule, double tol) {
    Allocation alloc = allocate(inst);
    PriceSchedule schedule;
    if (rule == "maintaining") {
        for (std::size_t j = 0; j < alloc.shown(); ++j)
            schedule.entries.push_back(
                {alloc.slots[j], j, maintaining_bid_price(inst, allocate, alloc.slots[j], tol),
                 rule});
    } else if (rule == "swap") {
        for (std::size_t j = 0; j + 1 < alloc.shown(); ++j)
            schedule.entries.push_back(
                {alloc.slots[j], j, adjacent_swap_price(j, alloc, inst, model), rule});
    } else {
        throw_error(Errc::usage_error, "unknown pricing rule '" + rule + "'");
    }
    return schedule;
}

}  // namespace posauction
