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

#include "posauction/extern_alloc.hpp"

#include <algorithm>
#include <sstream>

namespace posauction {

namespace {

const std::vector<double>& position_scores(const AuctionInstance& inst) {
    if (!inst.positions)
        throw_error(Errc::model_profile_mismatch,
                    "externality allocation needs a plain position profile");
    return inst.positions->scores;
}

}  // namespace

double externality_welfare(const AuctionInstance& inst, const Allocation& alloc, double lambda) {
    const auto& n = position_scores(inst);
    double value = 0.0;
    double interaction = 0.0;
    for (std::size_t j = 0; j < alloc.shown(); ++j) {
        const Advertiser& a = inst.require(alloc.slots[j]);
        value += n[j] * a.bid * a.quality;
        interaction += n[j] * a.quality;
    }
    return value / (1.0 + lambda * interaction);
}

double score(const Advertiser& a, double welfare_estimate, double lambda) {
    return a.bid * a.quality - lambda * a.quality * welfare_estimate;
}

Allocation rank_by_score(const AuctionInstance& inst, double welfare_estimate, double lambda,
                         std::vector<AdvertiserId>* skipped) {
    const auto& n = position_scores(inst);

    std::vector<const Advertiser*> candidates;
    candidates.reserve(inst.advertisers.size());
    for (const auto& a : inst.advertisers) {
        if (score(a, welfare_estimate, lambda) < 0.0) {
            if (skipped) skipped->push_back(a.id);
            continue;
        }
        candidates.push_back(&a);
    }
    if (skipped) std::sort(skipped->begin(), skipped->end());

    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const Advertiser* x, const Advertiser* y) {
                         double sx = score(*x, welfare_estimate, lambda);
                         double sy = score(*y, welfare_estimate, lambda);
                         if (sx != sy) return sx > sy;
                         return x->id < y->id;
                     });

    Allocation alloc;
    std::size_t take = std::min(candidates.size(), n.size());
    alloc.slots.reserve(take);
    for (std::size_t j = 0; j < take; ++j) alloc.slots.push_back(candidates[j]->id);
    return alloc;
}

double phi(double welfare_estimate, const AuctionInstance& inst, double lambda) {
    const auto& n = position_scores(inst);
    Allocation ranked = rank_by_score(inst, welfare_estimate, lambda);
    double total = 0.0;
    for (std::size_t j = 0; j < ranked.shown(); ++j)
        total += n[j] * score(inst.require(ranked.slots[j]), welfare_estimate, lambda);
    return total;
}

bool swap_improves(std::size_t k, std::size_t m, const Allocation& alloc,
                   const AuctionInstance& inst, double lambda) {
    if (k >= m) {
        std::ostringstream ss;
        ss << "swap wants k < m, got k=" << k << ", m=" << m;
        throw_error(Errc::not_ordered, ss.str());
    }
    if (m >= alloc.shown()) {
        std::ostringstream ss;
        ss << "slot " << m << " is empty (" << alloc.shown() << " occupied)";
        throw_error(Errc::slot_empty, ss.str());
    }
    double current = externality_welfare(inst, alloc, lambda);
    const Advertiser& upper = inst.require(alloc.slots[k]);
    const Advertiser& lower = inst.require(alloc.slots[m]);
    // Scores that cross exactly at the fixed point come out of the float
    // pipeline separated by a few ulps; such a pair is a welfare tie, not an
    // improvement. The guard sits about three orders below the library's
    // 1e-9 comparison tolerance and far above accumulated rounding error.
    double guard = 1e-12 * std::max({1.0, upper.bid * upper.quality, lower.bid * lower.quality,
                                     lambda * upper.quality * current,
                                     lambda * lower.quality * current});
    return score(lower, current, lambda) > score(upper, current, lambda) + guard;
}

ExternAllocationResult bisection_allocate(const AuctionInstance& inst, double lambda, double tol) {
    const auto& n = position_scores(inst);
    if (inst.advertisers.empty())
        throw_error(Errc::no_candidates, "instance has no advertisers to rank");

    // Steps 1-2: brackets from the eCPM ranking. Scores at S = 0 are plain
    // eCPMs and never negative, so nothing is excluded here.
    Allocation ecpm_rank = rank_by_score(inst, 0.0, lambda);
    double s_low = externality_welfare(inst, ecpm_rank, lambda);
    double s_high = 0.0;
    for (std::size_t j = 0; j < ecpm_rank.shown(); ++j) {
        const Advertiser& a = inst.require(ecpm_rank.slots[j]);
        s_high += n[j] * a.bid * a.quality;
    }

    if (tol <= 0.0) tol = 1e-12 * s_high;

    ExternAllocationResult result;
    result.state.lower = s_low;
    result.state.upper = s_high;

    Allocation chosen;
    while (true) {
        Allocation at_low = rank_by_score(inst, s_low, lambda);
        Allocation at_high = rank_by_score(inst, s_high, lambda);
        if (at_low == at_high) {
            chosen = at_low;
            break;
        }
        if (s_high - s_low < tol) {
            // Tied scores can keep the endpoint rankings distinct forever;
            // the lower bracket is always a feasible estimate, so use it.
            chosen = at_low;
            break;
        }
        double mid = 0.5 * (s_low + s_high);
        if (mid <= s_low || mid >= s_high) {
            // bracket narrower than one representable step
            chosen = at_low;
            break;
        }
        double phi_mid = phi(mid, inst, lambda);
        result.state.history.emplace_back(mid, phi_mid);
        ++result.state.iterations;
        if (phi_mid < mid)
            s_high = mid;
        else
            s_low = mid;
        result.state.lower = s_low;
        result.state.upper = s_high;
    }

    result.allocation = chosen;
    result.s_star = externality_welfare(inst, chosen, lambda);
    rank_by_score(inst, s_low, lambda, &result.skipped);
    return result;
}

ExternAllocationResult brute_force_allocate(const AuctionInstance& inst, double lambda,
                                            std::size_t max_ads) {
    const auto& n = position_scores(inst);
    if (inst.advertisers.size() > max_ads) {
        std::ostringstream ss;
        ss << inst.advertisers.size() << " advertisers exceed the enumeration limit of " << max_ads;
        throw_error(Errc::instance_too_large, ss.str());
    }

    const std::size_t m = inst.advertisers.size();
    const std::size_t s = n.size();

    Allocation best;  // the empty arrangement, welfare 0
    double best_welfare = 0.0;

    Allocation current;
    std::vector<bool> used(m, false);

    auto consider = [&](const Allocation& candidate) {
        double w = externality_welfare(inst, candidate, lambda);
        if (w > best_welfare ||
            (w == best_welfare &&
             std::lexicographical_compare(candidate.slots.begin(), candidate.slots.end(),
                                          best.slots.begin(), best.slots.end()))) {
            best = candidate;
            best_welfare = w;
        }
    };

    // Depth-first over arrangements: at each slot either stop (leaving the
    // rest of the page empty) or place any unused ad.
    auto extend = [&](auto&& self, std::size_t slot) -> void {
        consider(current);
        if (slot >= s) return;
        for (std::size_t i = 0; i < m; ++i) {
            if (used[i]) continue;
            used[i] = true;
            current.slots.push_back(inst.advertisers[i].id);
            self(self, slot + 1);
            current.slots.pop_back();
            used[i] = false;
        }
    };
    extend(extend, 0);

    ExternAllocationResult result;
    result.allocation = best;
    result.s_star = best_welfare;
    return result;
}

}  // namespace posauction
