#pragma once
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

#include <functional>
#include <string>
#include <vector>

#include "posauction/click_models.hpp"
#include "posauction/types.hpp"

namespace posauction {

/// Any pure instance -> allocation rule. Pricing re-runs it at trial bids,
/// so it must be deterministic.
using Allocator = std::function<Allocation(const AuctionInstance&)>;

Allocator ecpm_allocator();
Allocator externality_allocator(double lambda);
Allocator brand_optimal_allocator();

struct PriceEntry {
    AdvertiserId id;
    std::size_t position = 0;  // 0-based
    double cost_per_click = 0.0;
    std::string rule;
};

struct PriceSchedule {
    std::vector<PriceEntry> entries;
};

/// Smallest bid (within absolute tolerance `tol`) at which the advertiser
/// still occupies the position the allocator gives it at its actual bid,
/// found by bisecting the own-bid axis with a full re-allocation per trial.
/// Position as a function of own bid must improve weakly with the bid; the
/// search verifies this at every point it evaluates and throws
/// non_monotone_occupancy instead of bisecting past a violation.
double maintaining_bid_price(const AuctionInstance& inst, const Allocator& allocate,
                             const AdvertiserId& id, double tol = 1e-9);

/// Cost per click c for the ad in occupied slot k (0-based) that makes total
/// welfare indifferent to swapping slots k and k+1:
///   c p_(k) = b_(k+1) p_(k)' + b_(k) p_(k+1)' - b_(k+1) p_(k+1) + S' - S
/// where primes denote rates after the swap and S sums b_(j) p_(j) over the
/// other slots. Computed with the model's slot-independent divisor factored
/// out, which is exact and keeps equal-quality swaps at exactly equal
/// prices across models. nu cancels from both sides and is ignored.
double adjacent_swap_price(std::size_t k, const Allocation& alloc, const AuctionInstance& inst,
                           const ClickModel& model);

struct RevenueRow {
    std::size_t position = 0;  // 0-based slot k, compared against k+1
    double price_separable = 0.0;
    double price_externality = 0.0;
    double delta = 0.0;              // externality minus separable
    int quality_sign = 0;            // sign of q_(k) - q_(k+1)
};

struct RevenueComparison {
    bool allocations_identical = false;
    Allocation allocation;           // populated when identical
    std::vector<RevenueRow> rows;    // populated when identical
};

/// Prices every adjacent pair under the separable model and under the
/// externality model at `lambda`, provided both models select the same
/// allocation; otherwise reports allocations_identical = false and no rows.
RevenueComparison revenue_compare(const AuctionInstance& inst, double lambda);

/// Convenience: maintaining-bid or swap-indifference schedule for every
/// priceable shown advertiser. The swap rule prices slots that have an
/// occupied successor; the maintaining rule prices every shown slot.
PriceSchedule price_schedule(const AuctionInstance& inst, const Allocator& allocate,
                             const ClickModel& model, const std::string& rule, double tol = 1e-9);

}  // namespace posauction
