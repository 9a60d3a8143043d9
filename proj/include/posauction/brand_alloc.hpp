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

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "posauction/types.hpp"

namespace posauction {

/// Which positions (0-based) the brand class occupies. The occupied
/// positions are exactly brand_slots + nonbrand_slots and form a prefix of
/// the page.
struct BrandConfig {
    std::set<std::size_t> brand_slots;
    std::set<std::size_t> nonbrand_slots;

    bool operator==(const BrandConfig&) const = default;
};

/// Welfare of a configuration with each class ordered internally by eCPM
/// descending into its positions by position score descending (the unique
/// within-class order an optimal allocation can use).
double brand_welfare(const BrandConfig& config, const AuctionInstance& inst);

/// Exact optimum by checking every feasible configuration of brand
/// positions. Ties break toward the lexicographically smallest brand slot
/// set, then the smallest non-brand slot set. Refuses pages with more than
/// `max_slots` positions.
std::pair<Allocation, double> optimal_brand_allocate(const AuctionInstance& inst,
                                                     std::size_t max_slots = 20);

/// Fast path for constant beta and strictly decreasing eta: the optimum
/// never shows a non-brand ad below a brand ad, so only the split point
/// between the classes has to be searched. Throws precondition_not_met when
/// the profile shape does not qualify.
std::pair<Allocation, double> brand_last_fastpath(const AuctionInstance& inst);

/// Greedy baseline: fill positions top-down with the unassigned ad of
/// highest normalized eCPM (beta_k*b*q for brand ads, eta_k*b*q otherwise).
/// Ties prefer brand ads, then ascending id.
std::pair<Allocation, double> greedy_brand_allocate(const AuctionInstance& inst);

/// greedy welfare / optimal welfare. Throws zero_optimal when the optimal
/// welfare is 0.
double greedy_ratio(const AuctionInstance& inst);

enum class ThresholdKind { never, always, threshold };

struct ThresholdVerdict {
    ThresholdKind kind = ThresholdKind::never;
    double value = 0.0;                 // smallest grid value that shows a brand ad; only
                                        // meaningful when kind == threshold
    std::vector<double> flagged;        // grid values below the second-highest remaining
                                        // brand eCPM, where the swept ad is no longer the
                                        // highest remaining brand ad
    std::vector<bool> indicator;        // per ascending grid value
};

/// Empirical probe of the show-a-brand-ad threshold at position k+1. The
/// first `k` advertisers of the instance are pinned to the top k positions;
/// among the rest, the brand ad with the highest eCPM is designated and its
/// eCPM swept over `probe_grid` (sorted ascending internally). At each grid
/// value the continuation over positions k+1..s is solved exactly by
/// configuration enumeration and the verdict records whether a brand ad
/// lands in position k+1. The indicator must be monotone non-decreasing over
/// the unflagged grid values; a violation throws monotonicity_violation.
ThresholdVerdict brand_threshold_probe(const AuctionInstance& inst, std::size_t k,
                                       std::vector<double> probe_grid);

/// Worst-case instance for the greedy baseline: two positions, one brand ad
/// of eCPM 1+epsilon, one non-brand ad of eCPM 1, beta = (1,1), eta = (1,0).
/// Greedy earns 1+epsilon where 2+epsilon is available.
AuctionInstance make_tight_greedy_instance(double epsilon);

/// Instance where greedy underperforms even the plain eCPM ranking: three
/// positions, brand eCPMs {10, 1}, non-brand eCPM 1+epsilon, beta = (1,1,1),
/// eta = (1, 0.5, 0). Requires 0 < epsilon < 1.
AuctionInstance make_greedy_vs_standard_instance(double epsilon);

}  // namespace posauction
