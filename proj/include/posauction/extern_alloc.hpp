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

#include <utility>
#include <vector>

#include "posauction/types.hpp"

namespace posauction {

/// Welfare of an allocation under the externality model at nu = 1:
///   sum_j n_j b_(j) q_(j) / (1 + lambda * sum_j n_j q_(j))
/// summed over occupied slots in page order. nu never changes which
/// allocation is best, so allocation code works at nu = 1 throughout.
double externality_welfare(const AuctionInstance& inst, const Allocation& alloc, double lambda);

/// Ranking score b*q - lambda*q*S at welfare estimate S.
double score(const Advertiser& a, double welfare_estimate, double lambda);

/// Ranks candidates by score descending (ties by ascending id) and fills the
/// top min(m, s) slots. Candidates with strictly negative score are excluded
/// outright: showing one lowers welfare. `skipped` (when non-null) receives
/// the excluded ids in ascending order.
Allocation rank_by_score(const AuctionInstance& inst, double welfare_estimate, double lambda,
                         std::vector<AdvertiserId>* skipped = nullptr);

/// Score sum sum_m n_m (b_m q_m - lambda q_m S) of the ranking induced by S.
/// Its unique fixed point is the optimal welfare.
double phi(double welfare_estimate, const AuctionInstance& inst, double lambda);

/// Would swapping the ads in occupied slots k < m raise welfare? Decided by
/// comparing scores at the current allocation's welfare; agrees with
/// evaluating the welfare of both orders directly.
bool swap_improves(std::size_t k, std::size_t m, const Allocation& alloc,
                   const AuctionInstance& inst, double lambda);

struct BisectionState {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t iterations = 0;
    std::vector<std::pair<double, double>> history;  // (midpoint, phi(midpoint))
};

struct ExternAllocationResult {
    Allocation allocation;
    double s_star = 0.0;  // welfare of `allocation`, the fixed point of phi
    BisectionState state;
    std::vector<AdvertiserId> skipped;  // excluded for negative score at the final estimate
};

/// Welfare-maximizing allocation by bisecting on the welfare estimate:
/// start with the eCPM ranking's welfare as the lower bracket and its
/// position-weighted eCPM sum as the upper bracket, then halve toward the
/// fixed point until the rankings at both brackets coincide. The loop also
/// stops when the bracket width drops below `tol` (default
/// 1e-12 * initial upper bracket) and returns the lower-bracket ranking;
/// persistent score ties could otherwise cycle forever in floating point.
ExternAllocationResult bisection_allocate(const AuctionInstance& inst, double lambda,
                                          double tol = 0.0);

/// Independent oracle: enumerates every ordered arrangement of every subset
/// of ads into the top slots (including showing fewer ads than slots) and
/// returns the welfare maximum. Ties break toward the lexicographically
/// smallest slot-id sequence. Refuses instances with more than `max_ads`
/// advertisers.
ExternAllocationResult brute_force_allocate(const AuctionInstance& inst, double lambda,
                                            std::size_t max_ads = 8);

}  // namespace posauction
