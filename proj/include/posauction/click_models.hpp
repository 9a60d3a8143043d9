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

#include <span>
#include <string>
#include <vector>

#include "posauction/types.hpp"

namespace posauction {

/// Click rate of the ad in `slot` under the separable model: n_slot * q_slot.
/// `q` holds the qualities of the occupied slots (a prefix of the page),
/// `n` the full position profile. 0-based slots.
double separable_ctr(std::size_t slot, std::span<const double> q, std::span<const double> n);

/// Click rate under the practical externality model:
///   nu * n_slot * q_slot / (1 + lambda * sum_k n_k * q_k)
/// with the sum over occupied slots only. lambda = 0, nu = 1 recovers the
/// separable model on all inputs.
double practical_ctr(std::size_t slot, std::span<const double> q, std::span<const double> n,
                     const ExternalityParams& params);

enum class ModelKind { separable, externality, brand };

/// The closed family of click models the library allocates and prices with.
/// Every member factors as p_j = base_j / divisor with a slot-independent
/// divisor; pricing exploits the factored form to cancel it exactly.
class ClickModel {
public:
    static ClickModel separable() { return ClickModel(ModelKind::separable, {}); }
    static ClickModel externality(ExternalityParams params) {
        return ClickModel(ModelKind::externality, params);
    }
    static ClickModel brand() { return ClickModel(ModelKind::brand, {}); }

    ModelKind kind() const { return kind_; }
    const ExternalityParams& params() const { return params_; }
    std::string name() const;

    /// True when the instance carries the profile kind this model reads.
    bool accepts(const AuctionInstance& inst) const;

    struct RateBreakdown {
        std::vector<double> base;  // one entry per occupied slot
        double divisor = 1.0;
    };

    /// Factored click rates for the occupied slots of `alloc`. Throws
    /// model_profile_mismatch when the instance has the wrong profile kind.
    RateBreakdown rate_breakdown(const AuctionInstance& inst, const Allocation& alloc) const;

    /// Click rate per occupied slot: base_j / divisor.
    std::vector<double> slot_rates(const AuctionInstance& inst, const Allocation& alloc) const;

private:
    ClickModel(ModelKind kind, ExternalityParams params) : kind_(kind), params_(params) {}

    ModelKind kind_;
    ExternalityParams params_;
};

/// Expected welfare sum b_(j) * p_(j) of an allocation under a model.
/// per_slot has one entry per page position; empty slots contribute 0.
WelfareReport welfare(const Allocation& alloc, const AuctionInstance& inst, const ClickModel& model,
                      const std::string& method = "given");

/// The standard-model allocation: every ad ranked by eCPM descending (ties
/// by ascending id) into the top min(m, s) slots. Works with either profile
/// kind.
Allocation ecpm_ranking(const AuctionInstance& inst);

}  // namespace posauction
