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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "posauction/errors.hpp"

namespace posauction {

using AdvertiserId = std::string;

/// One bidder: a cost-per-click bid, a clickability score, and a brand flag
/// that only the brand model reads.
struct Advertiser {
    AdvertiserId id;
    double bid = 0.0;
    double quality = 0.0;
    bool brand = false;

    bool operator==(const Advertiser&) const = default;
};

/// eCPM-bid score b*q used for ranking. No per-mille scaling is applied.
inline double ecpm(const Advertiser& a) { return a.bid * a.quality; }

/// Per-position click multipliers n_k, non-increasing down the page.
struct PositionProfile {
    std::vector<double> scores;

    bool operator==(const PositionProfile&) const = default;
};

/// Two position curves: beta for brand ads, eta for non-brand ads.
/// Both non-increasing, both normalized so the top position scores 1.
struct BrandPositionProfile {
    std::vector<double> beta;
    std::vector<double> eta;

    bool operator==(const BrandPositionProfile&) const = default;
};

/// Externality strength lambda and calibration scale nu. lambda = 0, nu = 1
/// reduces the externality model to the separable one.
struct ExternalityParams {
    double lambda = 0.0;
    double nu = 1.0;

    bool operator==(const ExternalityParams&) const = default;
};

/// The single input record: bidders plus exactly one kind of position
/// profile, with externality parameters when the externality model applies.
struct AuctionInstance {
    std::vector<Advertiser> advertisers;
    std::optional<PositionProfile> positions;
    std::optional<BrandPositionProfile> brand_positions;
    std::optional<ExternalityParams> params;

    bool operator==(const AuctionInstance&) const = default;

    std::size_t advertiser_count() const { return advertisers.size(); }

    std::size_t slot_count() const {
        if (positions) return positions->scores.size();
        if (brand_positions) return brand_positions->beta.size();
        return 0;
    }

    bool has_brand_profile() const { return brand_positions.has_value(); }

    const Advertiser* find(const AdvertiserId& id) const {
        for (const auto& a : advertisers)
            if (a.id == id) return &a;
        return nullptr;
    }

    const Advertiser& require(const AdvertiserId& id) const {
        const Advertiser* a = find(id);
        if (a == nullptr) throw_error(Errc::not_shown, "no advertiser with id '" + id + "'");
        return *a;
    }
};

/// Ordered assignment of advertisers to positions. Only the occupied prefix
/// is stored; every slot past slots.size() is empty, which encodes the
/// fill-from-the-top rule structurally.
struct Allocation {
    std::vector<AdvertiserId> slots;

    bool operator==(const Allocation&) const = default;

    std::size_t shown() const { return slots.size(); }
    bool empty() const { return slots.empty(); }

    bool contains(const AdvertiserId& id) const {
        for (const auto& s : slots)
            if (s == id) return true;
        return false;
    }

    /// 0-based position of the advertiser, or npos when unshown.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t position_of(const AdvertiserId& id) const {
        for (std::size_t j = 0; j < slots.size(); ++j)
            if (slots[j] == id) return j;
        return npos;
    }
};

/// Expected welfare of an allocation: the total, its per-slot split
/// (empty slots contribute 0), and which model/method produced it.
struct WelfareReport {
    double total = 0.0;
    std::vector<double> per_slot;
    std::string model;
    std::string method;
};

}  // namespace posauction
