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

#include "posauction/click_models.hpp"

#include <algorithm>
#include <sstream>

namespace posauction {

namespace {

void check_slot(std::size_t slot, std::size_t occupied, std::size_t total) {
    if (slot >= occupied || slot >= total) {
        std::ostringstream ss;
        ss << "slot " << slot << " out of range (occupied " << occupied << ", positions " << total
           << ")";
        throw_error(Errc::index_out_of_range, ss.str());
    }
}

}  // namespace

double separable_ctr(std::size_t slot, std::span<const double> q, std::span<const double> n) {
    check_slot(slot, q.size(), n.size());
    return n[slot] * q[slot];
}

double practical_ctr(std::size_t slot, std::span<const double> q, std::span<const double> n,
                     const ExternalityParams& params) {
    check_slot(slot, q.size(), n.size());
    double interaction = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) interaction += n[k] * q[k];
    return params.nu * n[slot] * q[slot] / (1.0 + params.lambda * interaction);
}

std::string ClickModel::name() const {
    switch (kind_) {
        case ModelKind::separable: return "separable";
        case ModelKind::externality: {
            std::ostringstream ss;
            ss << "externality(lambda=" << params_.lambda << ",nu=" << params_.nu << ")";
            return ss.str();
        }
        case ModelKind::brand: return "brand";
    }
    return "?";
}

bool ClickModel::accepts(const AuctionInstance& inst) const {
    if (kind_ == ModelKind::brand) return inst.brand_positions.has_value();
    return inst.positions.has_value();
}

ClickModel::RateBreakdown ClickModel::rate_breakdown(const AuctionInstance& inst,
                                                     const Allocation& alloc) const {
    if (!accepts(inst))
        throw_error(Errc::model_profile_mismatch,
                    name() + " model cannot evaluate this instance's position profile");

    RateBreakdown br;
    br.base.reserve(alloc.shown());

    if (kind_ == ModelKind::brand) {
        const auto& bp = *inst.brand_positions;
        if (alloc.shown() > bp.beta.size())
            throw_error(Errc::index_out_of_range, "allocation fills more slots than the page has");
        for (std::size_t j = 0; j < alloc.shown(); ++j) {
            const Advertiser& a = inst.require(alloc.slots[j]);
            br.base.push_back((a.brand ? bp.beta[j] : bp.eta[j]) * a.quality);
        }
        br.divisor = 1.0;
        return br;
    }

    const auto& n = inst.positions->scores;
    if (alloc.shown() > n.size())
        throw_error(Errc::index_out_of_range, "allocation fills more slots than the page has");

    if (kind_ == ModelKind::separable) {
        for (std::size_t j = 0; j < alloc.shown(); ++j)
            br.base.push_back(n[j] * inst.require(alloc.slots[j]).quality);
        br.divisor = 1.0;
        return br;
    }

    double interaction = 0.0;
    for (std::size_t j = 0; j < alloc.shown(); ++j) {
        double nq = n[j] * inst.require(alloc.slots[j]).quality;
        br.base.push_back(params_.nu * nq);
        interaction += nq;
    }
    br.divisor = 1.0 + params_.lambda * interaction;
    return br;
}

std::vector<double> ClickModel::slot_rates(const AuctionInstance& inst,
                                           const Allocation& alloc) const {
    RateBreakdown br = rate_breakdown(inst, alloc);
    std::vector<double> rates(br.base.size());
    for (std::size_t j = 0; j < br.base.size(); ++j) rates[j] = br.base[j] / br.divisor;
    return rates;
}

Allocation ecpm_ranking(const AuctionInstance& inst) {
    std::vector<const Advertiser*> ads;
    ads.reserve(inst.advertisers.size());
    for (const auto& a : inst.advertisers) ads.push_back(&a);
    std::stable_sort(ads.begin(), ads.end(), [](const Advertiser* x, const Advertiser* y) {
        double ex = ecpm(*x), ey = ecpm(*y);
        if (ex != ey) return ex > ey;
        return x->id < y->id;
    });

    Allocation alloc;
    std::size_t take = std::min(ads.size(), inst.slot_count());
    alloc.slots.reserve(take);
    for (std::size_t j = 0; j < take; ++j) alloc.slots.push_back(ads[j]->id);
    return alloc;
}

WelfareReport welfare(const Allocation& alloc, const AuctionInstance& inst, const ClickModel& model,
                      const std::string& method) {
    std::vector<double> rates = model.slot_rates(inst, alloc);

    WelfareReport report;
    report.model = model.name();
    report.method = method;
    report.per_slot.assign(inst.slot_count(), 0.0);
    for (std::size_t j = 0; j < rates.size(); ++j)
        report.per_slot[j] = inst.require(alloc.slots[j]).bid * rates[j];
    double total = 0.0;
    for (double c : report.per_slot) total += c;
    report.total = total;
    return report;
}

}  // namespace posauction
