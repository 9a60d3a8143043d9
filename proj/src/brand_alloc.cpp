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

#include "posauction/brand_alloc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <span>
#include <sstream>

namespace posauction {

namespace {

const BrandPositionProfile& brand_profile(const AuctionInstance& inst) {
    if (!inst.brand_positions)
        throw_error(Errc::model_profile_mismatch, "brand allocation needs a brand position profile");
    return *inst.brand_positions;
}

struct ClassedAds {
    std::vector<const Advertiser*> brand;     // eCPM descending, ties by ascending id
    std::vector<const Advertiser*> nonbrand;  // likewise
};

void sort_by_ecpm(std::vector<const Advertiser*>& ads) {
    std::stable_sort(ads.begin(), ads.end(), [](const Advertiser* x, const Advertiser* y) {
        double ex = ecpm(*x), ey = ecpm(*y);
        if (ex != ey) return ex > ey;
        return x->id < y->id;
    });
}

ClassedAds split_classes(const std::vector<const Advertiser*>& ads) {
    ClassedAds split;
    for (const Advertiser* a : ads) (a->brand ? split.brand : split.nonbrand).push_back(a);
    sort_by_ecpm(split.brand);
    sort_by_ecpm(split.nonbrand);
    return split;
}

std::vector<const Advertiser*> all_ads(const AuctionInstance& inst) {
    std::vector<const Advertiser*> ads;
    ads.reserve(inst.advertisers.size());
    for (const auto& a : inst.advertisers) ads.push_back(&a);
    return ads;
}

/// Core enumeration over configurations of `slots` positions with scores
/// beta/eta (already sliced to the continuation window). Within-class order
/// is forced, so a configuration is fully described by the brand slot set.
struct EnumBest {
    std::vector<bool> brand_at;  // per occupied slot of the winning prefix
    std::size_t occupied = 0;
    double welfare = 0.0;
    std::vector<std::size_t> brand_slots;
    std::vector<std::size_t> nonbrand_slots;
};

EnumBest enumerate_configs(const ClassedAds& split, std::span<const double> beta,
                           std::span<const double> eta) {
    const std::size_t s = beta.size();
    const std::size_t nb = split.brand.size();
    const std::size_t nn = split.nonbrand.size();
    const std::size_t max_occupied = std::min(s, nb + nn);

    EnumBest best;  // show nothing: welfare 0, empty sets
    bool have_best = false;

    std::vector<std::size_t> brand_slots, nonbrand_slots;
    for (std::size_t t = 0; t <= max_occupied; ++t) {
        // every subset of the t occupied positions that the brand class takes
        const std::uint64_t limit = std::uint64_t{1} << t;
        for (std::uint64_t mask = 0; mask < limit; ++mask) {
            std::size_t brand_count = static_cast<std::size_t>(std::popcount(mask));
            if (brand_count > nb || t - brand_count > nn) continue;

            brand_slots.clear();
            nonbrand_slots.clear();
            double w = 0.0;
            std::size_t bi = 0, ni = 0;
            for (std::size_t j = 0; j < t; ++j) {
                if (mask & (std::uint64_t{1} << j)) {
                    w += beta[j] * ecpm(*split.brand[bi++]);
                    brand_slots.push_back(j);
                } else {
                    w += eta[j] * ecpm(*split.nonbrand[ni++]);
                    nonbrand_slots.push_back(j);
                }
            }

            bool better = !have_best || w > best.welfare;
            if (!better && w == best.welfare) {
                if (brand_slots != best.brand_slots)
                    better = std::lexicographical_compare(brand_slots.begin(), brand_slots.end(),
                                                          best.brand_slots.begin(),
                                                          best.brand_slots.end());
                else
                    better = std::lexicographical_compare(
                        nonbrand_slots.begin(), nonbrand_slots.end(), best.nonbrand_slots.begin(),
                        best.nonbrand_slots.end());
            }
            if (better) {
                have_best = true;
                best.welfare = w;
                best.occupied = t;
                best.brand_slots = brand_slots;
                best.nonbrand_slots = nonbrand_slots;
                best.brand_at.assign(t, false);
                for (std::size_t j : brand_slots) best.brand_at[j] = true;
            }
        }
    }
    return best;
}

Allocation realize(const EnumBest& best, const ClassedAds& split) {
    Allocation alloc;
    alloc.slots.reserve(best.occupied);
    std::size_t bi = 0, ni = 0;
    for (std::size_t j = 0; j < best.occupied; ++j)
        alloc.slots.push_back(best.brand_at[j] ? split.brand[bi++]->id : split.nonbrand[ni++]->id);
    return alloc;
}

/// Slot-order welfare of an allocation under the brand model; the canonical
/// value every public entry point reports.
double slot_order_welfare(const AuctionInstance& inst, const Allocation& alloc) {
    const auto& bp = brand_profile(inst);
    double w = 0.0;
    for (std::size_t j = 0; j < alloc.shown(); ++j) {
        const Advertiser& a = inst.require(alloc.slots[j]);
        w += (a.brand ? bp.beta[j] : bp.eta[j]) * ecpm(a);
    }
    return w;
}

}  // namespace

double brand_welfare(const BrandConfig& config, const AuctionInstance& inst) {
    const auto& bp = brand_profile(inst);
    ClassedAds split = split_classes(all_ads(inst));

    if (!config.brand_slots.empty() && *config.brand_slots.rbegin() >= bp.beta.size())
        throw_error(Errc::infeasible_config, "brand slot beyond the page");
    if (!config.nonbrand_slots.empty() && *config.nonbrand_slots.rbegin() >= bp.eta.size())
        throw_error(Errc::infeasible_config, "non-brand slot beyond the page");
    if (config.brand_slots.size() > split.brand.size())
        throw_error(Errc::infeasible_config, "more brand slots than brand ads");
    if (config.nonbrand_slots.size() > split.nonbrand.size())
        throw_error(Errc::infeasible_config, "more non-brand slots than non-brand ads");

    std::size_t t = config.brand_slots.size() + config.nonbrand_slots.size();
    std::vector<bool> covered(t, false);
    for (std::size_t j : config.brand_slots) {
        if (j >= t || covered[j])
            throw_error(Errc::infeasible_config, "occupied positions must form a disjoint prefix");
        covered[j] = true;
    }
    for (std::size_t j : config.nonbrand_slots) {
        if (j >= t || covered[j])
            throw_error(Errc::infeasible_config, "occupied positions must form a disjoint prefix");
        covered[j] = true;
    }

    // sets iterate ascending = position score descending, matching class order
    double w = 0.0;
    std::size_t bi = 0, ni = 0;
    for (std::size_t j : config.brand_slots) w += bp.beta[j] * ecpm(*split.brand[bi++]);
    for (std::size_t j : config.nonbrand_slots) w += bp.eta[j] * ecpm(*split.nonbrand[ni++]);
    return w;
}

std::pair<Allocation, double> optimal_brand_allocate(const AuctionInstance& inst,
                                                     std::size_t max_slots) {
    const auto& bp = brand_profile(inst);
    if (bp.beta.size() > max_slots) {
        std::ostringstream ss;
        ss << bp.beta.size() << " positions exceed the enumeration limit of " << max_slots;
        throw_error(Errc::too_many_positions, ss.str());
    }
    ClassedAds split = split_classes(all_ads(inst));
    EnumBest best = enumerate_configs(split, bp.beta, bp.eta);
    Allocation alloc = realize(best, split);
    return {alloc, slot_order_welfare(inst, alloc)};
}

std::pair<Allocation, double> brand_last_fastpath(const AuctionInstance& inst) {
    const auto& bp = brand_profile(inst);
    for (std::size_t k = 0; k + 1 < bp.beta.size(); ++k)
        if (bp.beta[k + 1] != bp.beta[k])
            throw_error(Errc::precondition_not_met, "beta must be constant across positions");
    for (std::size_t k = 0; k + 1 < bp.eta.size(); ++k)
        if (bp.eta[k + 1] >= bp.eta[k])
            throw_error(Errc::precondition_not_met, "eta must be strictly decreasing");

    ClassedAds split = split_classes(all_ads(inst));
    const std::size_t s = bp.beta.size();

    // Non-brand ads take the top slots, brand ads the rest; only the class
    // split point is free. With brand indifference to position the best
    // split is a one-dimensional scan.
    std::size_t best_t = 0;
    double best_w = -1.0;
    for (std::size_t t = 0; t <= std::min(s, split.nonbrand.size()); ++t) {
        double w = 0.0;
        for (std::size_t j = 0; j < t; ++j) w += bp.eta[j] * ecpm(*split.nonbrand[j]);
        std::size_t brands = std::min(split.brand.size(), s - t);
        for (std::size_t j = 0; j < brands; ++j) w += bp.beta[t + j] * ecpm(*split.brand[j]);
        if (w > best_w) {
            best_w = w;
            best_t = t;
        }
    }

    Allocation alloc;
    for (std::size_t j = 0; j < best_t; ++j) alloc.slots.push_back(split.nonbrand[j]->id);
    std::size_t brands = std::min(split.brand.size(), s - best_t);
    for (std::size_t j = 0; j < brands; ++j) alloc.slots.push_back(split.brand[j]->id);
    return {alloc, slot_order_welfare(inst, alloc)};
}

std::pair<Allocation, double> greedy_brand_allocate(const AuctionInstance& inst) {
    const auto& bp = brand_profile(inst);
    std::vector<const Advertiser*> remaining = all_ads(inst);

    Allocation alloc;
    for (std::size_t k = 0; k < bp.beta.size() && !remaining.empty(); ++k) {
        std::size_t pick = 0;
        double pick_value = -1.0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            const Advertiser& a = *remaining[i];
            double v = (a.brand ? bp.beta[k] : bp.eta[k]) * ecpm(a);
            bool better = v > pick_value;
            if (!better && v == pick_value) {
                const Advertiser& cur = *remaining[pick];
                if (a.brand != cur.brand)
                    better = a.brand;
                else
                    better = a.id < cur.id;
            }
            if (better) {
                pick = i;
                pick_value = v;
            }
        }
        alloc.slots.push_back(remaining[pick]->id);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return {alloc, slot_order_welfare(inst, alloc)};
}

double greedy_ratio(const AuctionInstance& inst) {
    double greedy = greedy_brand_allocate(inst).second;
    double optimal = optimal_brand_allocate(inst).second;
    if (optimal == 0.0) throw_error(Errc::zero_optimal, "optimal welfare is 0");
    return greedy / optimal;
}

ThresholdVerdict brand_threshold_probe(const AuctionInstance& inst, std::size_t k,
                                       std::vector<double> probe_grid) {
    const auto& bp = brand_profile(inst);
    if (k > inst.advertisers.size() || k > bp.beta.size())
        throw_error(Errc::index_out_of_range, "prefix length k exceeds the instance");
    if (bp.beta.size() - k > 20)
        throw_error(Errc::too_many_positions,
                    "continuation window exceeds the enumeration limit of 20 positions");
    if (probe_grid.empty()) throw_error(Errc::grid_too_small, "probe grid is empty");
    std::sort(probe_grid.begin(), probe_grid.end());
    probe_grid.erase(std::unique(probe_grid.begin(), probe_grid.end()), probe_grid.end());

    // advertisers[0..k) are pinned to the top k positions; the rest compete
    // for the continuation window k..s
    std::vector<const Advertiser*> remaining;
    for (std::size_t i = k; i < inst.advertisers.size(); ++i)
        remaining.push_back(&inst.advertisers[i]);

    const Advertiser* designated = nullptr;
    double second_highest = 0.0;
    bool has_second = false;
    for (const Advertiser* a : remaining) {
        if (!a->brand) continue;
        if (designated == nullptr || ecpm(*a) > ecpm(*designated) ||
            (ecpm(*a) == ecpm(*designated) && a->id < designated->id)) {
            if (designated != nullptr) {
                double e = ecpm(*designated);
                if (!has_second || e > second_highest) second_highest = e;
                has_second = true;
            }
            designated = a;
        } else {
            double e = ecpm(*a);
            if (!has_second || e > second_highest) second_highest = e;
            has_second = true;
        }
    }
    if (designated == nullptr)
        throw_error(Errc::no_brand_ad_remaining, "no brand ad left to sweep below position k");

    std::span<const double> beta_tail(bp.beta.data() + k, bp.beta.size() - k);
    std::span<const double> eta_tail(bp.eta.data() + k, bp.eta.size() - k);

    ThresholdVerdict verdict;
    verdict.indicator.reserve(probe_grid.size());

    for (double v : probe_grid) {
        if (has_second && v < second_highest) verdict.flagged.push_back(v);

        // rebuild the continuation field with the designated ad's eCPM at v;
        // only eCPM and the brand flag matter to the brand model
        std::vector<Advertiser> swept;
        swept.reserve(remaining.size());
        for (const Advertiser* a : remaining) {
            Advertiser copy = *a;
            if (a == designated) {
                copy.bid = v;
                copy.quality = 1.0;
            }
            swept.push_back(copy);
        }
        std::vector<const Advertiser*> field;
        for (const auto& a : swept) field.push_back(&a);
        ClassedAds split = split_classes(field);
        EnumBest best = enumerate_configs(split, beta_tail, eta_tail);
        verdict.indicator.push_back(!best.brand_at.empty() && best.brand_at.front());
    }

    bool seen_true = false;
    bool seen_any_true = false, seen_all_true = true;
    double first_true = 0.0;
    for (std::size_t i = 0; i < probe_grid.size(); ++i) {
        bool flagged = std::find(verdict.flagged.begin(), verdict.flagged.end(), probe_grid[i]) !=
                       verdict.flagged.end();
        bool on = verdict.indicator[i];
        if (!flagged) {
            if (seen_true && !on) {
                std::ostringstream ss;
                ss << "indicator turned off again at swept eCPM " << probe_grid[i];
                throw_invariant(Errc::monotonicity_violation, ss.str());
            }
            if (on && !seen_true) seen_true = true;
        }
        if (on && !seen_any_true) {
            seen_any_true = true;
            first_true = probe_grid[i];
        }
        seen_all_true = seen_all_true && on;
    }

    if (!seen_any_true)
        verdict.kind = ThresholdKind::never;
    else if (seen_all_true)
        verdict.kind = ThresholdKind::always;
    else {
        verdict.kind = ThresholdKind::threshold;
        verdict.value = first_true;
    }
    return verdict;
}

AuctionInstance make_tight_greedy_instance(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw_error(Errc::non_positive_epsilon, "epsilon must be positive");
    AuctionInstance inst;
    inst.brand_positions = BrandPositionProfile{{1.0, 1.0}, {1.0, 0.0}};
    inst.advertisers = {
        {"brand", 1.0 + epsilon, 1.0, true},
        {"nonbrand", 1.0, 1.0, false},
    };
    return inst;
}

AuctionInstance make_greedy_vs_standard_instance(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw_error(Errc::epsilon_out_of_range, "epsilon must lie in (0, 1)");
    AuctionInstance inst;
    inst.brand_positions = BrandPositionProfile{{1.0, 1.0, 1.0}, {1.0, 0.5, 0.0}};
    inst.advertisers = {
        {"brand_big", 10.0, 1.0, true},
        {"brand_small", 1.0, 1.0, true},
        {"nonbrand", 1.0 + epsilon, 1.0, false},
    };
    return inst;
}

}  // namespace posauction
