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

#include "posauction/validate.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace posauction {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::empty_instance: return "EmptyInstance";
        case Errc::missing_profile: return "MissingProfile";
        case Errc::ambiguous_profile: return "AmbiguousProfile";
        case Errc::non_monotone_positions: return "NonMonotonePositions";
        case Errc::negative_position_score: return "NegativePositionScore";
        case Errc::negative_bid_or_quality: return "NegativeBidOrQuality";
        case Errc::duplicate_id: return "DuplicateId";
        case Errc::unnormalized_brand_profile: return "UnnormalizedBrandProfile";
        case Errc::invalid_params: return "InvalidParams";
        case Errc::model_profile_mismatch: return "ModelProfileMismatch";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::grid_too_small: return "GridTooSmall";
        case Errc::slot_empty: return "SlotEmpty";
        case Errc::not_ordered: return "NotOrdered";
        case Errc::no_candidates: return "NoCandidates";
        case Errc::instance_too_large: return "InstanceTooLarge";
        case Errc::too_many_positions: return "TooManyPositions";
        case Errc::infeasible_config: return "InfeasibleConfig";
        case Errc::precondition_not_met: return "PreconditionNotMet";
        case Errc::zero_optimal: return "ZeroOptimal";
        case Errc::non_positive_epsilon: return "NonPositiveEpsilon";
        case Errc::epsilon_out_of_range: return "EpsilonOutOfRange";
        case Errc::no_brand_ad_remaining: return "NoBrandAdRemaining";
        case Errc::not_shown: return "NotShown";
        case Errc::zero_click_rate: return "ZeroClickRate";
        case Errc::bad_tolerance: return "BadTolerance";
        case Errc::non_monotone_occupancy: return "NonMonotoneOccupancy";
        case Errc::monotonicity_violation: return "MonotonicityViolation";
        case Errc::parse_error: return "ParseError";
        case Errc::usage_error: return "UsageError";
    }
    return "UnknownError";
}

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

void check_non_increasing(const std::vector<double>& v, const char* label,
                          std::vector<ValidationIssue>& out) {
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        if (v[k + 1] > v[k]) {
            std::ostringstream ss;
            ss << label << " increases from position " << (k + 1) << " to " << (k + 2) << " ("
               << v[k] << " -> " << v[k + 1] << ")";
            out.push_back({Errc::non_monotone_positions, ss.str()});
        }
    }
}

void check_scores_finite_nonneg(const std::vector<double>& v, const char* label,
                                std::vector<ValidationIssue>& out) {
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!finite_nonneg(v[k])) {
            std::ostringstream ss;
            ss << label << "[" << (k + 1) << "] = " << v[k] << " is not finite and non-negative";
            out.push_back({Errc::negative_position_score, ss.str()});
        }
    }
}

}  // namespace

std::vector<ValidationIssue> validate_instance(const AuctionInstance& inst) {
    std::vector<ValidationIssue> issues;

    if (inst.advertisers.empty())
        issues.push_back({Errc::empty_instance, "instance has no advertisers"});

    const bool has_n = inst.positions.has_value();
    const bool has_brand = inst.brand_positions.has_value();
    if (!has_n && !has_brand) {
        issues.push_back({Errc::missing_profile, "instance carries no position profile"});
    } else if (has_n && has_brand) {
        issues.push_back({Errc::ambiguous_profile, "instance carries both profile kinds"});
    }

    if (has_n) {
        const auto& n = inst.positions->scores;
        if (n.empty()) issues.push_back({Errc::empty_instance, "position profile has no slots"});
        check_scores_finite_nonneg(n, "n", issues);
        check_non_increasing(n, "n", issues);
    }

    if (has_brand) {
        const auto& bp = *inst.brand_positions;
        if (bp.beta.empty() || bp.eta.empty())
            issues.push_back({Errc::empty_instance, "brand profile has no slots"});
        if (bp.beta.size() != bp.eta.size())
            issues.push_back({Errc::unnormalized_brand_profile,
                              "beta and eta must cover the same number of positions"});
        check_scores_finite_nonneg(bp.beta, "beta", issues);
        check_scores_finite_nonneg(bp.eta, "eta", issues);
        check_non_increasing(bp.beta, "beta", issues);
        check_non_increasing(bp.eta, "eta", issues);
        if (!bp.beta.empty() && bp.beta.front() != 1.0)
            issues.push_back({Errc::unnormalized_brand_profile, "beta_1 must equal 1 exactly"});
        if (!bp.eta.empty() && bp.eta.front() != 1.0)
            issues.push_back({Errc::unnormalized_brand_profile, "eta_1 must equal 1 exactly"});
        for (double b : bp.beta)
            if (b > 1.0)
                issues.push_back({Errc::unnormalized_brand_profile, "beta exceeds 1"});
        for (double e : bp.eta)
            if (e > 1.0)
                issues.push_back({Errc::unnormalized_brand_profile, "eta exceeds 1"});
    }

    std::set<AdvertiserId> seen;
    for (const auto& a : inst.advertisers) {
        if (!finite_nonneg(a.bid) || !finite_nonneg(a.quality)) {
            std::ostringstream ss;
            ss << "advertiser '" << a.id << "' has bid " << a.bid << ", quality " << a.quality;
            issues.push_back({Errc::negative_bid_or_quality, ss.str()});
        }
        if (!seen.insert(a.id).second)
            issues.push_back({Errc::duplicate_id, "advertiser id '" + a.id + "' appears twice"});
    }

    if (inst.params) {
        const auto& p = *inst.params;
        if (!std::isfinite(p.lambda) || p.lambda < 0.0)
            issues.push_back({Errc::invalid_params, "lambda must be finite and >= 0"});
        if (!std::isfinite(p.nu) || p.nu <= 0.0)
            issues.push_back({Errc::invalid_params, "nu must be finite and > 0"});
    }

    return issues;
}

const AuctionInstance& require_valid(const AuctionInstance& inst) {
    auto issues = validate_instance(inst);
    if (!issues.empty()) throw AuctionError(issues.front().code, describe(issues));
    return inst;
}

std::string describe(const std::vector<ValidationIssue>& issues) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i) ss << "; ";
        ss << errc_name(issues[i].code) << ": " << issues[i].detail;
    }
    return ss.str();
}

}  // namespace posauction
