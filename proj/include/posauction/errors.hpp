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

#include <stdexcept>
#include <string>

namespace posauction {

enum class Errc {
    // instance validation
    empty_instance,
    missing_profile,
    ambiguous_profile,
    non_monotone_positions,
    negative_position_score,
    negative_bid_or_quality,
    duplicate_id,
    unnormalized_brand_profile,
    invalid_params,
    // model evaluation
    model_profile_mismatch,
    index_out_of_range,
    grid_too_small,
    // allocation
    slot_empty,
    not_ordered,
    no_candidates,
    instance_too_large,
    too_many_positions,
    infeasible_config,
    precondition_not_met,
    zero_optimal,
    non_positive_epsilon,
    epsilon_out_of_range,
    no_brand_ad_remaining,
    // pricing
    not_shown,
    zero_click_rate,
    bad_tolerance,
    // invariant violations (exit code 2 in the CLI)
    non_monotone_occupancy,
    monotonicity_violation,
    // io
    parse_error,
    usage_error,
};

const char* errc_name(Errc code);

/// Base error for all library failures; carries a machine-readable code.
class AuctionError : public std::runtime_error {
public:
    AuctionError(Errc code, const std::string& what)
        : std::runtime_error(errc_name(code) + std::string(": ") + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

/// A runtime check the library guarantees failed. Distinct from input
/// errors: if one of these fires the library is in a state its own
/// invariants forbid.
class InvariantViolation : public AuctionError {
public:
    using AuctionError::AuctionError;
};

[[noreturn]] inline void throw_error(Errc code, const std::string& what) {
    throw AuctionError(code, what);
}

[[noreturn]] inline void throw_invariant(Errc code, const std::string& what) {
    throw InvariantViolation(code, what);
}

}  // namespace posauction
