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

#include <string>
#include <vector>

#include "posauction/types.hpp"

namespace posauction {

struct ValidationIssue {
    Errc code;
    std::string detail;

    bool operator==(const ValidationIssue&) const = default;
};

/// Checks every type invariant and reports the complete list of violations,
/// not just the first. An empty list means the instance is valid.
std::vector<ValidationIssue> validate_instance(const AuctionInstance& inst);

/// Throws an AuctionError describing every violation; returns the instance
/// unchanged when it is valid.
const AuctionInstance& require_valid(const AuctionInstance& inst);

std::string describe(const std::vector<ValidationIssue>& issues);

}  // namespace posauction
