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

#include <iosfwd>
#include <string>
#include <vector>

#include "posauction/types.hpp"

namespace posauction {

/// Parses an instance document:
///   {
///     "positions": {"n": [...]} or {"beta": [...], "eta": [...]},
///     "advertisers": [{"id", "bid", "quality", "brand"?}, ...],
///     "params": {"lambda", "nu"?}            (optional)
///   }
/// Unknown keys are rejected by name; the parsed instance is validated and
/// every violated invariant is reported.
AuctionInstance parse_instance(const std::string& text);

/// Canonical document for an instance; parse(emit(x)) == x for all valid x.
std::string emit_instance(const AuctionInstance& inst);

/// Runs one CLI invocation. `args` excludes the program name. Reads
/// instance documents from `in` when no file argument is given. Returns the
/// process exit code: 0 success, 1 input error, 2 invariant violation.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace posauction
