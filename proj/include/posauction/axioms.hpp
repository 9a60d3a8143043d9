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

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "posauction/click_models.hpp"

namespace posauction {

/// A click-rate function f_slot(q_1..q_s; n_1..n_s) under test. Any callable
/// works, including deliberately broken mocks.
using CtrFunction =
    std::function<double(std::size_t slot, std::span<const double> q, std::span<const double> n)>;

CtrFunction as_ctr_function(const ClickModel& model);

enum class AxiomVerdict { pass, vacuous, fail };

const char* verdict_name(AxiomVerdict v);

/// One concrete counterexample (or, for reporting, the first few).
struct AxiomWitness {
    std::string axiom;
    std::size_t slot = 0;        // the slot whose rate was inspected
    std::size_t other_slot = 0;  // the perturbed slot, where applicable
    std::vector<double> base_q;
    std::vector<double> perturbed_q;
    std::vector<double> n;
    double base_value = 0.0;
    double perturbed_value = 0.0;
    std::string detail;
};

struct AxiomCheck {
    AxiomVerdict verdict = AxiomVerdict::vacuous;
    std::size_t comparisons = 0;  // inequality instances evaluated
    std::size_t strict = 0;       // comparisons that held strictly
    std::vector<AxiomWitness> witnesses;
};

/// Grid-sampled verdicts for axioms A1-A5. This is evidence on a finite
/// grid, not a proof; a passing report says "pass on grid" and nothing more.
struct AxiomReport {
    std::array<AxiomCheck, 5> axioms;  // index 0 = A1 ... index 4 = A5

    const AxiomCheck& a(std::size_t i) const { return axioms.at(i - 1); }
    bool all_hold() const {
        for (const auto& c : axioms)
            if (c.verdict == AxiomVerdict::fail) return false;
        return true;
    }
};

/// Exhaustively evaluates A1-A5 for `f` over every quality vector drawn from
/// `quality_grid` on s slots with position scores `n_vec`:
///   A1  f = 0 at q_slot = 0 and at n_slot = 0
///   A2  strictly increasing in own quality (n_slot > 0)
///   A3  strictly increasing in own position score (q_slot > 0)
///   A4  non-increasing in any other slot's quality
///   A5  perturbing a higher-score position moves other slots' rates at
///       least as much as the same perturbation in a lower-score position
/// Strict checks allow f(x+d) > f(x) - tolerance; weak checks allow
/// f(x+d) <= f(x) + tolerance. A4/A5 report `vacuous` when every comparison
/// held with equality (the separable model does exactly that).
/// Throws grid_too_small when the grid has fewer than 3 distinct values.
AxiomReport check_axioms(const CtrFunction& f, std::size_t s, std::vector<double> quality_grid,
                         std::vector<double> n_vec, double tolerance = 1e-12);

}  // namespace posauction
