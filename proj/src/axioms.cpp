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

#include "posauction/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace posauction {

const char* verdict_name(AxiomVerdict v) {
    switch (v) {
        case AxiomVerdict::pass: return "pass";
        case AxiomVerdict::vacuous: return "vacuous";
        case AxiomVerdict::fail: return "fail";
    }
    return "?";
}

CtrFunction as_ctr_function(const ClickModel& model) {
    switch (model.kind()) {
        case ModelKind::separable:
            return [](std::size_t j, std::span<const double> q, std::span<const double> n) {
                return separable_ctr(j, q, n);
            };
        case ModelKind::externality: {
            ExternalityParams params = model.params();
            return [params](std::size_t j, std::span<const double> q, std::span<const double> n) {
                return practical_ctr(j, q, n, params);
            };
        }
        case ModelKind::brand:
            throw_error(Errc::model_profile_mismatch,
                        "the axiom checker inspects single-profile models");
    }
    return {};
}

namespace {

constexpr std::size_t kMaxWitnesses = 8;

void add_witness(AxiomCheck& check, AxiomWitness w) {
    if (check.witnesses.size() < kMaxWitnesses) check.witnesses.push_back(std::move(w));
}

/// Walks every assignment of grid values to the slots in `free_slots`,
/// mutating `q` in place and invoking `body` per assignment.
template <typename Body>
void for_each_assignment(std::vector<double>& q, const std::vector<std::size_t>& free_slots,
                         const std::vector<double>& grid, const Body& body) {
    if (free_slots.empty()) {
        body();
        return;
    }
    std::vector<std::size_t> counter(free_slots.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < free_slots.size(); ++i) q[free_slots[i]] = grid[counter[i]];
        body();
        std::size_t i = 0;
        while (i < counter.size()) {
            if (++counter[i] < grid.size()) break;
            counter[i] = 0;
            ++i;
        }
        if (i == counter.size()) return;
    }
}

std::vector<std::size_t> other_slots(std::size_t s, std::initializer_list<std::size_t> fixed) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < s; ++j)
        if (std::find(fixed.begin(), fixed.end(), j) == fixed.end()) out.push_back(j);
    return out;
}

void finalize_weak(AxiomCheck& check) {
    if (check.verdict == AxiomVerdict::fail) return;
    if (check.comparisons == 0 || check.strict == 0)
        check.verdict = AxiomVerdict::vacuous;
    else
        check.verdict = AxiomVerdict::pass;
}

void finalize_strict(AxiomCheck& check) {
    if (check.verdict == AxiomVerdict::fail) return;
    check.verdict = check.comparisons == 0 ? AxiomVerdict::vacuous : AxiomVerdict::pass;
}

}  // namespace

AxiomReport check_axioms(const CtrFunction& f, std::size_t s, std::vector<double> quality_grid,
                         std::vector<double> n_vec, double tolerance) {
    std::sort(quality_grid.begin(), quality_grid.end());
    quality_grid.erase(std::unique(quality_grid.begin(), quality_grid.end()), quality_grid.end());
    if (quality_grid.size() < 3)
        throw_error(Errc::grid_too_small,
                    "monotonicity checks need at least 3 distinct quality values");
    if (n_vec.size() != s)
        throw_error(Errc::index_out_of_range, "n_vec must have one score per slot");

    AxiomReport report;
    AxiomCheck& a1 = report.axioms[0];
    AxiomCheck& a2 = report.axioms[1];
    AxiomCheck& a3 = report.axioms[2];
    AxiomCheck& a4 = report.axioms[3];
    AxiomCheck& a5 = report.axioms[4];

    std::vector<double> q(s, 0.0);

    // A1: zero quality or zero position score silences the slot.
    for (std::size_t j = 0; j < s; ++j) {
        auto free_jq = other_slots(s, {j});
        for_each_assignment(q, free_jq, quality_grid, [&] {
            q[j] = 0.0;
            double v = f(j, q, n_vec);
            ++a1.comparisons;
            if (std::abs(v) > tolerance) {
                a1.verdict = AxiomVerdict::fail;
                add_witness(a1, {"A1", j, j, q, q, n_vec, v, 0.0, "f != 0 at zero ad quality"});
            }
        });
        std::vector<double> n_zeroed = n_vec;
        n_zeroed[j] = 0.0;
        auto free_all = other_slots(s, {});
        for_each_assignment(q, free_all, quality_grid, [&] {
            double v = f(j, q, n_zeroed);
            ++a1.comparisons;
            if (std::abs(v) > tolerance) {
                a1.verdict = AxiomVerdict::fail;
                add_witness(a1,
                            {"A1", j, j, q, q, n_zeroed, v, 0.0, "f != 0 at zero position score"});
            }
        });
    }
    finalize_strict(a1);

    // A2: strictly increasing in own quality while n_j > 0.
    for (std::size_t j = 0; j < s; ++j) {
        if (!(n_vec[j] > 0.0)) continue;
        auto free_others = other_slots(s, {j});
        for_each_assignment(q, free_others, quality_grid, [&] {
            for (std::size_t g = 0; g + 1 < quality_grid.size(); ++g) {
                q[j] = quality_grid[g];
                double lo = f(j, q, n_vec);
                std::vector<double> q_lo = q;
                q[j] = quality_grid[g + 1];
                double hi = f(j, q, n_vec);
                ++a2.comparisons;
                if (!(hi > lo - tolerance)) {
                    a2.verdict = AxiomVerdict::fail;
                    add_witness(a2, {"A2", j, j, q_lo, q, n_vec, lo, hi,
                                     "f not increasing in own quality"});
                }
            }
        });
    }
    finalize_strict(a2);

    // A3: strictly increasing in own position score while q_j > 0, sweeping
    // the slot's score over the same grid.
    for (std::size_t j = 0; j < s; ++j) {
        auto free_all = other_slots(s, {});
        for_each_assignment(q, free_all, quality_grid, [&] {
            if (!(q[j] > 0.0)) return;
            std::vector<double> n_var = n_vec;
            for (std::size_t g = 0; g + 1 < quality_grid.size(); ++g) {
                n_var[j] = quality_grid[g];
                double lo = f(j, q, n_var);
                n_var[j] = quality_grid[g + 1];
                double hi = f(j, q, n_var);
                ++a3.comparisons;
                if (!(hi > lo - tolerance)) {
                    a3.verdict = AxiomVerdict::fail;
                    add_witness(a3, {"A3", j, j, q, q, n_var, lo, hi,
                                     "f not increasing in own position score"});
                }
            }
        });
    }
    finalize_strict(a3);

    // A4: non-increasing in any other slot's quality.
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t k = 0; k < s; ++k) {
            if (k == j) continue;
            auto free_others = other_slots(s, {k});
            for_each_assignment(q, free_others, quality_grid, [&] {
                for (std::size_t g = 0; g + 1 < quality_grid.size(); ++g) {
                    q[k] = quality_grid[g];
                    double lo = f(j, q, n_vec);
                    std::vector<double> q_lo = q;
                    q[k] = quality_grid[g + 1];
                    double hi = f(j, q, n_vec);
                    ++a4.comparisons;
                    if (hi > lo + tolerance) {
                        a4.verdict = AxiomVerdict::fail;
                        add_witness(a4, {"A4", j, k, q_lo, q, n_vec, lo, hi,
                                         "f increases in another slot's quality"});
                    } else if (hi < lo - tolerance) {
                        ++a4.strict;
                    }
                }
            });
        }
    }
    finalize_weak(a4);

    // A5: perturbing a higher-score position moves the other slots' rates at
    // least as much as the same perturbation in a lower-score position.
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t k = 0; k < s; ++k) {
            if (i == k || !(n_vec[i] > n_vec[k])) continue;
            auto free_others = other_slots(s, {i, k});
            for_each_assignment(q, free_others, quality_grid, [&] {
                for (double q_star : quality_grid) {
                    for (double q_hat : quality_grid) {
                        if (q_hat == q_star) continue;
                        q[i] = q_star;
                        q[k] = q_star;
                        std::vector<double> base_q = q;
                        for (std::size_t j = 0; j < s; ++j) {
                            if (j == i || j == k) continue;
                            double base = f(j, base_q, n_vec);
                            q[i] = q_hat;
                            q[k] = q_star;
                            double moved_high = f(j, q, n_vec);
                            q[i] = q_star;
                            q[k] = q_hat;
                            double moved_low = f(j, q, n_vec);
                            q[k] = q_star;
                            double delta_high = std::abs(moved_high - base);
                            double delta_low = std::abs(moved_low - base);
                            ++a5.comparisons;
                            if (delta_high < delta_low - tolerance) {
                                a5.verdict = AxiomVerdict::fail;
                                std::ostringstream ss;
                                ss << "perturbing slot " << i << " moved f_" << j << " by "
                                   << delta_high << " < " << delta_low << " from slot " << k;
                                add_witness(a5, {"A5", j, i, base_q, q, n_vec, delta_high,
                                                 delta_low, ss.str()});
                            } else if (delta_high > delta_low + tolerance) {
                                ++a5.strict;
                            }
                        }
                    }
                }
            });
        }
    }
    finalize_weak(a5);

    return report;
}

}  // namespace posauction
