// Copyright 2026 The MEPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEPP_SCHEDULER_H
#define MEPP_SCHEDULER_H

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mepp {

enum class LinkMatching { CrossLabelGreedy };

struct YieldPolicy {
    double f_thr = 0.95;
    unsigned max_rounds = 32;
    LinkMatching link_matching = LinkMatching::CrossLabelGreedy;

    void validate() const;
};

/// Expected-count bookkeeping of one pipeline stage, per initial system.
/// `consumed` counts the inputs that entered a pairwise operation; anything
/// supplied but not consumed is `leftover`.
struct LedgerStage {
    std::string name;
    double supplied = 0;
    double consumed = 0;
    double produced = 0;

    double leftover() const {
        return supplied - consumed;
    }
};

/// True when every stage consumes what it is supplied and feeds the next one exactly.
bool ledger_balanced(std::span<const LedgerStage> ledger, double tol = 0);

struct NormalYield {
    double y_normal = 0;
    unsigned rounds = 0;
    bool reachable = true;
    std::vector<double> fidelity_trace;  // F0 before the first round, then after each
    std::vector<double> kept_trace;      // kept probability of each round
    std::vector<LedgerStage> ledger;
};

struct RecyclingYield {
    double y_recycle = 0;
    unsigned rounds_pair = 0;
    bool reachable = true;
    bool harvest_empty = false;
    std::vector<double> fidelity_trace;  // pair fidelity before and after each pair round
    double link_fidelity = 0;
    std::vector<LedgerStage> ledger;
};

struct YieldReport {
    double f0 = 0;
    double y_normal = 0;
    double y_recycle = 0;
    double ratio = 0;  // NaN when y_normal is 0
    unsigned rounds_normal = 0;
    unsigned rounds_pair = 0;
    double final_fidelity_normal = 0;
    double final_fidelity_recycle = 0;
    bool normal_unreachable = false;
    bool recycle_unreachable = false;
    bool harvest_empty = false;

    /// `;`-joined flag names, empty when none apply.
    std::string flags() const;
};

/// Iterates the normal round under symmetric noise until the fidelity reaches
/// f_thr; each round keeps q/2 systems per input system.
NormalYield yield_normal(double f0, const YieldPolicy &policy = {});

/// Pairs harvested from the first round's cross items, purified to the
/// smallest depth at which the linked fidelity meets f_thr, then linked
/// across distinct pair labels.
RecyclingYield yield_recycling(double f0, const YieldPolicy &policy = {});

YieldReport yield_report(double f0, const YieldPolicy &policy = {});

std::vector<YieldReport> yield_ratio_curve(std::span<const double> f0_grid, const YieldPolicy &policy = {});

/// Links available from expected pair counts per label when same-label pairs
/// never link: min(T/2, T - max).
double link_count(const std::array<double, 3> &pairs_per_label);

/// Smallest pair-purification depth whose linked fidelity reaches f_thr.
std::optional<unsigned> min_pair_depth(double f0, const YieldPolicy &policy = {});

/// Smallest F0 (to `tol`) at which `min_pair_depth` is at most `depth`.
double pair_depth_boundary(unsigned depth, const YieldPolicy &policy = {}, double tol = 1e-10);

/// F0 where the yield ratio crosses 1 going upward in F0: the first grid
/// bracket with ratio > 1 then ratio <= 1, refined by bisection to `tol`.
std::optional<double> ratio_crossover(std::span<const YieldReport> curve, const YieldPolicy &policy = {},
                                      double tol = 1e-4);

}  // namespace mepp

#endif
