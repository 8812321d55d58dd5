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

#include "mepp/scheduler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mepp/ensemble.h"

namespace mepp {

void YieldPolicy::validate() const {
    if (!(f_thr > 0 && f_thr < 1)) {
        throw std::invalid_argument("threshold fidelity must lie in (0, 1)");
    }
}

bool ledger_balanced(std::span<const LedgerStage> ledger, double tol) {
    for (size_t i = 0; i < ledger.size(); i++) {
        if (std::abs(ledger[i].leftover()) > tol) {
            return false;
        }
        if (i > 0 && std::abs(ledger[i].supplied - ledger[i - 1].produced) > tol) {
            return false;
        }
    }
    return true;
}

std::string YieldReport::flags() const {
    std::string out;
    auto add = [&](const char *f) {
        if (!out.empty()) {
            out += ';';
        }
        out += f;
    };
    if (normal_unreachable) {
        add("unreachable_normal");
    }
    if (recycle_unreachable) {
        add("unreachable_recycle");
    }
    if (harvest_empty) {
        add("no_harvest");
    }
    return out;
}

NormalYield yield_normal(double f0, const YieldPolicy &policy) {
    policy.validate();
    NormalYield out;
    GhzEnsemble e = symmetric_ensemble(f0);
    out.fidelity_trace.push_back(e.fidelity());
    double y = 1;
    while (e.fidelity() < policy.f_thr) {
        if (out.rounds == policy.max_rounds) {
            out.reachable = false;
            break;
        }
        auto r = normal_round(e);
        if (r.out.fidelity() <= e.fidelity()) {
            // At or below the 1/4 fixed point the fidelity never grows.
            out.reachable = false;
            break;
        }
        double next = y * r.kept_prob / 2;
        out.ledger.push_back({"normal round " + std::to_string(out.rounds + 1), y, y, next});
        y = next;
        e = r.out;
        out.rounds++;
        out.kept_trace.push_back(r.kept_prob);
        out.fidelity_trace.push_back(e.fidelity());
    }
    out.y_normal = out.reachable ? y : 0;
    return out;
}

double link_count(const std::array<double, 3> &pairs_per_label) {
    double total = pairs_per_label[0] + pairs_per_label[1] + pairs_per_label[2];
    double largest = std::max({pairs_per_label[0], pairs_per_label[1], pairs_per_label[2]});
    return std::min(total / 2, total - largest);
}

std::optional<unsigned> min_pair_depth(double f0, const YieldPolicy &policy) {
    policy.validate();
    for (unsigned n = 0; n <= policy.max_rounds; n++) {
        if (link_fidelity_closed(f0, n) >= policy.f_thr) {
            return n;
        }
    }
    return std::nullopt;
}

RecyclingYield yield_recycling(double f0, const YieldPolicy &policy) {
    policy.validate();
    RecyclingYield out;
    GhzEnsemble e = symmetric_ensemble(f0);
    HarvestSet harvest = cross_distill(e);
    // A pair of systems yields the harvest weight; per initial system, half.
    std::array<double, 3> counts{};
    for (size_t i = 0; i < 3; i++) {
        counts[i] = harvest.pairs[i].weight / 2;
    }
    double supplied_pairs = counts[0] + counts[1] + counts[2];
    out.ledger.push_back({"harvest", 1, 1, supplied_pairs});
    if (supplied_pairs <= 0) {
        out.harvest_empty = true;
        out.fidelity_trace.push_back(1);
        out.link_fidelity = 1;
        return out;
    }

    auto depth = min_pair_depth(f0, policy);
    if (!depth) {
        out.reachable = false;
        out.rounds_pair = policy.max_rounds;
        out.link_fidelity = link_fidelity_closed(f0, policy.max_rounds);
        return out;
    }
    out.rounds_pair = *depth;

    std::array<PairEnsemble, 3> states{};
    for (size_t i = 0; i < 3; i++) {
        states[i] = harvest.pairs[i].state;
    }
    out.fidelity_trace.push_back(states[0].f0);
    for (unsigned k = 0; k < *depth; k++) {
        double before = counts[0] + counts[1] + counts[2];
        for (size_t i = 0; i < 3; i++) {
            if (counts[i] <= 0) {
                continue;
            }
            auto r = pair_round(states[i]);
            counts[i] *= r.success_prob / 2;
            states[i] = r.out;
        }
        out.fidelity_trace.push_back(states[0].f0);
        out.ledger.push_back({"pair round " + std::to_string(k + 1), before, before, counts[0] + counts[1] + counts[2]});
    }

    double total = counts[0] + counts[1] + counts[2];
    double links = link_count(counts);
    out.ledger.push_back({"link", total, 2 * links, links});
    out.y_recycle = links;
    out.link_fidelity = link(states[0], states[2]).fidelity();
    return out;
}

YieldReport yield_report(double f0, const YieldPolicy &policy) {
    auto n = yield_normal(f0, policy);
    auto r = yield_recycling(f0, policy);
    YieldReport rep;
    rep.f0 = f0;
    rep.y_normal = n.y_normal;
    rep.y_recycle = r.y_recycle;
    rep.ratio = n.y_normal > 0 ? r.y_recycle / n.y_normal : std::numeric_limits<double>::quiet_NaN();
    rep.rounds_normal = n.rounds;
    rep.rounds_pair = r.rounds_pair;
    rep.final_fidelity_normal = n.fidelity_trace.back();
    rep.final_fidelity_recycle = r.link_fidelity;
    rep.normal_unreachable = !n.reachable;
    rep.recycle_unreachable = !r.reachable;
    rep.harvest_empty = r.harvest_empty;
    return rep;
}

std::vector<YieldReport> yield_ratio_curve(std::span<const double> f0_grid, const YieldPolicy &policy) {
    std::vector<YieldReport> out;
    out.reserve(f0_grid.size());
    for (double f0 : f0_grid) {
        out.push_back(yield_report(f0, policy));
    }
    return out;
}

double pair_depth_boundary(unsigned depth, const YieldPolicy &policy, double tol) {
    auto ok = [&](double f0) {
        auto d = min_pair_depth(f0, policy);
        return d && *d <= depth;
    };
    double lo = 0.25;
    double hi = 1.0;
    if (!ok(hi)) {
        throw std::domain_error("depth " + std::to_string(depth) + " never suffices");
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::optional<double> ratio_crossover(std::span<const YieldReport> curve, const YieldPolicy &policy, double tol) {
    for (size_t i = 0; i + 1 < curve.size(); i++) {
        const auto &a = curve[i];
        const auto &b = curve[i + 1];
        if (!(a.ratio > 1) || !(b.ratio <= 1)) {
            continue;
        }
        double lo = a.f0;
        double hi = b.f0;
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            (yield_report(mid, policy).ratio > 1 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    return std::nullopt;
}

}  // namespace mepp
