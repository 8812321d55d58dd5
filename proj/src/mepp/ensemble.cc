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

#include "mepp/ensemble.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mepp {

namespace {

void check_probability(double p, const char *what) {
    if (!(p >= 0 && p <= 1)) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

// x^(2^n) / (x^(2^n) + y^(2^n)) without overflow or underflow of the powers.
double squared_ratio(double x, double y, unsigned n) {
    if (x == 0 && y == 0) {
        throw std::domain_error("degenerate pair ensemble");
    }
    double e = std::ldexp(1.0, int(n));
    if (x >= y) {
        return 1 / (1 + std::pow(y / x, e));
    }
    double r = std::pow(x / y, e);
    return r / (1 + r);
}

}  // namespace

GhzEnsemble::GhzEnsemble(size_t n_parties, std::vector<double> probs)
    : n_parties_(n_parties), probs_(std::move(probs)) {
    if (n_parties < 2 || n_parties > kMaxParties) {
        throw std::invalid_argument("ensemble needs 2.." + std::to_string(kMaxParties) + " parties");
    }
    if (probs_.size() != sector_size(n_parties)) {
        throw std::invalid_argument("ensemble of " + std::to_string(n_parties) + " parties needs " +
                                    std::to_string(sector_size(n_parties)) + " probabilities");
    }
    double total = 0;
    for (double p : probs_) {
        if (!(p >= 0)) {
            throw std::invalid_argument("ensemble probabilities must be non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1) > kNormTolerance) {
        throw std::invalid_argument("ensemble probabilities sum to " + std::to_string(total));
    }
}

double HarvestSet::total_weight() const {
    return pairs[0].weight + pairs[1].weight + pairs[2].weight;
}

GhzEnsemble symmetric_ensemble(double f0, size_t n_parties) {
    check_probability(f0, "F0");
    size_t m = sector_size(n_parties);
    std::vector<double> probs(m, (1 - f0) / double(m - 1));
    probs[0] = f0;
    return GhzEnsemble(n_parties, std::move(probs));
}

RoundOutcome normal_round(const GhzEnsemble &e) {
    double kept = 0;
    for (double p : e.probs()) {
        kept += p * p;
    }
    if (kept <= 0) {
        throw std::domain_error("degenerate ensemble");
    }
    std::vector<double> out;
    out.reserve(e.probs().size());
    for (double p : e.probs()) {
        out.push_back(p * p / kept);
    }
    // Re-sum so the result passes the unit-sum check exactly.
    double t = std::accumulate(out.begin(), out.end(), 0.0);
    for (double &p : out) {
        p /= t;
    }
    return {kept, GhzEnsemble(e.n_parties(), std::move(out))};
}

double gain_threshold(double f1, double f2) {
    if (!(f1 >= 0 && f2 >= 0 && f1 + f2 <= 1 + kNormTolerance)) {
        throw std::domain_error("gain threshold needs F1, F2 >= 0 with F1 + F2 <= 1");
    }
    double disc = 1 + 4 * (f1 + f2) - 12 * (f1 * f1 + f2 * f2) - 8 * f1 * f2;
    if (disc < 0) {
        throw std::domain_error("no gain threshold: negative discriminant");
    }
    return 0.25 * (3 - 2 * f1 - 2 * f2 - std::sqrt(disc));
}

HarvestSet cross_distill(const GhzEnsemble &e) {
    if (e.n_parties() != 3) {
        throw std::invalid_argument("cross-combination distillation is defined for three parties");
    }
    // Pair left over when the error sits on the third party, and the two-error
    // item that leaves the same pair in psi+.
    auto make = [&](PairLabel pair, size_t good, size_t bad_a, size_t bad_b) {
        double phi = 2 * e[0] * e[good];
        double psi = 2 * e[bad_a] * e[bad_b];
        PairHarvest h{{pair, 0, 0}, phi + psi};
        if (h.weight > 0) {
            h.state.f0 = phi / h.weight;
            h.state.f1 = psi / h.weight;
        }
        return h;
    };
    return {{make(PairLabel::AB, 3, 1, 2), make(PairLabel::AC, 2, 1, 3), make(PairLabel::BC, 1, 2, 3)}};
}

bool subsystem_gain_ok(double f0, double fi, double fj, double fk) {
    if (fi == 0) {
        throw std::domain_error("gain condition undefined for Fi = 0");
    }
    return f0 < 1 - fj * fk / fi;
}

PairOutcome pair_round(const PairEnsemble &pe) {
    double s = pe.f0 * pe.f0 + pe.f1 * pe.f1;
    if (s <= 0) {
        throw std::domain_error("degenerate pair ensemble");
    }
    return {s, {pe.pair, pe.f0 * pe.f0 / s, pe.f1 * pe.f1 / s}};
}

PairEnsemble pair_round_n(const PairEnsemble &pe, unsigned n) {
    if (n == 0) {
        return pe;
    }
    double f = squared_ratio(pe.f0, pe.f1, n);
    return {pe.pair, f, 1 - f};
}

GhzEnsemble link(const PairEnsemble &first, const PairEnsemble &second) {
    if (first.pair == second.pair) {
        throw std::invalid_argument("pairs " + std::string(name(first.pair)) + " and " +
                                    std::string(name(second.pair)) + " are not linkable");
    }
    auto pa = parties_of(first.pair);
    auto pb = parties_of(second.pair);
    size_t shared = (pa[0] == pb[0] || pa[0] == pb[1]) ? pa[0] : pa[1];
    size_t outer1 = pa[0] == shared ? pa[1] : pa[0];
    size_t outer2 = pb[0] == shared ? pb[1] : pb[0];

    std::vector<double> probs(4, 0);
    probs[sector_index(label_from_error({3, {}}))] += first.f0 * second.f0;
    probs[sector_index(label_from_error({3, {outer1}}))] += first.f1 * second.f0;
    probs[sector_index(label_from_error({3, {outer2}}))] += first.f0 * second.f1;
    probs[sector_index(label_from_error({3, {outer1, outer2}}))] += first.f1 * second.f1;
    return GhzEnsemble(3, std::move(probs));
}

double link_fidelity_closed(double f0, unsigned n) {
    check_probability(f0, "F0");
    double f1 = (1 - f0) / 3;
    double pair = squared_ratio(f0, f1, n);
    return pair * pair;
}

SymmetricCurves symmetric_curves(double f0) {
    check_probability(f0, "F0");
    double f0sq = f0 * f0;
    SymmetricCurves c{};
    c.e_n = (1 - 2 * f0 + 4 * f0sq) / 3;
    c.p_3to2 = (2 + 2 * f0 - 4 * f0sq) / 3;
    c.e_2to3 = (1 + f0 - 2 * f0sq) / 3;
    c.e_o = (2 - f0 + 2 * f0sq) / 3;
    c.f_n = 3 * f0sq / (1 - 2 * f0 + 4 * f0sq);
    c.f_2 = 3 * f0 / (1 + 2 * f0);
    c.f_2to3 = 9 * f0sq / (1 + 4 * f0 + 4 * f0sq);
    return c;
}

}  // namespace mepp
