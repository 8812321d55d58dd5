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

#include "mepp/mixture.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mepp {

WeightedMixture WeightedMixture::pure(PureState state) {
    WeightedMixture m(state.num_qubits());
    m.add(1, std::move(state));
    return m;
}

void WeightedMixture::add(double weight, PureState state) {
    if (!(weight >= 0)) {
        throw std::invalid_argument("mixture weight must be non-negative");
    }
    if (state.num_qubits() != num_qubits_) {
        throw std::invalid_argument("mixture term has " + std::to_string(state.num_qubits()) + " qubits, expected " +
                                    std::to_string(num_qubits_));
    }
    terms_.push_back({weight, std::move(state)});
}

double WeightedMixture::total_weight() const {
    double t = 0;
    for (const auto &term : terms_) {
        t += term.weight;
    }
    return t;
}

WeightedMixture WeightedMixture::normalized() const {
    double t = total_weight();
    if (t <= 0) {
        throw std::domain_error("cannot normalize an empty mixture");
    }
    WeightedMixture out(num_qubits_);
    for (const auto &term : terms_) {
        out.add(term.weight / t, term.state);
    }
    return out;
}

WeightedMixture tensor(const WeightedMixture &a, const WeightedMixture &b) {
    WeightedMixture out(a.num_qubits() + b.num_qubits());
    for (const auto &ta : a.terms()) {
        for (const auto &tb : b.terms()) {
            out.add(ta.weight * tb.weight, tensor(ta.state, tb.state));
        }
    }
    return out;
}

WeightedMixture ghz_diagonal_mixture(size_t n_parties, const std::vector<double> &probs) {
    if (probs.size() != sector_size(n_parties)) {
        throw std::invalid_argument("expected " + std::to_string(sector_size(n_parties)) + " label weights");
    }
    WeightedMixture out(n_parties);
    for (size_t i = 0; i < probs.size(); i++) {
        if (probs[i] > 0) {
            out.add(probs[i], make_ghz(n_parties, label_at(n_parties, i)));
        }
    }
    return out;
}

double GhzDecomposition::minus_weight() const {
    return std::accumulate(minus.begin(), minus.end(), 0.0);
}

GhzDecomposition decompose(const WeightedMixture &mixture) {
    size_t n = mixture.num_qubits();
    if (n < 2) {
        throw std::invalid_argument("GHZ decomposition needs at least two qubits");
    }
    auto labels = all_labels(n);
    std::vector<PureState> basis;
    basis.reserve(labels.size());
    for (const auto &l : labels) {
        basis.push_back(make_ghz(n, l));
    }
    size_t d = labels.size();
    std::vector<Amplitude> rho(d * d, 0);
    std::vector<Amplitude> c(d);
    for (const auto &term : mixture.terms()) {
        for (size_t i = 0; i < d; i++) {
            c[i] = inner(basis[i], term.state);
        }
        for (size_t i = 0; i < d; i++) {
            for (size_t j = 0; j < d; j++) {
                rho[i * d + j] += term.weight * c[i] * std::conj(c[j]);
            }
        }
    }
    GhzDecomposition out{n, {}, {}, 0};
    size_t half = d / 2;
    for (size_t i = 0; i < d; i++) {
        (i < half ? out.plus : out.minus).push_back(rho[i * d + i].real());
        for (size_t j = 0; j < d; j++) {
            if (i != j) {
                out.max_off_diagonal = std::max(out.max_off_diagonal, std::abs(rho[i * d + j]));
            }
        }
    }
    return out;
}

WeightedMixture merge_rays(const WeightedMixture &mixture) {
    std::vector<WeightedMixture::Term> merged;
    for (const auto &t : mixture.terms()) {
        auto same = std::find_if(merged.begin(), merged.end(),
                                 [&](const auto &u) { return std::norm(inner(u.state, t.state)) > 1 - 1e-12; });
        if (same == merged.end()) {
            merged.push_back(t);
        } else {
            same->weight += t.weight;
        }
    }
    WeightedMixture out(mixture.num_qubits());
    for (auto &t : merged) {
        out.add(t.weight, std::move(t.state));
    }
    return out;
}

}  // namespace mepp
