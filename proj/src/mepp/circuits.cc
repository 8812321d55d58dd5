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

#include "mepp/circuits.h"

#include <bit>
#include <map>
#include <stdexcept>

namespace mepp {

namespace {

struct Branch {
    double weight;
    PureState state;
    uint32_t parities = 0;  // bit i: i-th parity check came out odd
    uint32_t spins = 0;     // bit i: i-th Z measurement came out down
};

std::vector<Branch> split_pcd(std::vector<Branch> in, size_t qa, size_t qb, size_t slot, BranchPolicy &policy) {
    std::vector<Branch> out;
    for (auto &b : in) {
        auto r = pcd(b.state, qa, qb);
        std::array<double, 2> probs{r[0].probability, r[1].probability};
        for (auto [i, factor] : policy.follow(probs)) {
            out.push_back({b.weight * factor, std::move(*r[i].post_state), b.parities | uint32_t(i) << slot, b.spins});
        }
    }
    return out;
}

std::vector<Branch> split_z(std::vector<Branch> in, size_t qubit, size_t slot, BranchPolicy &policy) {
    std::vector<Branch> out;
    for (auto &b : in) {
        auto r = measure_z(b.state, qubit);
        std::array<double, 2> probs{r[0].probability, r[1].probability};
        for (auto [i, factor] : policy.follow(probs)) {
            out.push_back({b.weight * factor, std::move(*r[i].post_state), b.parities, b.spins | uint32_t(i) << slot});
        }
    }
    return out;
}

std::string parity_text(uint32_t parities, size_t n) {
    std::string s(n, 'E');
    for (size_t p = 0; p < n; p++) {
        if (parities >> p & 1) {
            s[p] = 'O';
        }
    }
    return s;
}

double checked_total(const WeightedMixture &input, size_t expected_qubits, const char *what) {
    if (input.num_qubits() != expected_qubits) {
        throw std::invalid_argument(std::string(what) + " expects " + std::to_string(expected_qubits) +
                                    " qubits, got " + std::to_string(input.num_qubits()));
    }
    double total = input.total_weight();
    if (!(total > 0)) {
        throw std::invalid_argument(std::string(what) + " needs a non-empty input mixture");
    }
    return total;
}

// Kept trajectories and discard tallies accumulated over a run.
struct RoundSink {
    size_t n_parties;
    WeightedMixture kept;
    std::map<std::string, double> discarded;
    double kept_weight = 0;

    explicit RoundSink(size_t n) : n_parties(n), kept(n) {
    }

    RoundResult finish(double total) && {
        RoundResult r{kept_weight / total, WeightedMixture(n_parties), {}};
        if (kept_weight > 0) {
            r.output = kept.normalized();
        }
        for (auto &[pattern, w] : discarded) {
            r.discarded.push_back({pattern, w / total});
        }
        return r;
    }
};

// Runs the readout half of a kept same-parity branch.
void finish_kept_branch(Branch b, size_t n, BranchPolicy &policy, RoundSink &sink) {
    bool odd = b.parities != 0;
    for (size_t p = 0; p < n; p++) {
        if (odd) {
            b.state.x(n + p);
        }
        b.state.h(n + p);
    }
    std::vector<Branch> bs{std::move(b)};
    for (size_t p = 0; p < n; p++) {
        bs = split_z(std::move(bs), n + p, p, policy);
    }
    std::vector<size_t> keep(n);
    for (size_t p = 0; p < n; p++) {
        keep[p] = p;
    }
    for (auto &br : bs) {
        if (std::popcount(br.spins) % 2 == 1) {
            br.state.z(0);
        }
        sink.kept_weight += br.weight;
        sink.kept.add(br.weight, reduce_to(br.state, keep));
    }
}

std::vector<Branch> run_parity_checks(const WeightedMixture::Term &term, size_t n, BranchPolicy &policy) {
    std::vector<Branch> bs{{term.weight, term.state}};
    for (size_t p = 0; p < n; p++) {
        bs = split_pcd(std::move(bs), p, n + p, p, policy);
    }
    return bs;
}

void accumulate_harvest(std::vector<PairTrajectory> trajectories, std::array<Harvest, 3> &harvest) {
    for (auto &t : trajectories) {
        auto &h = harvest[size_t(t.pair)];
        h.probability += t.weight;
        h.state.add(t.weight, std::move(t.state));
    }
}

std::array<Harvest, 3> empty_harvest() {
    return {Harvest{PairLabel::AB, 0, WeightedMixture(2)}, Harvest{PairLabel::AC, 0, WeightedMixture(2)},
            Harvest{PairLabel::BC, 0, WeightedMixture(2)}};
}

void normalize_harvest(std::array<Harvest, 3> &harvest, double total) {
    for (auto &h : harvest) {
        if (h.probability > 0) {
            h.state = h.state.normalized();
        }
        h.probability /= total;
    }
}

}  // namespace

std::vector<std::pair<size_t, double>> EnumerateBranches::follow(std::span<const double> probabilities) {
    std::vector<std::pair<size_t, double>> out;
    for (size_t i = 0; i < probabilities.size(); i++) {
        if (probabilities[i] > 0) {
            out.emplace_back(i, probabilities[i]);
        }
    }
    return out;
}

double DistillResult::total_probability() const {
    return harvest[0].probability + harvest[1].probability + harvest[2].probability;
}

RoundResult normal_round_circuit(const WeightedMixture &input, size_t n_parties, BranchPolicy &policy) {
    if (n_parties < 2 || 2 * n_parties > kMaxQubits) {
        throw std::invalid_argument("normal round supports 2.." + std::to_string(kMaxQubits / 2) + " parties");
    }
    double total = checked_total(input, 2 * n_parties, "normal round");
    uint32_t all_odd = (uint32_t{1} << n_parties) - 1;
    RoundSink sink(n_parties);
    for (const auto &term : input.terms()) {
        for (auto &b : run_parity_checks(term, n_parties, policy)) {
            if (b.parities == 0 || b.parities == all_odd) {
                finish_kept_branch(std::move(b), n_parties, policy, sink);
            } else {
                sink.discarded[parity_text(b.parities, n_parties)] += b.weight;
            }
        }
    }
    return std::move(sink).finish(total);
}

RoundResult normal_round_circuit(const WeightedMixture &input, size_t n_parties) {
    EnumerateBranches all;
    return normal_round_circuit(input, n_parties, all);
}

RoundResult normal_round_circuit(const WeightedMixture &copy1, const WeightedMixture &copy2) {
    if (copy1.num_qubits() != copy2.num_qubits()) {
        throw std::invalid_argument("normal round copies differ in size");
    }
    return normal_round_circuit(tensor(copy1, copy2), copy1.num_qubits());
}

RoundResult pair_round_circuit(const WeightedMixture &input, BranchPolicy &policy) {
    checked_total(input, 4, "pair round");
    return normal_round_circuit(input, 2, policy);
}

RoundResult pair_round_circuit(const WeightedMixture &input) {
    EnumerateBranches all;
    return pair_round_circuit(input, all);
}

std::vector<PairTrajectory> distill_branch(const PureState &after_pcd, std::span<const Parity, 3> parities,
                                           BranchPolicy &policy) {
    if (after_pcd.num_qubits() != 6) {
        throw std::invalid_argument("distillation expects the 6-qubit register A1 B1 C1 A2 B2 C2");
    }
    bool p0 = parities[0] == Parity::Odd;
    bool p1 = parities[1] == Parity::Odd;
    bool p2 = parities[2] == Parity::Odd;
    if (p0 == p1 && p1 == p2) {
        throw std::invalid_argument("not a cross-combination item: all parities agree");
    }
    size_t odd_one = p1 == p2 ? 0 : (p0 == p2 ? 1 : 2);
    std::array<size_t, 2> others{};
    for (size_t p = 0, k = 0; p < 3; p++) {
        if (p != odd_one) {
            others[k++] = p;
        }
    }
    std::array<size_t, 4> measured{odd_one, 3 + odd_one, 3 + others[0], 3 + others[1]};

    PureState s = after_pcd;
    for (size_t q : measured) {
        s.h(q);
    }
    std::vector<Branch> bs{{1.0, std::move(s)}};
    for (size_t i = 0; i < measured.size(); i++) {
        bs = split_z(std::move(bs), measured[i], i, policy);
    }
    std::vector<PairTrajectory> out;
    for (auto &b : bs) {
        if (std::popcount(b.spins) % 2 == 1) {
            b.state.z(others[0]);
        }
        out.push_back({b.weight, pair_of(others[0], others[1]), reduce_to(b.state, others)});
    }
    return out;
}

RecyclingRoundResult recycling_round_circuit(const WeightedMixture &input, BranchPolicy &policy) {
    double total = checked_total(input, 6, "recycling round");
    RoundSink sink(3);
    auto harvest = empty_harvest();
    for (const auto &term : input.terms()) {
        for (auto &b : run_parity_checks(term, 3, policy)) {
            if (b.parities == 0 || b.parities == 7) {
                finish_kept_branch(std::move(b), 3, policy, sink);
                continue;
            }
            std::array<Parity, 3> pattern{};
            for (size_t p = 0; p < 3; p++) {
                pattern[p] = (b.parities >> p & 1) ? Parity::Odd : Parity::Even;
            }
            sink.discarded[parity_text(b.parities, 3)] += b.weight;
            auto pairs = distill_branch(b.state, pattern, policy);
            for (auto &t : pairs) {
                t.weight *= b.weight;
            }
            accumulate_harvest(std::move(pairs), harvest);
        }
    }
    normalize_harvest(harvest, total);
    return {std::move(sink).finish(total), DistillResult{std::move(harvest)}};
}

DistillResult distill_circuit(const WeightedMixture &input, BranchPolicy &policy) {
    return recycling_round_circuit(input, policy).distill;
}

DistillResult distill_circuit(const WeightedMixture &input) {
    EnumerateBranches all;
    return distill_circuit(input, all);
}

LinkResult link_circuit(const WeightedMixture &input, BranchPolicy &policy) {
    double total = checked_total(input, 4, "entanglement link");
    LinkResult result{0, WeightedMixture(3)};
    constexpr std::array<size_t, 3> keep{0, 1, 3};
    for (const auto &term : input.terms()) {
        std::vector<Branch> bs{{term.weight, term.state}};
        bs = split_pcd(std::move(bs), 1, 2, 0, policy);
        for (auto &b : bs) {
            if (b.parities) {
                b.state.x(3);
            }
            b.state.h(2);
        }
        bs = split_z(std::move(bs), 2, 0, policy);
        for (auto &b : bs) {
            if (b.spins) {
                b.state.z(0);
            }
            result.success_probability += b.weight;
            result.output.add(b.weight, reduce_to(b.state, keep));
        }
    }
    result.success_probability /= total;
    if (!result.output.empty()) {
        result.output = result.output.normalized();
    }
    return result;
}

LinkResult link_circuit(const WeightedMixture &input) {
    EnumerateBranches all;
    return link_circuit(input, all);
}

std::array<size_t, 3> link_roles(PairLabel first, PairLabel second) {
    auto a = parties_of(first);
    auto b = parties_of(second);
    for (size_t i = 0; i < 2; i++) {
        for (size_t j = 0; j < 2; j++) {
            if (a[i] == b[j] && a[1 - i] != b[1 - j]) {
                return {a[i], a[1 - i], b[1 - j]};
            }
        }
    }
    throw std::invalid_argument(std::string("pairs ") + std::string(name(first)) + " and " +
                                std::string(name(second)) + " are not linkable");
}

LinkResult link_circuit(const WeightedMixture &first, PairLabel first_pair, const WeightedMixture &second,
                        PairLabel second_pair, BranchPolicy &policy) {
    return link_circuit(first, first_pair, second, second_pair, policy,
                        [](const WeightedMixture &m, BranchPolicy &p) { return link_circuit(m, p); });
}

LinkResult link_circuit(const WeightedMixture &first, PairLabel first_pair, const WeightedMixture &second,
                        PairLabel second_pair, BranchPolicy &policy, const RawLinkCircuit &raw_link) {
    auto [shared, outer1, outer2] = link_roles(first_pair, second_pair);
    checked_total(first, 2, "entanglement link (first pair)");
    checked_total(second, 2, "entanglement link (second pair)");

    // Bring each pair into (outer1, shared) and (shared, outer2) order.
    auto reorder = [](const WeightedMixture &m, bool swap) {
        if (!swap) {
            return m;
        }
        WeightedMixture out(2);
        constexpr std::array<size_t, 2> flip{1, 0};
        for (const auto &t : m.terms()) {
            out.add(t.weight, reduce_to(t.state, flip));
        }
        return out;
    };
    auto a = reorder(first, parties_of(first_pair)[0] == shared);
    auto b = reorder(second, parties_of(second_pair)[1] == shared);
    LinkResult r = raw_link(tensor(a, b), policy);

    // Output is (outer1, shared, outer2); place each party at its own index.
    std::array<size_t, 3> role_of_party{};
    role_of_party[outer1] = 0;
    role_of_party[shared] = 1;
    role_of_party[outer2] = 2;
    WeightedMixture abc(3);
    for (const auto &t : r.output.terms()) {
        abc.add(t.weight, reduce_to(t.state, role_of_party));
    }
    r.output = std::move(abc);
    return r;
}

LinkResult link_circuit(const WeightedMixture &first, PairLabel first_pair, const WeightedMixture &second,
                        PairLabel second_pair) {
    EnumerateBranches all;
    return link_circuit(first, first_pair, second, second_pair, all);
}

CircuitSet CircuitSet::standard() {
    CircuitSet c;
    c.normal_round = [](const WeightedMixture &m, size_t n, BranchPolicy &p) { return normal_round_circuit(m, n, p); };
    c.pair_round = [](const WeightedMixture &m, BranchPolicy &p) { return pair_round_circuit(m, p); };
    c.recycling_round = [](const WeightedMixture &m, BranchPolicy &p) { return recycling_round_circuit(m, p); };
    c.link = [](const WeightedMixture &m, BranchPolicy &p) { return link_circuit(m, p); };
    return c;
}

DistillResult CircuitSet::distill(const WeightedMixture &input, BranchPolicy &policy) const {
    return recycling_round(input, policy).distill;
}

LinkResult CircuitSet::link_pairs(const WeightedMixture &first, PairLabel first_pair, const WeightedMixture &second,
                                  PairLabel second_pair, BranchPolicy &policy) const {
    return link_circuit(first, first_pair, second, second_pair, policy, link);
}

}  // namespace mepp
