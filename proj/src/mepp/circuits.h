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

#ifndef MEPP_CIRCUITS_H
#define MEPP_CIRCUITS_H

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mepp/mixture.h"

namespace mepp {

/// Decides which measurement branches a circuit follows.
///
/// `follow` receives the branch probabilities of one measurement (summing to
/// one) and returns the branches to continue, each with the factor the
/// trajectory weight is multiplied by. Only branches with nonzero probability
/// may be returned.
class BranchPolicy {
   public:
    virtual ~BranchPolicy() = default;
    virtual std::vector<std::pair<size_t, double>> follow(std::span<const double> probabilities) = 0;
};

/// Follows every possible branch, weighted by its probability: the exact evolution.
class EnumerateBranches final : public BranchPolicy {
   public:
    std::vector<std::pair<size_t, double>> follow(std::span<const double> probabilities) override;
};

struct DiscardEntry {
    std::string parities;  // one 'E' / 'O' per party
    double probability;
};

/// Outcome of a post-selected purification round.
struct RoundResult {
    double kept_probability = 0;
    WeightedMixture output;  // normalized; empty when nothing was kept
    std::vector<DiscardEntry> discarded;
};

/// Two-party state harvested from cross-combination items.
struct Harvest {
    PairLabel pair;
    double probability = 0;  // relative to the whole input
    WeightedMixture state;   // normalized; empty when probability is 0
};

struct DistillResult {
    std::array<Harvest, 3> harvest;  // AB, AC, BC
    double total_probability() const;
};

/// Both uses of one first round: same-parity branches purified, mismatched
/// branches distilled into pairs.
struct RecyclingRoundResult {
    RoundResult normal;
    DistillResult distill;
};

struct LinkResult {
    double success_probability = 0;
    WeightedMixture output;  // three qubits A B C, normalized
};

struct PairTrajectory {
    double weight;
    PairLabel pair;
    PureState state;
};

/// One round of the normal multipartite purification on two N-party copies.
///
/// Input qubits are party-major per copy: A1 B1 ... A2 B2 ... Each party checks
/// the parity of its two electrons; only the all-even and all-odd patterns are
/// kept. The odd branch flips every second-copy electron, then the second
/// copy is rotated by H and read out in Z; an odd number of spin-down results
/// is undone by Z on the first electron of party 0.
RoundResult normal_round_circuit(const WeightedMixture &input, size_t n_parties);
RoundResult normal_round_circuit(const WeightedMixture &input, size_t n_parties, BranchPolicy &policy);
RoundResult normal_round_circuit(const WeightedMixture &copy1, const WeightedMixture &copy2);

/// Pair recurrence round on A1 B1 A2 B2; the normal round with two parties.
RoundResult pair_round_circuit(const WeightedMixture &input);
RoundResult pair_round_circuit(const WeightedMixture &input, BranchPolicy &policy);

/// Distills a two-party state out of one mismatched-parity branch of a
/// three-party round. `after_pcd` is the 6-qubit state right after the three
/// parity checks with the given outcomes. The odd party out measures both of
/// its electrons, the others measure their second electrons, all after H;
/// an odd spin-down count is undone by Z on the surviving pair.
/// Throws std::invalid_argument when all parities agree.
std::vector<PairTrajectory> distill_branch(const PureState &after_pcd, std::span<const Parity, 3> parities,
                                           BranchPolicy &policy);

/// Harvests pairs from every cross-combination branch of a 6-qubit input.
DistillResult distill_circuit(const WeightedMixture &input);
DistillResult distill_circuit(const WeightedMixture &input, BranchPolicy &policy);

/// First round for three parties keeping both the purified and the harvested part.
RecyclingRoundResult recycling_round_circuit(const WeightedMixture &input, BranchPolicy &policy);

/// Entanglement link on qubits (outer1, shared, shared', outer2), e.g. A B B' C.
/// The shared party checks the parity of its two electrons, measures the
/// second after H, and the branches are corrected (Z on outer1 for a
/// spin-down result, X on outer2 for odd parity) so that all of them are
/// kept. Output qubits are (outer1, shared, outer2).
LinkResult link_circuit(const WeightedMixture &input);
LinkResult link_circuit(const WeightedMixture &input, BranchPolicy &policy);

/// Links two pair states sharing one party; output in A B C order.
LinkResult link_circuit(const WeightedMixture &first, PairLabel first_pair, const WeightedMixture &second,
                        PairLabel second_pair);
LinkResult link_circuit(const WeightedMixture &first, PairLabel first_pair, const WeightedMixture &second,
                        PairLabel second_pair, BranchPolicy &policy);

using RawLinkCircuit = std::function<LinkResult(const WeightedMixture &, BranchPolicy &)>;

/// As above, with the 4-qubit link step supplied by the caller.
LinkResult link_circuit(const WeightedMixture &first, PairLabel first_pair, const WeightedMixture &second,
                        PairLabel second_pair, BranchPolicy &policy, const RawLinkCircuit &raw_link);

/// (shared, outer of first, outer of second); throws unless the pairs share exactly one party.
std::array<size_t, 3> link_roles(PairLabel first, PairLabel second);

/// The circuits used by the sampling and verification code. Tests swap
/// individual entries for deliberately broken versions.
struct CircuitSet {
    std::function<RoundResult(const WeightedMixture &, size_t, BranchPolicy &)> normal_round;
    std::function<RoundResult(const WeightedMixture &, BranchPolicy &)> pair_round;
    std::function<RecyclingRoundResult(const WeightedMixture &, BranchPolicy &)> recycling_round;
    RawLinkCircuit link;

    static CircuitSet standard();

    DistillResult distill(const WeightedMixture &input, BranchPolicy &policy) const;
    LinkResult link_pairs(const WeightedMixture &first, PairLabel first_pair, const WeightedMixture &second,
                          PairLabel second_pair, BranchPolicy &policy) const;
};

}  // namespace mepp

#endif
