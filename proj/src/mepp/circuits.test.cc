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

#include "gtest/gtest.h"

using namespace mepp;

namespace {

WeightedMixture ghz3(size_t index) {
    return WeightedMixture::pure(make_ghz(3, label_at(3, index)));
}

WeightedMixture bell(size_t index) {
    return WeightedMixture::pure(make_ghz(2, label_at(2, index)));
}

void expect_pure_label(const WeightedMixture &m, size_t index) {
    auto d = decompose(m);
    for (size_t i = 0; i < d.plus.size(); i++) {
        EXPECT_NEAR(d.plus[i], i == index ? 1.0 : 0.0, 1e-12) << "label " << i;
    }
    EXPECT_NEAR(d.minus_weight(), 0, 1e-12);
}

}  // namespace

TEST(normal_round_circuit, identical_pure_inputs) {
    auto r = normal_round_circuit(ghz3(0), ghz3(0));
    EXPECT_NEAR(r.kept_probability, 1, 1e-12);
    EXPECT_TRUE(r.discarded.empty());
    expect_pure_label(r.output, 0);
}

TEST(normal_round_circuit, each_parity_class_keeps_half) {
    // Trace the all-even and all-odd branches separately.
    auto input = tensor(ghz3(0), ghz3(0));
    const auto &s = input.terms()[0].state;
    double even = 1;
    double odd = 1;
    PureState se = s;
    PureState so = s;
    for (size_t p = 0; p < 3; p++) {
        auto re = pcd(se, p, 3 + p);
        even *= re[0].probability;
        if (re[0].post_state) {
            se = *re[0].post_state;
        }
        auto ro = pcd(so, p, 3 + p);
        odd *= ro[1].probability;
        if (ro[1].post_state) {
            so = *ro[1].post_state;
        }
    }
    EXPECT_NEAR(even, 0.5, 1e-12);
    EXPECT_NEAR(odd, 0.5, 1e-12);
}

TEST(normal_round_circuit, mismatched_labels_are_discarded) {
    auto r = normal_round_circuit(ghz3(0), ghz3(1));
    EXPECT_NEAR(r.kept_probability, 0, 1e-12);
    EXPECT_TRUE(r.output.empty());
    ASSERT_EQ(r.discarded.size(), 2u);
    EXPECT_EQ(r.discarded[0].parities, "EOO");
    EXPECT_NEAR(r.discarded[0].probability, 0.5, 1e-12);
    EXPECT_EQ(r.discarded[1].parities, "OEE");
}

TEST(normal_round_circuit, symmetric_half_fidelity) {
    auto e = ghz_diagonal_mixture(3, {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6});
    auto r = normal_round_circuit(e, e);
    EXPECT_NEAR(r.kept_probability, 1.0 / 3, 1e-12);
    auto d = decompose(r.output);
    EXPECT_NEAR(d.plus[0], 0.75, 1e-12);
    EXPECT_LT(d.max_off_diagonal, 1e-12);
}

TEST(normal_round_circuit, arity_errors) {
    EXPECT_THROW(normal_round_circuit(ghz3(0), 3), std::invalid_argument);
    EXPECT_THROW(normal_round_circuit(WeightedMixture(6), 3), std::invalid_argument);
    EXPECT_THROW(normal_round_circuit(tensor(ghz3(0), ghz3(0)), 8), std::invalid_argument);
}

TEST(distill_circuit, bc_pair_from_a_errors) {
    double f0 = 0.7;
    double f1 = 0.3;
    auto e = ghz_diagonal_mixture(3, {f0, f1, 0, 0});
    auto r = distill_circuit(tensor(e, e));
    const auto &bc = r.harvest[size_t(PairLabel::BC)];
    EXPECT_NEAR(bc.probability, 2 * f0 * f1, 1e-12);
    auto d = decompose(bc.state);
    EXPECT_NEAR(d.plus[0], 1, 1e-12);
    EXPECT_NEAR(r.harvest[size_t(PairLabel::AB)].probability, 0, 1e-12);
    EXPECT_NEAR(r.harvest[size_t(PairLabel::AC)].probability, 0, 1e-12);
}

TEST(distill_circuit, two_error_item_gives_psi) {
    auto r = distill_circuit(tensor(ghz3(1), ghz3(2)));
    const auto &ab = r.harvest[size_t(PairLabel::AB)];
    EXPECT_NEAR(ab.probability, 1, 1e-12);
    auto d = decompose(ab.state);
    EXPECT_NEAR(d.plus[1], 1, 1e-12);
    EXPECT_NEAR(d.minus_weight(), 0, 1e-12);
}

TEST(distill_circuit, pure_cross_item_is_deterministic) {
    auto r = distill_circuit(tensor(ghz3(0), ghz3(3)));
    const auto &ab = r.harvest[size_t(PairLabel::AB)];
    EXPECT_NEAR(ab.probability, 1, 1e-12);
    expect_pure_label(ab.state, 0);
}

TEST(distill_circuit, all_match_branch_is_rejected) {
    EnumerateBranches all;
    std::array<Parity, 3> same{Parity::Odd, Parity::Odd, Parity::Odd};
    auto s = tensor(make_ghz(3, label_at(3, 0)), make_ghz(3, label_at(3, 0)));
    EXPECT_THROW(distill_branch(s, same, all), std::invalid_argument);
}

TEST(pair_round_circuit, examples) {
    auto pure = pair_round_circuit(tensor(bell(0), bell(0)));
    EXPECT_NEAR(pure.kept_probability, 1, 1e-12);
    expect_pure_label(pure.output, 0);

    auto e = ghz_diagonal_mixture(2, {0.6, 0.4});
    auto r = pair_round_circuit(tensor(e, e));
    EXPECT_NEAR(r.kept_probability, 0.52, 1e-12);
    auto d = decompose(r.output);
    EXPECT_NEAR(d.plus[0], 0.36 / 0.52, 1e-12);
    EXPECT_NEAR(d.plus[1], 0.16 / 0.52, 1e-12);

    EXPECT_NEAR(pair_round_circuit(tensor(bell(0), bell(1))).kept_probability, 0, 1e-12);
    EXPECT_THROW(pair_round_circuit(bell(0)), std::invalid_argument);
}

TEST(link_circuit, pure_inputs) {
    auto r = link_circuit(tensor(bell(0), bell(0)));
    EXPECT_NEAR(r.success_probability, 1, 1e-12);
    expect_pure_label(r.output, 0);
    expect_pure_label(link_circuit(tensor(bell(1), bell(0))).output, 1);
    expect_pure_label(link_circuit(tensor(bell(1), bell(1))).output, 2);
    expect_pure_label(link_circuit(tensor(bell(0), bell(1))).output, 3);
}

TEST(link_circuit, labelled_pairs_place_parties) {
    // psi+ on AB flips A or B; linking with phi+ on AC must give the A/B flip class.
    auto r = link_circuit(bell(1), PairLabel::AB, bell(0), PairLabel::AC);
    EXPECT_NEAR(r.success_probability, 1, 1e-12);
    expect_pure_label(r.output, 2);  // outer party of AB around shared A is B
    auto s = link_circuit(bell(0), PairLabel::AC, bell(1), PairLabel::BC);
    expect_pure_label(s.output, 2);  // outer party of BC around shared C is B
    EXPECT_THROW(link_circuit(bell(0), PairLabel::AB, bell(0), PairLabel::AB), std::invalid_argument);
}

TEST(link_circuit, mixed_inputs_trace_preserving) {
    auto a = ghz_diagonal_mixture(2, {0.9, 0.1});
    auto b = ghz_diagonal_mixture(2, {0.8, 0.2});
    auto r = link_circuit(tensor(a, b));
    EXPECT_NEAR(r.success_probability, 1, 1e-12);
    auto d = decompose(r.output);
    EXPECT_NEAR(d.plus[0], 0.72, 1e-12);
    EXPECT_NEAR(d.plus[1], 0.08, 1e-12);
    EXPECT_NEAR(d.plus[2], 0.02, 1e-12);
    EXPECT_NEAR(d.plus[3], 0.18, 1e-12);
    EXPECT_LT(d.max_off_diagonal, 1e-12);
}
