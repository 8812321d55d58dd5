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

#include "mepp/pure_state.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mepp {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_size(size_t num_qubits) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw std::length_error("state needs 1.." + std::to_string(kMaxQubits) + " qubits, got " +
                                std::to_string(num_qubits));
    }
}

}  // namespace

PureState::PureState(size_t num_qubits) : num_qubits_(num_qubits) {
    check_size(num_qubits);
    amplitudes_.assign(size_t{1} << num_qubits, Amplitude{0});
    amplitudes_[0] = 1;
}

PureState::PureState(size_t num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    check_size(num_qubits);
    if (amplitudes_.size() != size_t{1} << num_qubits) {
        throw std::invalid_argument("amplitude vector has " + std::to_string(amplitudes_.size()) +
                                    " entries for " + std::to_string(num_qubits) + " qubits");
    }
}

PureState PureState::basis(size_t num_qubits, uint64_t index) {
    PureState s(num_qubits);
    if (index >= s.dim()) {
        throw std::out_of_range("basis index out of range");
    }
    s.amplitudes_[0] = 0;
    s.amplitudes_[index] = 1;
    return s;
}

double PureState::norm_squared() const {
    double t = 0;
    for (const auto &a : amplitudes_) {
        t += std::norm(a);
    }
    return t;
}

void PureState::normalize() {
    double n2 = norm_squared();
    if (n2 <= kZeroBranch) {
        throw std::domain_error("cannot normalize a zero state");
    }
    double scale = 1 / std::sqrt(n2);
    for (auto &a : amplitudes_) {
        a *= scale;
    }
}

void PureState::check_qubit(size_t qubit) const {
    if (qubit >= num_qubits_) {
        throw std::out_of_range("qubit " + std::to_string(qubit) + " of a " + std::to_string(num_qubits_) +
                                "-qubit state");
    }
}

void PureState::h(size_t qubit) {
    check_qubit(qubit);
    uint64_t b = qubit_bit(qubit);
    for (uint64_t k = 0; k < amplitudes_.size(); k++) {
        if (k & b) {
            continue;
        }
        Amplitude up = amplitudes_[k];
        Amplitude down = amplitudes_[k | b];
        amplitudes_[k] = (up + down) * kInvSqrt2;
        amplitudes_[k | b] = (up - down) * kInvSqrt2;
    }
}

void PureState::x(size_t qubit) {
    check_qubit(qubit);
    uint64_t b = qubit_bit(qubit);
    for (uint64_t k = 0; k < amplitudes_.size(); k++) {
        if (!(k & b)) {
            std::swap(amplitudes_[k], amplitudes_[k | b]);
        }
    }
}

void PureState::z(size_t qubit) {
    check_qubit(qubit);
    uint64_t b = qubit_bit(qubit);
    for (uint64_t k = 0; k < amplitudes_.size(); k++) {
        if (k & b) {
            amplitudes_[k] = -amplitudes_[k];
        }
    }
}

PureState make_ghz(size_t num_qubits, const GhzLabel &label) {
    if (label.n_parties != num_qubits) {
        throw std::invalid_argument("label " + label.str() + " does not describe " + std::to_string(num_qubits) +
                                    " qubits");
    }
    PureState s(num_qubits);
    auto canon = canonicalize(label.n_parties, label.mask, label.sign).label;
    uint64_t m = canon.mask;
    uint64_t mbar = m ^ (s.dim() - 1);
    std::vector<Amplitude> amps(s.dim(), 0);
    amps[m] = kInvSqrt2;
    amps[mbar] = canon.sign == Sign::Plus ? kInvSqrt2 : -kInvSqrt2;
    return PureState(num_qubits, std::move(amps));
}

PureState apply_h(PureState state, size_t qubit) {
    state.h(qubit);
    return state;
}

PureState apply_x(PureState state, size_t qubit) {
    state.x(qubit);
    return state;
}

PureState apply_z(PureState state, size_t qubit) {
    state.z(qubit);
    return state;
}

PureState tensor(const PureState &a, const PureState &b) {
    size_t n = a.num_qubits() + b.num_qubits();
    check_size(n);
    std::vector<Amplitude> amps(size_t{1} << n);
    for (uint64_t i = 0; i < a.dim(); i++) {
        for (uint64_t j = 0; j < b.dim(); j++) {
            amps[(i << b.num_qubits()) | j] = a[i] * b[j];
        }
    }
    return PureState(n, std::move(amps));
}

PureState reduce_to(const PureState &state, std::span<const size_t> keep) {
    size_t n = state.num_qubits();
    std::vector<bool> kept(n, false);
    for (size_t q : keep) {
        if (q >= n || kept[q]) {
            throw std::invalid_argument("reduce_to: bad or repeated qubit index");
        }
        kept[q] = true;
    }
    uint64_t dropped_mask = 0;
    for (size_t q = 0; q < n; q++) {
        if (!kept[q]) {
            dropped_mask |= state.qubit_bit(q);
        }
    }
    // The dropped qubits must share a single assignment over the support.
    std::optional<uint64_t> assignment;
    for (uint64_t k = 0; k < state.dim(); k++) {
        if (std::norm(state[k]) <= kZeroBranch) {
            continue;
        }
        uint64_t a = k & dropped_mask;
        if (assignment && *assignment != a) {
            throw std::invalid_argument("reduce_to: dropped qubits are entangled with the kept ones");
        }
        assignment = a;
    }
    if (!assignment) {
        throw std::domain_error("reduce_to: zero state");
    }
    size_t m = keep.size();
    std::vector<Amplitude> amps(size_t{1} << m, 0);
    for (uint64_t k = 0; k < state.dim(); k++) {
        if ((k & dropped_mask) != *assignment) {
            continue;
        }
        uint64_t out = 0;
        for (size_t i = 0; i < m; i++) {
            if (k & state.qubit_bit(keep[i])) {
                out |= uint64_t{1} << (m - 1 - i);
            }
        }
        amps[out] = state[k];
    }
    return PureState(m, std::move(amps));
}

Amplitude inner(const PureState &a, const PureState &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner product of states with different sizes");
    }
    Amplitude t = 0;
    for (uint64_t k = 0; k < a.dim(); k++) {
        t += std::conj(a[k]) * b[k];
    }
    return t;
}

double distance(const PureState &a, const PureState &b) {
    if (a.num_qubits() != b.num_qubits()) {
        return INFINITY;
    }
    double d = 0;
    for (uint64_t k = 0; k < a.dim(); k++) {
        d = std::max(d, std::abs(a[k] - b[k]));
    }
    return d;
}

std::array<PcdOutcome, 2> pcd(const PureState &state, size_t qa, size_t qb) {
    if (qa == qb) {
        throw std::invalid_argument("parity check needs two distinct qubits");
    }
    if (qa >= state.num_qubits() || qb >= state.num_qubits()) {
        throw std::out_of_range("parity check qubit out of range");
    }
    double total = state.norm_squared();
    uint64_t ba = state.qubit_bit(qa);
    uint64_t bb = state.qubit_bit(qb);
    std::array<PcdOutcome, 2> out{PcdOutcome{Parity::Even, 1, 0, std::nullopt},
                                  PcdOutcome{Parity::Odd, 0, 0, std::nullopt}};
    for (size_t branch = 0; branch < 2; branch++) {
        PureState s = state;
        double kept = s.project([&](uint64_t k) { return (bool(k & ba) != bool(k & bb)) == (branch == 1); });
        double p = kept / total;
        if (p > kZeroBranch) {
            s.normalize();
            out[branch].probability = p;
            out[branch].post_state = std::move(s);
        }
    }
    return out;
}

std::array<ZOutcome, 2> measure_z(const PureState &state, size_t qubit) {
    if (qubit >= state.num_qubits()) {
        throw std::out_of_range("measured qubit out of range");
    }
    double total = state.norm_squared();
    uint64_t b = state.qubit_bit(qubit);
    std::array<ZOutcome, 2> out{ZOutcome{Spin::Up, 0, std::nullopt}, ZOutcome{Spin::Down, 0, std::nullopt}};
    for (size_t branch = 0; branch < 2; branch++) {
        PureState s = state;
        double kept = s.project([&](uint64_t k) { return bool(k & b) == (branch == 1); });
        double p = kept / total;
        if (p > kZeroBranch) {
            s.normalize();
            out[branch].probability = p;
            out[branch].post_state = std::move(s);
        }
    }
    return out;
}

std::string bitstring(uint64_t index, size_t num_qubits) {
    std::string s(num_qubits, '0');
    for (size_t q = 0; q < num_qubits; q++) {
        if (index >> (num_qubits - 1 - q) & 1) {
            s[q] = '1';
        }
    }
    return s;
}

std::string dump(const PureState &state) {
    std::string out;
    char buf[96];
    for (uint64_t k = 0; k < state.dim(); k++) {
        if (std::abs(state[k]) < 1e-14) {
            continue;
        }
        // Adding 0.0 turns -0 into 0.
        std::snprintf(buf, sizeof(buf), "\t%.12g\t%.12g\n", state[k].real() + 0.0, state[k].imag() + 0.0);
        out += bitstring(k, state.num_qubits());
        out += buf;
    }
    return out;
}

}  // namespace mepp
