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

#ifndef MEPP_PURE_STATE_H
#define MEPP_PURE_STATE_H

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mepp/ghz_label.h"

namespace mepp {

using Amplitude = std::complex<double>;

constexpr size_t kMaxQubits = 14;

/// Branches whose probability falls below this are reported as impossible.
constexpr double kZeroBranch = 1e-20;

/// Amplitude vector over the spin basis of n electrons (0 = up, 1 = down).
///
/// Qubit q is bit (n-1-q) of the basis index, so bitstrings read qubit 0 first.
class PureState {
   public:
    explicit PureState(size_t num_qubits);
    PureState(size_t num_qubits, std::vector<Amplitude> amplitudes);

    static PureState basis(size_t num_qubits, uint64_t index);

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t dim() const {
        return amplitudes_.size();
    }
    std::span<const Amplitude> amplitudes() const {
        return amplitudes_;
    }
    Amplitude operator[](uint64_t index) const {
        return amplitudes_[index];
    }
    uint64_t qubit_bit(size_t qubit) const {
        return uint64_t{1} << (num_qubits_ - 1 - qubit);
    }

    double norm_squared() const;
    void normalize();

    // In-place gates; the free functions below are the value-returning forms.
    void h(size_t qubit);
    void x(size_t qubit);
    void z(size_t qubit);

    /// Zeroes every amplitude the predicate rejects and returns the squared norm kept.
    template <typename Keep>
    double project(Keep keep) {
        double kept = 0;
        for (uint64_t k = 0; k < amplitudes_.size(); k++) {
            if (keep(k)) {
                kept += std::norm(amplitudes_[k]);
            } else {
                amplitudes_[k] = 0;
            }
        }
        return kept;
    }

    bool operator==(const PureState &) const = default;

   private:
    void check_qubit(size_t qubit) const;

    size_t num_qubits_;
    std::vector<Amplitude> amplitudes_;
};

PureState make_ghz(size_t num_qubits, const GhzLabel &label);

PureState apply_h(PureState state, size_t qubit);
PureState apply_x(PureState state, size_t qubit);
PureState apply_z(PureState state, size_t qubit);

/// Product state with `a`'s qubits first.
PureState tensor(const PureState &a, const PureState &b);

/// Keeps the listed qubits, in the listed order, dropping the rest. Every
/// dropped qubit must already hold a definite spin (e.g. right after a
/// Z-measurement); otherwise throws std::invalid_argument. With every qubit
/// listed this is a qubit permutation.
PureState reduce_to(const PureState &state, std::span<const size_t> keep);

Amplitude inner(const PureState &a, const PureState &b);

/// Largest amplitude-wise distance between two states.
double distance(const PureState &a, const PureState &b);

enum class Parity : uint8_t { Even, Odd };

/// One branch of a parity-check detection on two electrons.
///
/// Even parity (|uu>, |dd>) drives the charge detector to C = 1; odd parity
/// (|ud>, |du>) reads as C = 0 (the detector does not separate 0 from 2).
struct PcdOutcome {
    Parity parity;
    int charge_reading;
    double probability;
    std::optional<PureState> post_state;  // empty when the branch is impossible
};

/// Both branches {Even, Odd} of a parity check on qubits (qa, qb). Spin
/// coherence inside each parity subspace is untouched.
std::array<PcdOutcome, 2> pcd(const PureState &state, size_t qa, size_t qb);

enum class Spin : uint8_t { Up, Down };

struct ZOutcome {
    Spin outcome;
    double probability;
    std::optional<PureState> post_state;
};

/// Both branches {Up, Down} of a projective spin measurement.
std::array<ZOutcome, 2> measure_z(const PureState &state, size_t qubit);

/// Lines of `bitstring<TAB>re<TAB>im`, amplitudes below 1e-14 omitted.
std::string dump(const PureState &state);

std::string bitstring(uint64_t index, size_t num_qubits);

}  // namespace mepp

#endif
