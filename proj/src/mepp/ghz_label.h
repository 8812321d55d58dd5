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

#ifndef MEPP_GHZ_LABEL_H
#define MEPP_GHZ_LABEL_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mepp {

/// Largest party count a label can describe (bounded by the state-vector oracle).
constexpr size_t kMaxParties = 14;

enum class Sign : uint8_t { Plus, Minus };

/// One of the 2^N GHZ basis states (|m> +- |~m>)/sqrt(2) of an N-party register.
///
/// The mask is the spin pattern of the first ket (1 = spin down). Party p is
/// bit (N-1-p) of the integer, so the text form `GHZ[3;011;+]` lists party 0
/// first. A canonical label has party 0 spin up, i.e. mask < 2^(N-1).
struct GhzLabel {
    size_t n_parties = 2;
    uint32_t mask = 0;
    Sign sign = Sign::Plus;

    bool operator==(const GhzLabel &) const = default;

    /// `GHZ[N;bits;+|-]`.
    std::string str() const;
    static GhzLabel parse(std::string_view text);
};

/// A label together with the overall -1 that complementing a minus-sector ket
/// pattern introduces.
struct SignedLabel {
    GhzLabel label;
    bool negated = false;

    bool operator==(const SignedLabel &) const = default;
};

/// Set of parties whose spin is bit-flipped relative to the error-free state.
struct ErrorPattern {
    size_t n_parties = 2;
    std::set<size_t> flipped;
};

/// Brings an arbitrary (mask, sign) to canonical form. Complementing the mask
/// of a minus-sector state negates it; that is reported in `negated`.
SignedLabel canonicalize(size_t n_parties, uint32_t mask, Sign sign);

/// Label reached by applying the error pattern's bit flips to GHZ[N;0..0;sign].
GhzLabel label_from_error(const ErrorPattern &pattern, Sign sign = Sign::Plus);

/// Canonical error pattern of a label: the flipped set that never contains party 0.
ErrorPattern error_of(const GhzLabel &label);

/// Bit flip on one party followed by canonicalization. Involutive.
GhzLabel apply_flip(const GhzLabel &label, size_t party);
SignedLabel apply_flip(const SignedLabel &label, size_t party);

/// Position of a label inside its sign sector, as used by ensemble probability
/// vectors: the flipped-party bitset (bit p = party p) of the representative
/// whose last party is unflipped. For N = 3 this is 0..3 = no error, flip on
/// A, flip on B, flip on C.
size_t sector_index(const GhzLabel &label);

/// Inverse of `sector_index`.
GhzLabel label_at(size_t n_parties, size_t index, Sign sign = Sign::Plus);

/// All 2^N labels: the plus sector in `sector_index` order, then the minus sector.
std::vector<GhzLabel> all_labels(size_t n_parties);

/// A two-party subsystem of a three-party register.
enum class PairLabel : uint8_t { AB, AC, BC };

constexpr std::array<PairLabel, 3> kAllPairs{PairLabel::AB, PairLabel::AC, PairLabel::BC};

/// Parties of a pair in ascending order (A = 0, B = 1, C = 2).
std::array<size_t, 2> parties_of(PairLabel pair);
PairLabel pair_of(size_t a, size_t b);
std::string_view name(PairLabel pair);

/// Number of labels in one sign sector, 2^(N-1).
inline size_t sector_size(size_t n_parties) {
    return size_t{1} << (n_parties - 1);
}

}  // namespace mepp

#endif
