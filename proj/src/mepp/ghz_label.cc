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

#include "mepp/ghz_label.h"

#include <stdexcept>

namespace mepp {

namespace {

void check_parties(size_t n) {
    if (n < 2 || n > kMaxParties) {
        throw std::invalid_argument("GHZ label needs 2.." + std::to_string(kMaxParties) + " parties, got " +
                                    std::to_string(n));
    }
}

uint32_t full_mask(size_t n) {
    return (uint32_t{1} << n) - 1;
}

uint32_t party_bit(size_t n, size_t party) {
    return uint32_t{1} << (n - 1 - party);
}

}  // namespace

std::string GhzLabel::str() const {
    std::string out = "GHZ[" + std::to_string(n_parties) + ";";
    for (size_t p = 0; p < n_parties; p++) {
        out += (mask & party_bit(n_parties, p)) ? '1' : '0';
    }
    out += sign == Sign::Plus ? ";+]" : ";-]";
    return out;
}

GhzLabel GhzLabel::parse(std::string_view text) {
    auto fail = [&]() -> GhzLabel {
        throw std::invalid_argument("not a GHZ label: '" + std::string(text) + "'");
    };
    if (!text.starts_with("GHZ[") || !text.ends_with("]")) {
        return fail();
    }
    std::string_view body = text.substr(4, text.size() - 5);
    size_t a = body.find(';');
    size_t b = body.rfind(';');
    if (a == std::string_view::npos || a == b) {
        return fail();
    }
    std::string_view n_text = body.substr(0, a);
    std::string_view bits = body.substr(a + 1, b - a - 1);
    std::string_view sign_text = body.substr(b + 1);
    size_t n = 0;
    for (char c : n_text) {
        if (c < '0' || c > '9') {
            return fail();
        }
        n = n * 10 + size_t(c - '0');
    }
    if (n_text.empty() || bits.size() != n || (sign_text != "+" && sign_text != "-")) {
        return fail();
    }
    check_parties(n);
    uint32_t mask = 0;
    for (size_t p = 0; p < n; p++) {
        if (bits[p] == '1') {
            mask |= party_bit(n, p);
        } else if (bits[p] != '0') {
            return fail();
        }
    }
    GhzLabel label{n, mask, sign_text == "+" ? Sign::Plus : Sign::Minus};
    if (canonicalize(n, mask, label.sign).label != label) {
        throw std::invalid_argument("GHZ label is not canonical: '" + std::string(text) + "'");
    }
    return label;
}

SignedLabel canonicalize(size_t n_parties, uint32_t mask, Sign sign) {
    check_parties(n_parties);
    mask &= full_mask(n_parties);
    if (mask & party_bit(n_parties, 0)) {
        return {{n_parties, mask ^ full_mask(n_parties), sign}, sign == Sign::Minus};
    }
    return {{n_parties, mask, sign}, false};
}

GhzLabel label_from_error(const ErrorPattern &pattern, Sign sign) {
    check_parties(pattern.n_parties);
    uint32_t mask = 0;
    for (size_t p : pattern.flipped) {
        if (p >= pattern.n_parties) {
            throw std::out_of_range("error pattern flips party " + std::to_string(p) + " of a " +
                                    std::to_string(pattern.n_parties) + "-party system");
        }
        mask |= party_bit(pattern.n_parties, p);
    }
    return canonicalize(pattern.n_parties, mask, sign).label;
}

ErrorPattern error_of(const GhzLabel &label) {
    ErrorPattern out{label.n_parties, {}};
    for (size_t p = 0; p < label.n_parties; p++) {
        if (label.mask & party_bit(label.n_parties, p)) {
            out.flipped.insert(p);
        }
    }
    return out;
}

SignedLabel apply_flip(const SignedLabel &label, size_t party) {
    const GhzLabel &l = label.label;
    if (party >= l.n_parties) {
        throw std::out_of_range("flip on party " + std::to_string(party) + " of a " +
                                std::to_string(l.n_parties) + "-party label");
    }
    SignedLabel out = canonicalize(l.n_parties, l.mask ^ party_bit(l.n_parties, party), l.sign);
    out.negated ^= label.negated;
    return out;
}

GhzLabel apply_flip(const GhzLabel &label, size_t party) {
    return apply_flip(SignedLabel{label, false}, party).label;
}

size_t sector_index(const GhzLabel &label) {
    size_t n = label.n_parties;
    uint32_t mask = label.mask;
    if (mask & party_bit(n, n - 1)) {
        mask ^= full_mask(n);
    }
    size_t index = 0;
    for (size_t p = 0; p + 1 < n; p++) {
        if (mask & party_bit(n, p)) {
            index |= size_t{1} << p;
        }
    }
    return index;
}

GhzLabel label_at(size_t n_parties, size_t index, Sign sign) {
    check_parties(n_parties);
    if (index >= sector_size(n_parties)) {
        throw std::out_of_range("sector index " + std::to_string(index) + " out of range for " +
                                std::to_string(n_parties) + " parties");
    }
    uint32_t mask = 0;
    for (size_t p = 0; p + 1 < n_parties; p++) {
        if (index & (size_t{1} << p)) {
            mask |= party_bit(n_parties, p);
        }
    }
    return canonicalize(n_parties, mask, sign).label;
}

std::vector<GhzLabel> all_labels(size_t n_parties) {
    std::vector<GhzLabel> out;
    for (Sign s : {Sign::Plus, Sign::Minus}) {
        for (size_t i = 0; i < sector_size(n_parties); i++) {
            out.push_back(label_at(n_parties, i, s));
        }
    }
    return out;
}

std::array<size_t, 2> parties_of(PairLabel pair) {
    switch (pair) {
        case PairLabel::AB:
            return {0, 1};
        case PairLabel::AC:
            return {0, 2};
        case PairLabel::BC:
            return {1, 2};
    }
    throw std::logic_error("unknown pair label");
}

PairLabel pair_of(size_t a, size_t b) {
    if (a > b) {
        std::swap(a, b);
    }
    if (a == 0 && b == 1) {
        return PairLabel::AB;
    }
    if (a == 0 && b == 2) {
        return PairLabel::AC;
    }
    if (a == 1 && b == 2) {
        return PairLabel::BC;
    }
    throw std::invalid_argument("no pair label for parties " + std::to_string(a) + "," + std::to_string(b));
}

std::string_view name(PairLabel pair) {
    switch (pair) {
        case PairLabel::AB:
            return "AB";
        case PairLabel::AC:
            return "AC";
        case PairLabel::BC:
            return "BC";
    }
    return "?";
}

}  // namespace mepp
