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

#ifndef MEPP_MIXTURE_H
#define MEPP_MIXTURE_H

#include <cstddef>
#include <vector>

#include "mepp/pure_state.h"

namespace mepp {

/// A density operator written as sum_i w_i |psi_i><psi_i|.
class WeightedMixture {
   public:
    struct Term {
        double weight;
        PureState state;
    };

    explicit WeightedMixture(size_t num_qubits) : num_qubits_(num_qubits) {
    }

    static WeightedMixture pure(PureState state);

    /// Appends a term; negative weights and size mismatches throw.
    void add(double weight, PureState state);

    size_t num_qubits() const {
        return num_qubits_;
    }
    const std::vector<Term> &terms() const {
        return terms_;
    }
    bool empty() const {
        return terms_.empty();
    }

    double total_weight() const;

    /// Copy rescaled to unit total weight; throws std::domain_error when empty.
    WeightedMixture normalized() const;

   private:
    size_t num_qubits_;
    std::vector<Term> terms_;
};

/// Same density operator with terms that are one ray (equal up to a global
/// phase) added together.
WeightedMixture merge_rays(const WeightedMixture &mixture);

/// Mixture of all products of terms, `a`'s qubits first.
WeightedMixture tensor(const WeightedMixture &a, const WeightedMixture &b);

/// Mixture sum_i probs[i] |L_i><L_i| over the plus-sector GHZ labels of n parties.
WeightedMixture ghz_diagonal_mixture(size_t n_parties, const std::vector<double> &probs);

/// Density matrix of a mixture in the GHZ basis of an n-qubit register
/// (basis order of `all_labels`).
struct GhzDecomposition {
    size_t n_parties;
    std::vector<double> plus;   // diagonal, plus sector, sector_index order
    std::vector<double> minus;  // diagonal, minus sector
    double max_off_diagonal;    // largest |rho_{LL'}|, L != L'

    double minus_weight() const;
};

GhzDecomposition decompose(const WeightedMixture &mixture);

}  // namespace mepp

#endif
