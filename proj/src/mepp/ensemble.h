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

#ifndef MEPP_ENSEMBLE_H
#define MEPP_ENSEMBLE_H

#include <array>
#include <cstddef>
#include <vector>

#include "mepp/ghz_label.h"

namespace mepp {

/// Normalization tolerance shared by the ensemble types.
constexpr double kNormTolerance = 1e-12;

/// GHZ-diagonal mixture over the plus-sector labels of N parties, in
/// `sector_index` order. probs[0] is the fidelity.
class GhzEnsemble {
   public:
    /// Validates non-negativity and unit sum.
    GhzEnsemble(size_t n_parties, std::vector<double> probs);

    size_t n_parties() const {
        return n_parties_;
    }
    const std::vector<double> &probs() const {
        return probs_;
    }
    double operator[](size_t i) const {
        return probs_[i];
    }
    double fidelity() const {
        return probs_[0];
    }

   private:
    size_t n_parties_;
    std::vector<double> probs_;
};

/// phi+ / psi+ mixture held by one pair of parties.
struct PairEnsemble {
    PairLabel pair = PairLabel::AB;
    double f0 = 1;  // weight on phi+
    double f1 = 0;  // weight on psi+

    double fidelity() const {
        return f0;
    }
};

struct PairHarvest {
    PairEnsemble state;   // normalized, or (0, 0) when nothing is harvested
    double weight = 0;    // probability per source pair of systems
};

/// Harvest of the three pairs, indexed by PairLabel.
struct HarvestSet {
    std::array<PairHarvest, 3> pairs;

    double total_weight() const;
    const PairHarvest &operator[](PairLabel p) const {
        return pairs[size_t(p)];
    }
};

struct RoundOutcome {
    double kept_prob;
    GhzEnsemble out;
};

struct PairOutcome {
    double success_prob;
    PairEnsemble out;
};

/// F0 on the error-free label, the rest spread evenly over the other
/// 2^(N-1) - 1 plus-sector labels.
GhzEnsemble symmetric_ensemble(double f0, size_t n_parties = 3);

/// Normal purification round: squares renormalized, kept with probability sum F_i^2.
RoundOutcome normal_round(const GhzEnsemble &e);

/// Smallest F0 (three parties, given F1 and F2) above which the normal round
/// raises the fidelity. Throws std::domain_error when the discriminant is negative.
double gain_threshold(double f1, double f2);

/// Pair harvest from cross-combination items of a three-party ensemble.
HarvestSet cross_distill(const GhzEnsemble &e);

/// Whether the pair distilled from an error on party i beats F0, i.e.
/// F0 < 1 - Fj Fk / Fi. Throws std::domain_error for Fi = 0.
bool subsystem_gain_ok(double f0, double fi, double fj, double fk);

/// One recurrence round on a pair ensemble.
PairOutcome pair_round(const PairEnsemble &pe);

/// n recurrence rounds in closed form: f0^(2^n) / (f0^(2^n) + f1^(2^n)).
PairEnsemble pair_round_n(const PairEnsemble &pe, unsigned n);

/// Three-party ensemble made by linking two pairs sharing one party.
/// Throws std::invalid_argument for identical pair labels.
GhzEnsemble link(const PairEnsemble &first, const PairEnsemble &second);

/// Fidelity after n pair rounds on the symmetric harvest followed by a link:
/// F0^(2^(n+1)) / (F0^(2^n) + F1^(2^n))^2 with F1 = (1 - F0) / 3.
double link_fidelity_closed(double f0, unsigned n);

/// One-round efficiency and fidelity curves under symmetric noise.
struct SymmetricCurves {
    double e_n;       // kept probability of the normal round
    double p_3to2;    // probability of a cross-combination item
    double e_2to3;    // half of p_3to2: three-party systems via link
    double e_o;       // e_n + e_2to3
    double f_n;       // fidelity after the normal round
    double f_2;       // fidelity of the harvested pairs
    double f_2to3;    // fidelity after linking unpurified pairs
};

SymmetricCurves symmetric_curves(double f0);

}  // namespace mepp

#endif
