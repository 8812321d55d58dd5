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

#ifndef MEPP_MONTECARLO_H
#define MEPP_MONTECARLO_H

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mepp/circuits.h"
#include "mepp/ensemble.h"
#include "mepp/scheduler.h"

namespace mepp {

enum class Scenario { NormalRound, Distill, PairRound, Link, FullPipeline };

std::string_view scenario_name(Scenario s);
/// Throws std::invalid_argument for an unknown name.
Scenario parse_scenario(std::string_view name);

struct TrialConfig {
    Scenario scenario = Scenario::NormalRound;
    uint64_t trials = 100000;
    uint64_t seed = 0;
    GhzEnsemble ensemble = symmetric_ensemble(0.5);  // normal_round, distill
    PairEnsemble pair_a{PairLabel::AB, 0.75, 0.25};  // pair_round, link
    PairEnsemble pair_b{PairLabel::BC, 0.75, 0.25};  // link
    double f0 = 0.5;                                 // full_pipeline, symmetric noise
    YieldPolicy policy;                              // full_pipeline
    unsigned replicates = 20;                        // full_pipeline: most sub-populations
    unsigned threads = 1;

    /// Throws std::invalid_argument when the parameters do not fit the scenario.
    void validate() const;
};

/// One tallied quantity. Proportions count successes out of `denominator`
/// independent draws. Derived values combine several tallied rates and carry
/// their own delta-method standard error.
struct Statistic {
    enum class Kind { Proportion, Derived };
    std::string name;
    double estimate = 0;
    double std_error = 0;
    uint64_t denominator = 0;
    Kind kind = Kind::Proportion;
};

struct TrialSummary {
    Scenario scenario = Scenario::NormalRound;
    uint64_t trials = 0;
    uint64_t seed = 0;
    std::vector<Statistic> stats;

    /// Throws std::out_of_range for an unknown name.
    const Statistic &operator[](std::string_view name) const;
};

using Prediction = std::map<std::string, double, std::less<>>;

struct StatCheck {
    std::string name;
    double estimate;
    double predicted;
    double std_error;  // of the estimate under the prediction
    double z;
    bool pass;
};

struct Comparison {
    bool pass = true;
    double worst_z = 0;
    double max_abs_deviation = 0;
    std::vector<StatCheck> checks;
};

/// Uniform doubles in [0, 1) from the top 53 bits of a 64-bit Mersenne twister.
class TrialRng {
   public:
    /// Independent stream for (seed, stream index).
    TrialRng(uint64_t seed, uint64_t stream);
    double uniform();

   private:
    std::mt19937_64 engine_;
};

/// Samples one branch per measurement according to its probability.
class SampleBranches final : public BranchPolicy {
   public:
    explicit SampleBranches(TrialRng &rng) : rng_(rng) {
    }
    std::vector<std::pair<size_t, double>> follow(std::span<const double> probabilities) override;

   private:
    TrialRng &rng_;
};

/// Index drawn from a discrete distribution.
size_t draw_index(TrialRng &rng, std::span<const double> probs);

/// Which GHZ basis state an N-qubit pure state is: its plus-sector index,
/// `sector_size(n)` for a minus-sector state, `sector_size(n) + 1` otherwise.
size_t classify_ghz(const PureState &state);
std::string class_name(size_t n_parties, size_t cls);

/// Runs the configured circuit `trials` times with sampled inputs and branches.
///
/// full_pipeline instead follows a population of `trials` systems, split into
/// at most `replicates` independent sub-populations of at least 2000: one
/// recycling round, further normal rounds on the survivors, pair rounds on
/// each harvested label and cross-label links, all to the depths the yield
/// accounting picks. Its yields are rebuilt from the pooled kept rate of
/// every stage, each stage keeping rate/2 systems per input.
TrialSummary sample_scenario(const TrialConfig &cfg, const CircuitSet &circuits = CircuitSet::standard());

/// Closed-form values of every statistic `sample_scenario` reports.
Prediction predict(const TrialConfig &cfg);

/// Passes iff every statistic lies within `max_z` standard errors of its
/// prediction. For proportions the z-score is the normal deviate with the
/// same two-sided tail probability as the observed count under the predicted
/// binomial, which is deviation / standard error once counts are large and
/// stays calibrated for small or extreme ones. Throws
/// std::domain_error for a zero-trial summary and std::invalid_argument when a
/// statistic has no prediction.
Comparison compare_to_calculus(const TrialSummary &summary, const Prediction &prediction, double max_z = 4);

}  // namespace mepp

#endif
