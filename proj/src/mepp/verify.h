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

#ifndef MEPP_VERIFY_H
#define MEPP_VERIFY_H

#include <cstdint>
#include <string>
#include <vector>

#include "mepp/montecarlo.h"

namespace mepp {

struct VerifyConfig {
    uint64_t trials = 100000;  // per Monte Carlo scenario
    uint64_t seed = 0;
    unsigned cases = 100;     // random three-party ensembles
    unsigned n4_cases = 25;   // random four-party ensembles (normal round only)
    double tolerance = 1e-10;
    double max_z = 4;
    unsigned threads = 1;
};

/// One closed-form operation evaluated against its exact circuit.
struct OracleCheck {
    std::string operation;
    std::string case_name;
    double max_error;  // largest difference in kept probability or output distribution
    bool pass;
};

struct MonteCarloCheck {
    std::string case_name;
    TrialConfig config;
    TrialSummary summary;
    Comparison comparison;
};

struct VerifyReport {
    std::vector<OracleCheck> oracle;
    std::vector<MonteCarloCheck> monte_carlo;
    double seconds = 0;

    bool pass() const;
    /// Human-readable summary listing every failing case.
    std::string text() const;
    /// `section,case,statistic,estimate,predicted,std_error,z,pass` rows.
    std::string csv() const;
};

/// Compares every ensemble operation with its circuit on random ensembles
/// drawn from `cfg.seed`.
std::vector<OracleCheck> oracle_matrix(const VerifyConfig &cfg, const CircuitSet &circuits = CircuitSet::standard());

/// The fixed list of sampled scenarios, each with `cfg.trials` trials.
std::vector<std::pair<std::string, TrialConfig>> monte_carlo_cases(const VerifyConfig &cfg);

VerifyReport run_verification(const VerifyConfig &cfg, const CircuitSet &circuits = CircuitSet::standard());

/// Uniform random point of the probability simplex with `n` entries.
std::vector<double> random_distribution(TrialRng &rng, size_t n);

}  // namespace mepp

#endif
