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

#include "mepp/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mepp {

namespace {

// Largest deviation of a circuit output from a plus-sector distribution,
// counting minus-sector weight and GHZ-basis coherences as errors.
double distribution_error(const WeightedMixture &output, const std::vector<double> &expected) {
    auto d = decompose(output);
    double err = std::max(d.minus_weight(), d.max_off_diagonal);
    for (size_t i = 0; i < expected.size(); i++) {
        err = std::max(err, std::abs(d.plus[i] - expected[i]));
    }
    return err;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string case_label(const char *kind, size_t n, unsigned k) {
    return std::string(kind) + " N=" + std::to_string(n) + " #" + std::to_string(k);
}

constexpr std::array<std::pair<PairLabel, PairLabel>, 6> kLinkOrders{{
    {PairLabel::AB, PairLabel::BC},
    {PairLabel::AB, PairLabel::AC},
    {PairLabel::AC, PairLabel::BC},
    {PairLabel::BC, PairLabel::AB},
    {PairLabel::AC, PairLabel::AB},
    {PairLabel::BC, PairLabel::AC},
}};

}  // namespace

std::vector<double> random_distribution(TrialRng &rng, size_t n) {
    std::vector<double> p(n);
    double total = 0;
    for (auto &x : p) {
        x = -std::log(1 - rng.uniform());
        total += x;
    }
    for (auto &x : p) {
        x /= total;
    }
    return p;
}

std::vector<OracleCheck> oracle_matrix(const VerifyConfig &cfg, const CircuitSet &circuits) {
    std::vector<OracleCheck> out;
    EnumerateBranches all;
    auto record = [&](std::string op, std::string name, double err) {
        out.push_back({std::move(op), std::move(name), err, err <= cfg.tolerance});
    };
    auto run_normal = [&](size_t n, unsigned k, TrialRng &rng) {
        GhzEnsemble e(n, random_distribution(rng, sector_size(n)));
        auto mix = ghz_diagonal_mixture(n, e.probs());
        auto expected = normal_round(e);
        auto got = circuits.normal_round(tensor(mix, mix), n, all);
        double err = std::abs(got.kept_probability - expected.kept_prob);
        err = std::max(err, distribution_error(got.output, expected.out.probs()));
        record("normal_round", case_label("normal_round", n, k), err);
    };

    for (unsigned k = 0; k < cfg.cases; k++) {
        TrialRng rng(cfg.seed, k);
        run_normal(3, k, rng);

        GhzEnsemble e(3, random_distribution(rng, 4));
        auto mix = ghz_diagonal_mixture(3, e.probs());
        auto harvest = cross_distill(e);
        auto got = circuits.distill(tensor(mix, mix), all);
        double err = 0;
        for (PairLabel p : kAllPairs) {
            const auto &h = got.harvest[size_t(p)];
            err = std::max(err, std::abs(h.probability - harvest[p].weight));
            if (harvest[p].weight > 0) {
                err = std::max(err, distribution_error(h.state, {harvest[p].state.f0, harvest[p].state.f1}));
            }
        }
        record("cross_distill", case_label("cross_distill", 3, k), err);

        auto pp = random_distribution(rng, 2);
        PairEnsemble pe{kAllPairs[k % 3], pp[0], pp[1]};
        auto pmix = ghz_diagonal_mixture(2, pp);
        auto pr = pair_round(pe);
        auto pgot = circuits.pair_round(tensor(pmix, pmix), all);
        err = std::max(std::abs(pgot.kept_probability - pr.success_prob),
                       distribution_error(pgot.output, {pr.out.f0, pr.out.f1}));
        record("pair_round", case_label("pair_round", 2, k), err);

        auto [first, second] = kLinkOrders[k % kLinkOrders.size()];
        auto qa = random_distribution(rng, 2);
        auto qb = random_distribution(rng, 2);
        PairEnsemble a{first, qa[0], qa[1]};
        PairEnsemble b{second, qb[0], qb[1]};
        auto lgot = circuits.link_pairs(ghz_diagonal_mixture(2, qa), first, ghz_diagonal_mixture(2, qb), second, all);
        err = std::max(std::abs(lgot.success_probability - 1), distribution_error(lgot.output, link(a, b).probs()));
        record("link", case_label("link", 3, k) + " " + std::string(name(first)) + "+" + std::string(name(second)),
               err);
    }
    for (unsigned k = 0; k < cfg.n4_cases; k++) {
        TrialRng rng(cfg.seed, uint64_t(1) << 32 | k);
        run_normal(4, k, rng);
    }
    return out;
}

std::vector<std::pair<std::string, TrialConfig>> monte_carlo_cases(const VerifyConfig &cfg) {
    std::vector<std::pair<std::string, TrialConfig>> out;
    auto add = [&](std::string name, TrialConfig c) {
        c.trials = cfg.trials;
        c.seed = cfg.seed + out.size();
        c.threads = cfg.threads;
        out.emplace_back(std::move(name), c);
    };
    TrialConfig c;
    c.scenario = Scenario::NormalRound;
    c.ensemble = symmetric_ensemble(0.5);
    add("normal_round symmetric f0=0.5", c);
    c.ensemble = GhzEnsemble(3, {0.7, 0.1, 0.15, 0.05});
    add("normal_round (0.7,0.1,0.15,0.05)", c);
    c.ensemble = symmetric_ensemble(0.7, 4);
    add("normal_round N=4 symmetric f0=0.7", c);

    c.scenario = Scenario::Distill;
    c.ensemble = symmetric_ensemble(0.5);
    add("distill symmetric f0=0.5", c);
    c.ensemble = GhzEnsemble(3, {0.55, 0.25, 0.15, 0.05});
    add("distill (0.55,0.25,0.15,0.05)", c);

    c.scenario = Scenario::PairRound;
    c.pair_a = {PairLabel::AB, 0.75, 0.25};
    add("pair_round (0.75,0.25)", c);

    c.scenario = Scenario::Link;
    c.pair_a = {PairLabel::AB, 0.9, 0.1};
    c.pair_b = {PairLabel::BC, 0.8, 0.2};
    add("link AB(0.9)+BC(0.8)", c);
    c.pair_a = {PairLabel::AC, 0.85, 0.15};
    c.pair_b = {PairLabel::AB, 0.7, 0.3};
    add("link AC(0.85)+AB(0.7)", c);

    c.scenario = Scenario::FullPipeline;
    c.f0 = 0.5;
    add("full_pipeline f0=0.5", c);
    c.f0 = 0.8;
    add("full_pipeline f0=0.8", c);
    return out;
}

VerifyReport run_verification(const VerifyConfig &cfg, const CircuitSet &circuits) {
    auto start = std::chrono::steady_clock::now();
    VerifyReport report;
    report.oracle = oracle_matrix(cfg, circuits);
    for (auto &[name, tc] : monte_carlo_cases(cfg)) {
        auto summary = sample_scenario(tc, circuits);
        auto cmp = compare_to_calculus(summary, predict(tc), cfg.max_z);
        report.monte_carlo.push_back({name, tc, std::move(summary), std::move(cmp)});
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

bool VerifyReport::pass() const {
    return std::all_of(oracle.begin(), oracle.end(), [](const auto &c) { return c.pass; }) &&
           std::all_of(monte_carlo.begin(), monte_carlo.end(), [](const auto &c) { return c.comparison.pass; });
}

std::string VerifyReport::text() const {
    std::ostringstream s;
    size_t oracle_failed = 0;
    double oracle_worst = 0;
    for (const auto &c : oracle) {
        oracle_worst = std::max(oracle_worst, c.max_error);
        if (!c.pass) {
            oracle_failed++;
            s << "FAIL oracle " << c.case_name << ": max error " << fmt(c.max_error) << "\n";
        }
    }
    s << "oracle equivalence: " << oracle.size() - oracle_failed << "/" << oracle.size()
      << " cases pass, worst error " << fmt(oracle_worst) << "\n";
    for (const auto &m : monte_carlo) {
        s << (m.comparison.pass ? "pass" : "FAIL") << " monte carlo " << m.case_name << ": " << m.summary.trials
          << " trials, worst z " << fmt(m.comparison.worst_z) << "\n";
        for (const auto &c : m.comparison.checks) {
            if (!c.pass) {
                s << "  " << c.name << ": estimate " << fmt(c.estimate) << " predicted " << fmt(c.predicted)
                  << " z " << fmt(c.z) << "\n";
            }
        }
    }
    s << (pass() ? "verification passed" : "verification FAILED") << "\n";
    return s.str();
}

std::string VerifyReport::csv() const {
    std::ostringstream s;
    s << "section,case,statistic,estimate,predicted,std_error,z,pass\n";
    for (const auto &c : oracle) {
        s << "oracle," << c.case_name << ",max_abs_error," << fmt(c.max_error) << ",0,,," << (c.pass ? 1 : 0)
          << "\n";
    }
    for (const auto &m : monte_carlo) {
        for (const auto &c : m.comparison.checks) {
            s << "monte_carlo," << m.case_name << "," << c.name << "," << fmt(c.estimate) << "," << fmt(c.predicted)
              << "," << fmt(c.std_error) << "," << fmt(c.z) << "," << (c.pass ? 1 : 0) << "\n";
        }
    }
    return s.str();
}

}  // namespace mepp
