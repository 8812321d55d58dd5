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

#include "mepp/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace mepp {

namespace {

// Smallest sub-population the pipeline is split into.
constexpr uint64_t kMinPopulation = 2000;

constexpr std::array<std::string_view, 5> kScenarioNames{"normal_round", "distill", "pair_round", "link",
                                                         "full_pipeline"};

// Runs fn(index) for every index in [0, count) on `threads` workers, each
// taking a contiguous block. The first exception thrown is rethrown.
template <typename Fn>
void for_each_index(uint64_t count, unsigned threads, Fn &&fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2) {
        for (uint64_t i = 0; i < count; i++) {
            fn(i, 0);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; t++) {
        uint64_t begin = count * t / threads;
        uint64_t end = count * (t + 1) / threads;
        pool.emplace_back([&, t, begin, end] {
            try {
                for (uint64_t i = begin; i < end; i++) {
                    fn(i, t);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

// GHZ basis states of n qubits, looked up by plus-sector index.
std::vector<PureState> ghz_basis(size_t n) {
    std::vector<PureState> out;
    for (size_t i = 0; i < sector_size(n); i++) {
        out.push_back(make_ghz(n, label_at(n, i)));
    }
    return out;
}

const PureState &single_state(const WeightedMixture &m) {
    if (m.terms().size() != 1) {
        throw std::logic_error("sampled trajectory is not a single pure state");
    }
    return m.terms()[0].state;
}

double proportion_error(double p, uint64_t n) {
    if (n == 0) {
        return 0;
    }
    return std::sqrt(std::max(0.0, p * (1 - p)) / double(n));
}

Statistic proportion(std::string name, uint64_t hits, uint64_t n) {
    double p = n ? double(hits) / double(n) : 0;
    return {std::move(name), p, proportion_error(p, n), n, Statistic::Kind::Proportion};
}

// A tally over (group, output class) for scenarios made of independent trials.
struct GroupTally {
    size_t groups;
    size_t classes;
    std::vector<uint64_t> counts;

    GroupTally(size_t g, size_t c) : groups(g), classes(c), counts(g * c, 0) {
    }
    void add(const GroupTally &o) {
        for (size_t i = 0; i < counts.size(); i++) {
            counts[i] += o.counts[i];
        }
    }
    uint64_t group_total(size_t g) const {
        uint64_t t = 0;
        for (size_t c = 0; c < classes; c++) {
            t += counts[g * classes + c];
        }
        return t;
    }
};

struct GroupNames {
    std::vector<std::string> rate;    // one per group
    std::vector<std::string> prefix;  // prepended to class frequency names
    size_t n_parties;                 // of the output states
};

GroupNames group_names(const TrialConfig &cfg) {
    switch (cfg.scenario) {
        case Scenario::NormalRound:
            return {{"kept_rate"}, {""}, cfg.ensemble.n_parties()};
        case Scenario::Distill: {
            GroupNames g{{}, {}, 2};
            for (PairLabel p : kAllPairs) {
                g.rate.push_back("harvest_rate " + std::string(name(p)));
                g.prefix.push_back(std::string(name(p)) + " ");
            }
            return g;
        }
        case Scenario::PairRound:
            return {{"success_rate"}, {""}, 2};
        case Scenario::Link:
            return {{"success_rate"}, {""}, 3};
        default:
            throw std::logic_error("not a per-trial scenario");
    }
}

std::string freq_name(const std::string &prefix, size_t n, size_t cls) {
    return prefix + "freq " + class_name(n, cls);
}

// (group, class) of one trial; nullopt when the trajectory was discarded.
using TrialOutcome = std::optional<std::pair<size_t, size_t>>;

TrialOutcome run_trial(const TrialConfig &cfg, const CircuitSet &circuits, const std::vector<PureState> &inputs,
                       TrialRng &rng) {
    SampleBranches policy(rng);
    switch (cfg.scenario) {
        case Scenario::NormalRound: {
            const auto &probs = cfg.ensemble.probs();
            size_t i = draw_index(rng, probs);
            size_t j = draw_index(rng, probs);
            auto r = circuits.normal_round(WeightedMixture::pure(tensor(inputs[i], inputs[j])),
                                           cfg.ensemble.n_parties(), policy);
            if (r.kept_probability <= 0) {
                return std::nullopt;
            }
            return std::pair{size_t(0), classify_ghz(single_state(r.output))};
        }
        case Scenario::Distill: {
            const auto &probs = cfg.ensemble.probs();
            size_t i = draw_index(rng, probs);
            size_t j = draw_index(rng, probs);
            auto r = circuits.distill(WeightedMixture::pure(tensor(inputs[i], inputs[j])), policy);
            for (size_t g = 0; g < 3; g++) {
                if (r.harvest[g].probability > 0) {
                    return std::pair{g, classify_ghz(single_state(r.harvest[g].state))};
                }
            }
            return std::nullopt;
        }
        case Scenario::PairRound: {
            std::array<double, 2> probs{cfg.pair_a.f0, cfg.pair_a.f1};
            size_t i = draw_index(rng, probs);
            size_t j = draw_index(rng, probs);
            auto r = circuits.pair_round(WeightedMixture::pure(tensor(inputs[i], inputs[j])), policy);
            if (r.kept_probability <= 0) {
                return std::nullopt;
            }
            return std::pair{size_t(0), classify_ghz(single_state(r.output))};
        }
        case Scenario::Link: {
            std::array<double, 2> pa{cfg.pair_a.f0, cfg.pair_a.f1};
            std::array<double, 2> pb{cfg.pair_b.f0, cfg.pair_b.f1};
            size_t i = draw_index(rng, pa);
            size_t j = draw_index(rng, pb);
            auto r = circuits.link_pairs(WeightedMixture::pure(inputs[i]), cfg.pair_a.pair,
                                         WeightedMixture::pure(inputs[j]), cfg.pair_b.pair, policy);
            if (r.success_probability <= 0) {
                return std::nullopt;
            }
            return std::pair{size_t(0), classify_ghz(single_state(r.output))};
        }
        default:
            throw std::logic_error("not a per-trial scenario");
    }
}

TrialSummary sample_independent_trials(const TrialConfig &cfg, const CircuitSet &circuits) {
    GroupNames names = group_names(cfg);
    size_t input_parties = cfg.scenario == Scenario::NormalRound || cfg.scenario == Scenario::Distill
                               ? cfg.ensemble.n_parties()
                               : 2;
    const std::vector<PureState> inputs = ghz_basis(input_parties);
    size_t classes = sector_size(names.n_parties) + 2;

    unsigned threads = std::max(1u, cfg.threads);
    std::vector<GroupTally> tallies(threads, GroupTally(names.rate.size(), classes));
    for_each_index(cfg.trials, threads, [&](uint64_t trial, size_t worker) {
        TrialRng rng(cfg.seed, trial);
        if (auto o = run_trial(cfg, circuits, inputs, rng)) {
            tallies[worker].counts[o->first * classes + o->second]++;
        }
    });
    GroupTally total(names.rate.size(), classes);
    for (const auto &t : tallies) {
        total.add(t);
    }

    TrialSummary s{cfg.scenario, cfg.trials, cfg.seed, {}};
    for (size_t g = 0; g < total.groups; g++) {
        uint64_t in_group = total.group_total(g);
        s.stats.push_back(proportion(names.rate[g], in_group, cfg.trials));
        for (size_t c = 0; c < classes; c++) {
            s.stats.push_back(
                proportion(freq_name(names.prefix[g], names.n_parties, c), total.counts[g * classes + c], in_group));
        }
    }
    return s;
}

// Pairs formed and pairs kept in one pairwise stage.
struct StageTally {
    uint64_t pairs = 0;
    uint64_t kept = 0;
};

// Integer tallies of one sub-population of the pipeline.
struct PipelineTally {
    uint64_t systems = 0;
    std::vector<StageTally> normal;                   // first round, then later normal rounds
    std::array<uint64_t, 3> harvested{};              // first-round pairs harvested per label
    std::array<std::vector<StageTally>, 3> purify{};  // pair rounds per label
    uint64_t normal_final = 0;
    uint64_t normal_final_good = 0;
    uint64_t links = 0;
    uint64_t links_good = 0;
    uint64_t outputs = 0;
    uint64_t off_support = 0;

    void add(const PipelineTally &o) {
        systems += o.systems;
        auto add_stages = [](std::vector<StageTally> &into, const std::vector<StageTally> &from) {
            into.resize(std::max(into.size(), from.size()));
            for (size_t k = 0; k < from.size(); k++) {
                into[k].pairs += from[k].pairs;
                into[k].kept += from[k].kept;
            }
        };
        add_stages(normal, o.normal);
        for (size_t g = 0; g < 3; g++) {
            harvested[g] += o.harvested[g];
            add_stages(purify[g], o.purify[g]);
        }
        normal_final += o.normal_final;
        normal_final_good += o.normal_final_good;
        links += o.links;
        links_good += o.links_good;
        outputs += o.outputs;
        off_support += o.off_support;
    }
};

// Pairs consecutive members and keeps the survivors of `round`.
template <typename Round>
std::vector<PureState> pairwise(const std::vector<PureState> &members, StageTally &tally, Round &&round) {
    std::vector<PureState> out;
    for (size_t k = 0; k + 1 < members.size(); k += 2) {
        auto r = round(WeightedMixture::pure(tensor(members[k], members[k + 1])));
        tally.pairs++;
        if (r.kept_probability > 0) {
            tally.kept++;
            out.push_back(single_state(r.output));
        }
    }
    return out;
}

PipelineTally run_population(const TrialConfig &cfg, const CircuitSet &circuits, const YieldReport &plan,
                             const std::vector<PureState> &inputs, uint64_t systems, uint64_t stream) {
    TrialRng rng(cfg.seed, stream);
    SampleBranches policy(rng);
    const auto probs = symmetric_ensemble(cfg.f0).probs();
    PipelineTally t;
    t.systems = systems;
    t.normal.resize(1);

    std::vector<PureState> normal;
    std::array<std::vector<PureState>, 3> pairs;
    for (uint64_t k = 0; k < systems / 2; k++) {
        size_t i = draw_index(rng, probs);
        size_t j = draw_index(rng, probs);
        auto r = circuits.recycling_round(WeightedMixture::pure(tensor(inputs[i], inputs[j])), policy);
        t.normal[0].pairs++;
        if (r.normal.kept_probability > 0) {
            t.normal[0].kept++;
            normal.push_back(single_state(r.normal.output));
        }
        for (size_t g = 0; g < 3; g++) {
            if (r.distill.harvest[g].probability > 0) {
                t.harvested[g]++;
                pairs[g].push_back(single_state(r.distill.harvest[g].state));
            }
        }
    }

    if (!plan.normal_unreachable && plan.rounds_normal > 0) {
        for (unsigned round = 1; round < plan.rounds_normal; round++) {
            t.normal.emplace_back();
            normal = pairwise(normal, t.normal.back(),
                              [&](const WeightedMixture &m) { return circuits.normal_round(m, 3, policy); });
        }
        for (const auto &s : normal) {
            size_t c = classify_ghz(s);
            t.normal_final++;
            t.normal_final_good += c == 0;
            t.outputs++;
            t.off_support += c >= sector_size(3);
        }
    }

    if (plan.recycle_unreachable || plan.harvest_empty) {
        return t;
    }
    for (size_t g = 0; g < 3; g++) {
        for (unsigned round = 0; round < plan.rounds_pair; round++) {
            t.purify[g].emplace_back();
            pairs[g] = pairwise(pairs[g], t.purify[g].back(),
                                [&](const WeightedMixture &m) { return circuits.pair_round(m, policy); });
        }
    }
    // Greedy cross-label matching: always link the two fullest labels.
    while (true) {
        std::array<size_t, 3> order{0, 1, 2};
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return pairs[a].size() > pairs[b].size(); });
        if (pairs[order[1]].empty()) {
            break;
        }
        size_t a = std::min(order[0], order[1]);
        size_t b = std::max(order[0], order[1]);
        auto r = circuits.link_pairs(WeightedMixture::pure(pairs[a].back()), kAllPairs[a],
                                     WeightedMixture::pure(pairs[b].back()), kAllPairs[b], policy);
        pairs[a].pop_back();
        pairs[b].pop_back();
        if (r.success_probability <= 0) {
            continue;
        }
        size_t c = classify_ghz(single_state(r.output));
        t.links++;
        t.links_good += c == 0;
        t.outputs++;
        t.off_support += c >= sector_size(3);
    }
    return t;
}

// Kept rate of a stage, and the same rate pulled slightly toward 1/2 so
// that error estimates stay positive for tiny or extreme counts.
double rate(const StageTally &s) {
    return double(s.kept) / double(s.pairs);
}
double smoothed_rate(uint64_t hits, uint64_t n) {
    return (double(hits) + 0.5) / (double(n) + 1);
}

// Survivors per input after a chain of pairwise stages, each keeping q/2 per
// input: value, smoothed value and relative variance of the smoothed value.
struct ChainEstimate {
    double value = 1;
    double smoothed = 1;
    double rel_var = 0;
    bool defined = true;
};

ChainEstimate chain(const std::vector<StageTally> &stages) {
    ChainEstimate c;
    for (const auto &s : stages) {
        if (s.pairs == 0) {
            c.defined = false;
            return c;
        }
        double q = smoothed_rate(s.kept, s.pairs);
        c.value *= rate(s) / 2;
        c.smoothed *= q / 2;
        c.rel_var += (1 - q) / (q * double(s.pairs));
    }
    return c;
}

Statistic yield_normal_stat(const PipelineTally &t, const YieldReport &plan) {
    Statistic s{"y_normal", 0, 0, t.systems, Statistic::Kind::Derived};
    if (plan.normal_unreachable) {
        return s;
    }
    if (plan.rounds_normal == 0) {
        s.estimate = 1;
        return s;
    }
    auto c = chain(t.normal);
    if (!c.defined) {
        s.denominator = 0;
        return s;
    }
    s.estimate = c.value;
    s.std_error = c.smoothed * std::sqrt(c.rel_var);
    return s;
}

Statistic yield_recycle_stat(const PipelineTally &t, const YieldReport &plan) {
    Statistic s{"y_recycle", 0, 0, t.systems, Statistic::Kind::Derived};
    if (plan.recycle_unreachable || plan.harvest_empty) {
        return s;
    }
    uint64_t n = t.normal[0].pairs;
    std::array<double, 3> count{};
    std::array<double, 3> smooth_count{};
    std::array<double, 3> p{};
    std::array<double, 3> r{};
    std::array<double, 3> r_rel_var{};
    for (size_t g = 0; g < 3; g++) {
        auto c = chain(t.purify[g]);
        if (!c.defined) {
            s.denominator = 0;
            return s;
        }
        p[g] = smoothed_rate(t.harvested[g], n);
        r[g] = c.smoothed;
        r_rel_var[g] = c.rel_var;
        count[g] = double(t.harvested[g]) / double(n) / 2 * c.value;
        smooth_count[g] = p[g] / 2 * c.smoothed;
    }
    s.estimate = link_count(count);

    // link_count is linear with these weights around the smoothed counts.
    std::array<double, 3> w{0.5, 0.5, 0.5};
    double total = smooth_count[0] + smooth_count[1] + smooth_count[2];
    size_t largest = size_t(std::max_element(smooth_count.begin(), smooth_count.end()) - smooth_count.begin());
    if (smooth_count[largest] > total / 2) {
        w = {1, 1, 1};
        w[largest] = 0;
    }
    // Multinomial harvest proportions plus independent purification chains.
    double var = 0;
    for (size_t g = 0; g < 3; g++) {
        for (size_t h = 0; h < 3; h++) {
            double cov = g == h ? p[g] * (1 - p[g]) / double(n) : -p[g] * p[h] / double(n);
            var += w[g] * w[h] * r[g] * r[h] / 4 * cov;
        }
        var += w[g] * w[g] * smooth_count[g] * smooth_count[g] * r_rel_var[g];
    }
    s.std_error = std::sqrt(std::max(0.0, var));
    return s;
}

TrialSummary sample_full_pipeline(const TrialConfig &cfg, const CircuitSet &circuits) {
    YieldReport plan = yield_report(cfg.f0, cfg.policy);
    const std::vector<PureState> inputs = ghz_basis(3);
    uint64_t parts = std::clamp<uint64_t>(cfg.trials / kMinPopulation, 1, cfg.replicates);

    std::vector<PipelineTally> tallies(parts);
    for_each_index(parts, cfg.threads, [&](uint64_t r, size_t) {
        uint64_t begin = cfg.trials * r / parts / 2;
        uint64_t end = cfg.trials * (r + 1) / parts / 2;
        tallies[r] = run_population(cfg, circuits, plan, inputs, 2 * (end - begin), r);
    });
    PipelineTally sum;
    for (const auto &t : tallies) {
        sum.add(t);
    }

    TrialSummary s{cfg.scenario, sum.systems, cfg.seed, {}};
    s.stats.push_back(proportion("first_round_kept_rate", sum.normal[0].kept, sum.normal[0].pairs));
    for (size_t g = 0; g < 3; g++) {
        s.stats.push_back(
            proportion("harvest_rate " + std::string(name(kAllPairs[g])), sum.harvested[g], sum.normal[0].pairs));
    }
    s.stats.push_back(yield_normal_stat(sum, plan));
    s.stats.push_back(yield_recycle_stat(sum, plan));
    s.stats.push_back(proportion("final_fidelity_normal", sum.normal_final_good, sum.normal_final));
    s.stats.push_back(proportion("link_fidelity", sum.links_good, sum.links));
    s.stats.push_back(proportion("off_support", sum.off_support, sum.outputs));
    return s;
}

// Probability of `hits` or a count further from the mean under Binomial(n, p),
// doubled and capped at 1.
double binomial_two_sided(uint64_t hits, uint64_t n, double p) {
    if (p <= 0 || p >= 1) {
        return double(hits) == double(n) * p ? 1 : 0;
    }
    double log_norm = std::lgamma(double(n) + 1);
    auto pmf = [&](uint64_t i) {
        return std::exp(log_norm - std::lgamma(double(i) + 1) - std::lgamma(double(n - i) + 1) +
                        double(i) * std::log(p) + double(n - i) * std::log1p(-p));
    };
    double tail = 0;
    if (double(hits) >= double(n) * p) {
        for (uint64_t i = hits; i <= n; i++) {
            double t = pmf(i);
            tail += t;
            if (t < 1e-18 * tail && double(i) > double(n) * p) {
                break;
            }
        }
    } else {
        for (uint64_t i = hits + 1; i-- > 0;) {
            double t = pmf(i);
            tail += t;
            if (t < 1e-18 * tail) {
                break;
            }
        }
    }
    return std::min(1.0, 2 * tail);
}

// Normal deviate with the given two-sided tail probability.
double equivalent_z(double two_sided) {
    if (two_sided >= 1) {
        return 0;
    }
    if (!(two_sided > std::erfc(38 / std::sqrt(2.0)))) {
        return std::numeric_limits<double>::infinity();
    }
    double lo = 0;
    double hi = 38;
    for (int i = 0; i < 100; i++) {
        double mid = (lo + hi) / 2;
        (std::erfc(mid / std::sqrt(2.0)) > two_sided ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

bool normalized_pair(const PairEnsemble &p) {
    return p.f0 >= 0 && p.f1 >= 0 && std::abs(p.f0 + p.f1 - 1) <= kNormTolerance;
}

}  // namespace

std::string_view scenario_name(Scenario s) {
    return kScenarioNames.at(size_t(s));
}

Scenario parse_scenario(std::string_view text) {
    for (size_t i = 0; i < kScenarioNames.size(); i++) {
        if (kScenarioNames[i] == text) {
            return Scenario(i);
        }
    }
    throw std::invalid_argument("unknown scenario '" + std::string(text) + "'");
}

void TrialConfig::validate() const {
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    switch (scenario) {
        case Scenario::NormalRound:
            if (2 * ensemble.n_parties() > kMaxQubits) {
                throw std::invalid_argument("normal_round sampling supports at most " +
                                            std::to_string(kMaxQubits / 2) + " parties");
            }
            break;
        case Scenario::Distill:
            if (ensemble.n_parties() != 3) {
                throw std::invalid_argument("distill needs a three-party ensemble");
            }
            break;
        case Scenario::PairRound:
            if (!normalized_pair(pair_a)) {
                throw std::invalid_argument("pair_round needs a normalized pair ensemble");
            }
            break;
        case Scenario::Link:
            if (!normalized_pair(pair_a) || !normalized_pair(pair_b)) {
                throw std::invalid_argument("link needs normalized pair ensembles");
            }
            link_roles(pair_a.pair, pair_b.pair);
            break;
        case Scenario::FullPipeline:
            if (!(f0 >= 0 && f0 <= 1)) {
                throw std::invalid_argument("full_pipeline needs f0 in [0, 1]");
            }
            if (replicates < 1) {
                throw std::invalid_argument("full_pipeline needs at least one population");
            }
            if (trials < 2) {
                throw std::invalid_argument("full_pipeline needs at least two systems");
            }
            policy.validate();
            break;
    }
}

const Statistic &TrialSummary::operator[](std::string_view name) const {
    for (const auto &s : stats) {
        if (s.name == name) {
            return s;
        }
    }
    throw std::out_of_range("no statistic named '" + std::string(name) + "'");
}

TrialRng::TrialRng(uint64_t seed, uint64_t stream) {
    std::seed_seq seq{uint32_t(seed), uint32_t(seed >> 32), uint32_t(stream), uint32_t(stream >> 32)};
    engine_.seed(seq);
}

double TrialRng::uniform() {
    return double(engine_() >> 11) * 0x1.0p-53;
}

size_t draw_index(TrialRng &rng, std::span<const double> probs) {
    double u = rng.uniform();
    double acc = 0;
    size_t last = probs.size();
    for (size_t i = 0; i < probs.size(); i++) {
        if (probs[i] <= 0) {
            continue;
        }
        acc += probs[i];
        last = i;
        if (u < acc) {
            return i;
        }
    }
    if (last == probs.size()) {
        throw std::invalid_argument("cannot draw from an all-zero distribution");
    }
    return last;  // rounding left u just above the cumulative sum
}

std::vector<std::pair<size_t, double>> SampleBranches::follow(std::span<const double> probabilities) {
    return {{draw_index(rng_, probabilities), 1.0}};
}

size_t classify_ghz(const PureState &state) {
    size_t n = state.num_qubits();
    for (const auto &label : all_labels(n)) {
        if (std::norm(inner(make_ghz(n, label), state)) > 1 - 1e-9) {
            return label.sign == Sign::Plus ? sector_index(label) : sector_size(n);
        }
    }
    return sector_size(n) + 1;
}

std::string class_name(size_t n_parties, size_t cls) {
    size_t s = sector_size(n_parties);
    if (cls < s) {
        if (n_parties == 2) {
            return cls == 0 ? "phi+" : "psi+";
        }
        return label_at(n_parties, cls).str();
    }
    return cls == s ? "minus_sector" : "off_support";
}

TrialSummary sample_scenario(const TrialConfig &cfg, const CircuitSet &circuits) {
    cfg.validate();
    if (cfg.scenario == Scenario::FullPipeline) {
        return sample_full_pipeline(cfg, circuits);
    }
    return sample_independent_trials(cfg, circuits);
}

Prediction predict(const TrialConfig &cfg) {
    cfg.validate();
    Prediction p;
    auto add_classes = [&](const std::string &prefix, size_t n, const std::vector<double> &probs) {
        for (size_t c = 0; c < probs.size(); c++) {
            p[freq_name(prefix, n, c)] = probs[c];
        }
        p[freq_name(prefix, n, sector_size(n))] = 0;
        p[freq_name(prefix, n, sector_size(n) + 1)] = 0;
    };
    switch (cfg.scenario) {
        case Scenario::NormalRound: {
            auto r = normal_round(cfg.ensemble);
            p["kept_rate"] = r.kept_prob;
            add_classes("", cfg.ensemble.n_parties(), r.out.probs());
            break;
        }
        case Scenario::Distill: {
            auto h = cross_distill(cfg.ensemble);
            for (PairLabel pl : kAllPairs) {
                std::string nm(name(pl));
                p["harvest_rate " + nm] = h[pl].weight;
                add_classes(nm + " ", 2, {h[pl].state.f0, h[pl].state.f1});
            }
            break;
        }
        case Scenario::PairRound: {
            auto r = pair_round(cfg.pair_a);
            p["success_rate"] = r.success_prob;
            add_classes("", 2, {r.out.f0, r.out.f1});
            break;
        }
        case Scenario::Link: {
            p["success_rate"] = 1;
            add_classes("", 3, link(cfg.pair_a, cfg.pair_b).probs());
            break;
        }
        case Scenario::FullPipeline: {
            auto e = symmetric_ensemble(cfg.f0);
            auto rep = yield_report(cfg.f0, cfg.policy);
            p["first_round_kept_rate"] = normal_round(e).kept_prob;
            auto h = cross_distill(e);
            for (PairLabel pl : kAllPairs) {
                p["harvest_rate " + std::string(name(pl))] = h[pl].weight;
            }
            p["y_normal"] = rep.y_normal;
            p["y_recycle"] = rep.y_recycle;
            p["final_fidelity_normal"] = rep.final_fidelity_normal;
            p["link_fidelity"] = rep.final_fidelity_recycle;
            p["off_support"] = 0;
            break;
        }
    }
    return p;
}

Comparison compare_to_calculus(const TrialSummary &summary, const Prediction &prediction, double max_z) {
    if (summary.trials == 0) {
        throw std::domain_error("cannot compare a summary with zero trials");
    }
    Comparison out;
    for (const auto &s : summary.stats) {
        auto it = prediction.find(s.name);
        if (it == prediction.end()) {
            throw std::invalid_argument("no prediction for statistic '" + s.name + "'");
        }
        if (s.denominator == 0) {
            continue;  // nothing was observed for this conditional statistic
        }
        double predicted = it->second;
        double dev = std::abs(s.estimate - predicted);
        double se;
        double z;
        if (s.kind == Statistic::Kind::Proportion) {
            se = proportion_error(predicted, s.denominator);
            auto hits = uint64_t(std::llround(s.estimate * double(s.denominator)));
            z = equivalent_z(binomial_two_sided(hits, s.denominator, predicted));
        } else {
            se = s.std_error;
            if (se > 0) {
                z = dev / se;
            } else {
                z = dev <= 1e-12 ? 0 : std::numeric_limits<double>::infinity();
            }
        }
        bool ok = z <= max_z;
        out.checks.push_back({s.name, s.estimate, predicted, se, z, ok});
        out.pass = out.pass && ok;
        out.worst_z = std::max(out.worst_z, z);
        out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
    }
    return out;
}

}  // namespace mepp
