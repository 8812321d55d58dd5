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

#include "mepp/commands.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include "mepp/ensemble.h"
#include "mepp/verify.h"

namespace mepp {

namespace {

const std::set<std::string, std::less<>> kKnownKeys{"f0_min", "f0_max",  "step", "f_thr",   "max_rounds", "trials",
                                                    "seed",   "threads", "out",  "circuit", "state"};

std::string_view trim(std::string_view s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) {
        return {};
    }
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string normalize_key(std::string_view key) {
    std::string k(trim(key));
    for (char &c : k) {
        if (c == '-') {
            c = '_';
        }
    }
    return k;
}

double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
        throw UsageError("invalid number for " + std::string(key) + ": '" + std::string(text) + "'");
    }
    return v;
}

uint64_t parse_uint(std::string_view key, std::string_view text) {
    text = trim(text);
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw UsageError("invalid non-negative integer for " + std::string(key) + ": '" + std::string(text) + "'");
    }
    return v;
}

void write_output(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << text;
    f.close();
    if (!f) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::vector<double> split_numbers(std::string_view what, std::string_view list) {
    std::vector<double> out;
    while (true) {
        size_t comma = list.find(',');
        out.push_back(parse_double(what, list.substr(0, comma)));
        if (comma == std::string_view::npos) {
            return out;
        }
        list.remove_prefix(comma + 1);
    }
}

WeightedMixture parse_factor(std::string_view f) {
    auto single = [](size_t n, size_t index, Sign sign) {
        return WeightedMixture::pure(make_ghz(n, label_at(n, index, sign)));
    };
    if (f == "phi+") {
        return single(2, 0, Sign::Plus);
    }
    if (f == "psi+") {
        return single(2, 1, Sign::Plus);
    }
    if (f == "phi-") {
        return single(2, 0, Sign::Minus);
    }
    if (f == "psi-") {
        return single(2, 1, Sign::Minus);
    }
    if (f.starts_with("GHZ[")) {
        auto label = GhzLabel::parse(f);
        return WeightedMixture::pure(make_ghz(label.n_parties, label));
    }
    auto parties = [&](std::string_view digits) {
        uint64_t n = parse_uint("party count", digits);
        if (n < 2 || n > kMaxParties) {
            throw UsageError("party count out of range in '" + std::string(f) + "'");
        }
        return size_t(n);
    };
    if (f.starts_with("ghz")) {
        size_t colon = f.find(':');
        if (colon == std::string_view::npos || colon + 2 > f.size() || (f[colon + 1] != '+' && f[colon + 1] != '-')) {
            throw UsageError("expected ghzN:+k or ghzN:-k, got '" + std::string(f) + "'");
        }
        size_t n = parties(f.substr(3, colon - 3));
        uint64_t k = parse_uint("sector index", f.substr(colon + 2));
        if (k >= sector_size(n)) {
            throw UsageError("sector index out of range in '" + std::string(f) + "'");
        }
        return single(n, k, f[colon + 1] == '+' ? Sign::Plus : Sign::Minus);
    }
    size_t open = f.find('(');
    if (open != std::string_view::npos && f.back() == ')') {
        std::string_view head = f.substr(0, open);
        auto probs = split_numbers(f, f.substr(open + 1, f.size() - open - 2));
        size_t n = 0;
        if (head == "pair") {
            n = 2;
        } else if (head.starts_with("ens")) {
            n = parties(head.substr(3));
        } else {
            throw UsageError("unknown state factor '" + std::string(f) + "'");
        }
        GhzEnsemble e(n, probs);  // validates length and normalization
        return ghz_diagonal_mixture(n, e.probs());
    }
    throw UsageError("unknown state factor '" + std::string(f) + "'");
}

// Splits on ';' outside brackets (GHZ[3;000;+] keeps its semicolons).
std::vector<std::string_view> split_components(std::string_view text) {
    std::vector<std::string_view> out;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i < text.size(); i++) {
        char c = text[i];
        if (c == '[' || c == '(') {
            depth++;
        } else if (c == ']' || c == ')') {
            depth--;
        } else if (c == ';' && depth == 0) {
            out.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    out.push_back(text.substr(start));
    return out;
}

void append_decomposition(std::ostringstream &s, const std::string &prefix, const WeightedMixture &m) {
    auto d = decompose(m);
    auto labels = all_labels(d.n_parties);
    size_t half = d.plus.size();
    for (size_t i = 0; i < labels.size(); i++) {
        double w = i < half ? d.plus[sector_index(labels[i])] : d.minus[sector_index(labels[i])];
        if (std::abs(w) > 1e-12) {
            s << "output " << prefix << labels[i].str() << " " << format_number(w) << "\n";
        }
    }
    s << "max_off_diagonal " << prefix << format_number(d.max_off_diagonal) << "\n";
}

void append_terms(std::ostringstream &s, const std::string &prefix, const WeightedMixture &m) {
    auto merged = merge_rays(m);
    for (size_t k = 0; k < merged.terms().size(); k++) {
        s << "term " << prefix << k << " weight " << format_number(merged.terms()[k].weight) << "\n";
        s << dump(merged.terms()[k].state);
    }
}

size_t require_qubits(const WeightedMixture &m, std::string_view circuit, size_t expected) {
    if (expected != 0 && m.num_qubits() != expected) {
        throw UsageError(std::string(circuit) + " needs a " + std::to_string(expected) + "-qubit state, got " +
                         std::to_string(m.num_qubits()));
    }
    return m.num_qubits();
}

}  // namespace

SettingMap parse_config(std::string_view text) {
    SettingMap out;
    size_t line_no = 0;
    while (!text.empty()) {
        size_t nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        line_no++;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = normalize_key(line.substr(0, eq));
        if (key.empty()) {
            throw UsageError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (!out.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
            throw UsageError("config line " + std::to_string(line_no) + ": repeated key '" + key + "'");
        }
    }
    return out;
}

Settings resolve_settings(std::string_view command, const SettingMap &config, const SettingMap &flags,
                          const std::optional<std::string> &env_seed) {
    Settings s;
    if (command == "thresholds") {
        s.f0_min = 0;
        s.f0_max = 0.5;
        s.step = 0.05;
    }
    SettingMap merged;
    for (const auto *layer : {&config, &flags}) {
        for (const auto &[k, v] : *layer) {
            merged[normalize_key(k)] = v;
        }
    }
    if (!merged.contains("seed") && env_seed) {
        merged["seed"] = *env_seed;
    }
    for (const auto &[key, value] : merged) {
        if (!kKnownKeys.contains(key)) {
            throw UsageError("unknown setting '" + key + "'");
        }
        if (key == "f0_min") {
            s.f0_min = parse_double(key, value);
        } else if (key == "f0_max") {
            s.f0_max = parse_double(key, value);
        } else if (key == "step") {
            s.step = parse_double(key, value);
        } else if (key == "f_thr") {
            s.policy.f_thr = parse_double(key, value);
        } else if (key == "max_rounds") {
            s.policy.max_rounds = unsigned(parse_uint(key, value));
        } else if (key == "trials") {
            s.trials = parse_uint(key, value);
        } else if (key == "seed") {
            s.seed = parse_uint(key, value);
        } else if (key == "threads") {
            s.threads = unsigned(parse_uint(key, value));
        } else if (key == "out") {
            s.out = value;
        } else if (key == "circuit") {
            s.circuit = value;
        } else if (key == "state") {
            s.state = value;
        }
    }
    try {
        s.policy.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    if (s.trials < 1) {
        throw UsageError("trials must be at least 1");
    }
    if (s.threads < 1) {
        throw UsageError("threads must be at least 1");
    }
    return s;
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0) {
        return "0";  // no "-0"
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    for (char *c = buf; *c; c++) {
        if (*c == ',') {
            *c = '.';
        }
    }
    return buf;
}

std::vector<double> make_grid(double f0_min, double f0_max, double step) {
    if (!(step > 0)) {
        throw UsageError("step must be positive");
    }
    if (!(0 <= f0_min && f0_min <= f0_max && f0_max <= 1)) {
        throw UsageError("range must satisfy 0 <= f0-min <= f0-max <= 1");
    }
    auto count = uint64_t(std::floor((f0_max - f0_min) / step + 1e-9)) + 1;
    if (count > 10'000'000) {
        throw UsageError("grid has too many points");
    }
    std::vector<double> grid;
    grid.reserve(count);
    for (uint64_t i = 0; i < count; i++) {
        grid.push_back(std::min(f0_max, f0_min + double(i) * step));
    }
    return grid;
}

std::string sweep_csv(const std::vector<double> &grid) {
    std::ostringstream s;
    s << "f0,e_n,e_2to3,e_o,f_n,f_2,f_2to3\n";
    for (double f0 : grid) {
        auto c = symmetric_curves(f0);
        s << format_number(f0) << "," << format_number(c.e_n) << "," << format_number(c.e_2to3) << ","
          << format_number(c.e_o) << "," << format_number(c.f_n) << "," << format_number(c.f_2) << ","
          << format_number(c.f_2to3) << "\n";
    }
    return s.str();
}

std::string yield_csv(const std::vector<YieldReport> &curve) {
    std::ostringstream s;
    s << "f0,y_n,y_r,ratio,rounds_normal,rounds_pair,flags\n";
    for (const auto &r : curve) {
        s << format_number(r.f0) << "," << format_number(r.y_normal) << "," << format_number(r.y_recycle) << ","
          << format_number(r.ratio) << "," << r.rounds_normal << "," << r.rounds_pair << "," << r.flags() << "\n";
    }
    return s.str();
}

std::string thresholds_csv(const std::vector<double> &axis) {
    std::ostringstream s;
    s << "f1,f2,f0_threshold\n";
    for (double f1 : axis) {
        for (double f2 : axis) {
            if (f1 + f2 > 1 + kNormTolerance) {
                continue;
            }
            double t;
            try {
                t = gain_threshold(f1, f2);
            } catch (const std::domain_error &) {
                t = std::nan("");
            }
            s << format_number(f1) << "," << format_number(f2) << "," << format_number(t) << "\n";
        }
    }
    return s.str();
}

WeightedMixture parse_state(std::string_view text) {
    try {
        std::optional<WeightedMixture> total;
        static const std::regex factor_sep(R"(\s+x\s+)");
        const std::sregex_token_iterator end;
        for (std::string_view part : split_components(text)) {
            std::string comp(trim(part));
            if (comp.empty()) {
                throw UsageError("empty state component");
            }
            double weight = 1;
            size_t star = comp.find('*');
            if (star != std::string::npos) {
                weight = parse_double("state weight", comp.substr(0, star));
                comp = std::string(trim(std::string_view(comp).substr(star + 1)));
            }
            std::optional<WeightedMixture> product;
            for (std::sregex_token_iterator f(comp.begin(), comp.end(), factor_sep, -1); f != end; ++f) {
                auto m = parse_factor(trim(f->str()));
                product = product ? tensor(*product, m) : m;
            }
            if (!product) {
                throw UsageError("empty state component");
            }
            if (!total) {
                total = WeightedMixture(product->num_qubits());
            }
            for (const auto &t : product->terms()) {
                total->add(weight * t.weight, t.state);
            }
        }
        if (!total || !(total->total_weight() > 0)) {
            throw UsageError("state has no weight");
        }
        return total->normalized();
    } catch (const UsageError &) {
        throw;
    } catch (const std::exception &e) {
        throw UsageError(std::string("invalid state: ") + e.what());
    }
}

std::string simulate_report(std::string_view circuit, const WeightedMixture &input, const CircuitSet &circuits) {
    EnumerateBranches all;
    std::ostringstream s;
    s << "circuit " << circuit << "\n";
    s << "input_qubits " << input.num_qubits() << "\n";
    auto round_report = [&](const RoundResult &r) {
        s << "kept_probability " << format_number(r.kept_probability) << "\n";
        for (const auto &d : r.discarded) {
            s << "discarded " << d.parities << " " << format_number(d.probability) << "\n";
        }
        if (r.kept_probability > 0) {
            append_decomposition(s, "", r.output);
            append_terms(s, "", r.output);
        }
    };
    if (circuit == "normal_round") {
        size_t q = require_qubits(input, circuit, 0);
        if (q % 2 != 0 || q < 4) {
            throw UsageError("normal_round needs two copies of an N-party state (an even qubit count >= 4)");
        }
        round_report(circuits.normal_round(input, q / 2, all));
    } else if (circuit == "pair_round") {
        require_qubits(input, circuit, 4);
        round_report(circuits.pair_round(input, all));
    } else if (circuit == "distill") {
        require_qubits(input, circuit, 6);
        auto r = circuits.distill(input, all);
        s << "harvest_probability " << format_number(r.total_probability()) << "\n";
        for (const auto &h : r.harvest) {
            std::string prefix = std::string(name(h.pair)) + " ";
            s << "harvest " << name(h.pair) << " " << format_number(h.probability) << "\n";
            if (h.probability > 0) {
                append_decomposition(s, prefix, h.state);
                append_terms(s, prefix, h.state);
            }
        }
    } else if (circuit == "link") {
        require_qubits(input, circuit, 4);
        auto r = circuits.link(input, all);
        s << "success_probability " << format_number(r.success_probability) << "\n";
        if (r.success_probability > 0) {
            append_decomposition(s, "", r.output);
            append_terms(s, "", r.output);
        }
    } else {
        throw UsageError("unknown circuit '" + std::string(circuit) +
                         "' (expected normal_round, pair_round, distill or link)");
    }
    return s.str();
}

int run_command(std::string_view command, const Settings &settings, std::ostream &out, std::ostream &err,
                const CircuitSet &circuits) {
    try {
        if (command == "sweep") {
            write_output(settings.out, sweep_csv(make_grid(settings.f0_min, settings.f0_max, settings.step)), out);
        } else if (command == "yield") {
            auto grid = make_grid(settings.f0_min, settings.f0_max, settings.step);
            auto curve = yield_ratio_curve(grid, settings.policy);
            write_output(settings.out, yield_csv(curve), out);
            // Keep standard output pure CSV when the table goes there.
            std::ostream &note = settings.out.empty() ? err : out;
            auto x = ratio_crossover(curve, settings.policy);
            note << "crossover_f0 " << (x ? format_number(*x) : std::string("none")) << "\n";
        } else if (command == "thresholds") {
            write_output(settings.out, thresholds_csv(make_grid(settings.f0_min, settings.f0_max, settings.step)),
                         out);
        } else if (command == "verify") {
            VerifyConfig cfg;
            cfg.trials = settings.trials;
            cfg.seed = settings.seed;
            cfg.threads = settings.threads;
            auto report = run_verification(cfg, circuits);
            out << report.text();
            if (!settings.out.empty()) {
                write_output(settings.out, report.csv(), out);
            }
            return report.pass() ? kExitOk : kExitVerifyFailed;
        } else if (command == "simulate") {
            if (settings.circuit.empty() || settings.state.empty()) {
                throw UsageError("simulate needs circuit= and state= (from --config)");
            }
            write_output(settings.out, simulate_report(settings.circuit, parse_state(settings.state), circuits),
                         out);
        } else {
            throw UsageError("unknown command '" + std::string(command) + "'");
        }
        return kExitOk;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace mepp
