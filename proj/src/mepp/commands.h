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

#ifndef MEPP_COMMANDS_H
#define MEPP_COMMANDS_H

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mepp/circuits.h"
#include "mepp/scheduler.h"

namespace mepp {

/// Bad flags, config entries or state specifications (exit code 1).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Unreadable or unwritable files (exit code 2).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitVerifyFailed = 3 };

/// Key/value settings of one command. Keys use underscores (f0_min); dashes
/// are accepted and normalized.
using SettingMap = std::map<std::string, std::string, std::less<>>;

/// Parses `key = value` lines; blank lines and lines starting with '#' are
/// skipped. Throws UsageError for malformed lines or repeated keys.
SettingMap parse_config(std::string_view text);

struct Settings {
    double f0_min = 0.25;
    double f0_max = 1.0;
    double step = 0.01;
    YieldPolicy policy;
    uint64_t trials = 100000;
    uint64_t seed = 0;
    unsigned threads = 1;
    std::string out;  // empty: standard output
    std::string circuit;
    std::string state;
};

/// Defaults for `command`, overlaid by the config entries and then by the
/// flags. The seed falls back to `env_seed` when neither sets it. Throws
/// UsageError for unknown keys, unparsable values or an invalid range.
Settings resolve_settings(std::string_view command, const SettingMap &config, const SettingMap &flags,
                          const std::optional<std::string> &env_seed);

/// `%.6g` with `.` as decimal separator; "nan" / "inf" / "-inf" otherwise.
std::string format_number(double v);

/// f0_min, f0_min + step, ... up to f0_max (inclusive within 1e-9 of a step).
/// Throws UsageError unless 0 <= f0_min <= f0_max <= 1 and step > 0.
std::vector<double> make_grid(double f0_min, double f0_max, double step);

/// `f0,e_n,e_2to3,e_o,f_n,f_2,f_2to3`, one row per grid point.
std::string sweep_csv(const std::vector<double> &grid);

/// `f0,y_n,y_r,ratio,rounds_normal,rounds_pair,flags`, one row per grid point.
std::string yield_csv(const std::vector<YieldReport> &curve);

/// `f1,f2,f0_threshold` over the grid squared, restricted to f1 + f2 <= 1;
/// points without a threshold print nan.
std::string thresholds_csv(const std::vector<double> &axis);

/// A state for `simulate`: ';'-separated components `[weight*]factor x factor ...`.
/// Factors: phi+ phi- psi+ psi-, ghzN:+k / ghzN:-k (sector index k),
/// GHZ[N;bits;sign], ensN(p0,p1,...) for a GHZ-diagonal mixture and
/// pair(f0,f1) for a phi+/psi+ mixture. Throws UsageError.
WeightedMixture parse_state(std::string_view text);

/// Runs a named circuit (normal_round, pair_round, distill, link) on a state
/// and returns the text dump of its branch probabilities and outputs.
std::string simulate_report(std::string_view circuit, const WeightedMixture &input,
                            const CircuitSet &circuits = CircuitSet::standard());

/// Runs one subcommand and returns its exit code. Results go to `out` or the
/// configured file, diagnostics to `err`.
int run_command(std::string_view command, const Settings &settings, std::ostream &out, std::ostream &err,
                const CircuitSet &circuits = CircuitSet::standard());

}  // namespace mepp

#endif
