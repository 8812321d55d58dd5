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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mepp/commands.h"

namespace {

struct FlagSpec {
    const char *flag;
    const char *key;
    const char *help;
};

constexpr FlagSpec kFlags[] = {
    {"--f0-min", "f0_min", "Lower end of the grid"},
    {"--f0-max", "f0_max", "Upper end of the grid"},
    {"--step", "step", "Grid spacing"},
    {"--f-thr", "f_thr", "Fidelity threshold of the yield accounting"},
    {"--trials", "trials", "Monte Carlo trials per scenario"},
    {"--seed", "seed", "Random seed (falls back to MEPP_SEED)"},
    {"--out", "out", "Output file (default: standard output)"},
};

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw mepp::IoError("cannot read config file '" + path + "'");
    }
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multipartite entanglement purification calculator and simulator"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App *app;
        std::map<std::string, std::string> values;
        std::string config;
    };
    const std::pair<const char *, const char *> commands[] = {
        {"sweep", "Efficiency and fidelity curves under symmetric noise (CSV)"},
        {"yield", "Normal versus recycling yield over an f0 grid (CSV)"},
        {"verify", "Circuit-versus-closed-form and Monte Carlo checks"},
        {"simulate", "Run one circuit on a state given in a config file"},
        {"thresholds", "Gain threshold on an (F1, F2) grid set by --f0-min/--f0-max/--step (CSV)"},
    };
    std::vector<Sub> subs;
    subs.reserve(std::size(commands));
    for (auto [name, help] : commands) {
        subs.push_back({app.add_subcommand(name, help), {}, {}});
    }
    for (auto &sub : subs) {
        for (const auto &f : kFlags) {
            sub.app->add_option(f.flag, sub.values[f.key], f.help);
        }
        sub.app->add_option("--config", sub.config, "key=value settings file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return mepp::kExitUsage;
    }

    for (auto &sub : subs) {
        if (!sub.app->parsed()) {
            continue;
        }
        try {
            mepp::SettingMap flags;
            for (const auto &f : kFlags) {
                if (sub.app->count(f.flag) > 0) {
                    flags[f.key] = sub.values[f.key];
                }
            }
            mepp::SettingMap config;
            if (!sub.config.empty()) {
                config = mepp::parse_config(read_file(sub.config));
            }
            std::optional<std::string> env_seed;
            if (const char *env = std::getenv("MEPP_SEED")) {
                env_seed = env;
            }
            auto settings = mepp::resolve_settings(sub.app->get_name(), config, flags, env_seed);
            return mepp::run_command(sub.app->get_name(), settings, std::cout, std::cerr);
        } catch (const mepp::UsageError &e) {
            std::cerr << "error: " << e.what() << "\n";
            return mepp::kExitUsage;
        } catch (const mepp::IoError &e) {
            std::cerr << "error: " << e.what() << "\n";
            return mepp::kExitIo;
        }
    }
    return mepp::kExitUsage;
}
