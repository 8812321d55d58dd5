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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "gtest/gtest.h"

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mepp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override {
        fs::remove_all(dir_);
    }

    std::string path(const std::string &name) const {
        return (dir_ / name).string();
    }

    std::string write(const std::string &name, const std::string &text) const {
        std::ofstream(path(name), std::ios::binary) << text;
        return path(name);
    }

    static std::string read(const std::string &p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
    }

    CliRun run(const std::string &args, const std::string &env = "unset MEPP_SEED;") const {
        std::string out = path("stdout.txt");
        std::string err = path("stderr.txt");
        std::string cmd = env + " '" + std::string(MEPP_CLI_PATH) + "' " + args + " >'" + out + "' 2>'" + err + "'";
        int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read(out), read(err)};
    }

    fs::path dir_;
};

size_t count_lines(const std::string &s) {
    size_t n = 0;
    for (char c : s) {
        n += c == '\n';
    }
    return n;
}

}  // namespace

TEST_F(CliTest, sweep_default_grid) {
    auto r = run("sweep --out " + path("s.csv"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    auto csv = read(path("s.csv"));
    EXPECT_EQ(count_lines(csv), 77u);
    EXPECT_EQ(csv.rfind("f0,e_n,e_2to3,e_o,f_n,f_2,f_2to3\n0.25,", 0), 0u);
    EXPECT_NE(csv.find("\n0.5,0.333333,0.333333,0.666667,0.75,0.75,0.5625\n"), std::string::npos);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EXPECT_TRUE(csv.ends_with("\n1,1,0,1,1,1,1\n"));
}

TEST_F(CliTest, sweep_and_yield_are_byte_identical_across_runs) {
    auto cfg = write("run.cfg", "f0-min = 0.3\nf0_max=0.9\nstep=0.005\nf_thr=0.9\n");
    for (const char *cmd : {"sweep", "yield"}) {
        ASSERT_EQ(run(std::string(cmd) + " --config " + cfg + " --out " + path("a.csv")).exit_code, 0);
        ASSERT_EQ(run(std::string(cmd) + " --config " + cfg + " --out " + path("b.csv")).exit_code, 0);
        auto a = read(path("a.csv"));
        EXPECT_FALSE(a.empty());
        EXPECT_EQ(a, read(path("b.csv"))) << cmd;
    }
}

TEST_F(CliTest, yield_prints_crossover) {
    auto r = run("yield --out " + path("y.csv"));
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out.rfind("crossover_f0 0.", 0), 0u);
    auto csv = read(path("y.csv"));
    EXPECT_EQ(csv.rfind("f0,y_n,y_r,ratio,rounds_normal,rounds_pair,flags\n", 0), 0u);
    EXPECT_NE(csv.find("\n0.25,0,0,nan,"), std::string::npos);
    EXPECT_NE(csv.find("\n0.96,1,"), std::string::npos);
}

TEST_F(CliTest, flags_override_config) {
    auto cfg = write("c.cfg", "f0_min=0.5\nf0_max=0.5\n");
    auto r = run("sweep --config " + cfg + " --f0-min 0.4 --step 0.1");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(count_lines(r.out), 3u);
}

TEST_F(CliTest, thresholds) {
    auto r = run("thresholds --f0-max 0.2 --step 0.1");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out.rfind("f1,f2,f0_threshold\n0,0,0.5\n", 0), 0u);
    EXPECT_EQ(count_lines(r.out), 10u);
}

TEST_F(CliTest, exit_codes) {
    EXPECT_EQ(run("sweep --f0-min 0.8 --f0-max 0.2").exit_code, 1);
    EXPECT_EQ(run("sweep --step 0").exit_code, 1);
    EXPECT_EQ(run("sweep --step abc").exit_code, 1);
    EXPECT_EQ(run("sweep --bogus 1").exit_code, 1);
    EXPECT_EQ(run("").exit_code, 1);
    EXPECT_EQ(run("teleport").exit_code, 1);
    EXPECT_EQ(run("yield --f-thr 1.5").exit_code, 1);
    EXPECT_EQ(run("sweep --config " + write("bad.cfg", "not a setting\n")).exit_code, 1);
    EXPECT_EQ(run("sweep --config " + write("unknown.cfg", "colour=blue\n")).exit_code, 1);
    EXPECT_EQ(run("sweep --config " + path("missing.cfg")).exit_code, 2);
    EXPECT_EQ(run("sweep --out " + path("no/such/dir/x.csv")).exit_code, 2);
    EXPECT_EQ(run("simulate").exit_code, 1);
    EXPECT_EQ(run("sweep --help").exit_code, 0);
    auto r = run("sweep --f0-min 0.8 --f0-max 0.2");
    EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, simulate_examples) {
    auto same = run("simulate --config " + write("a.cfg", "circuit=normal_round\nstate=ghz3:+0 x ghz3:+0\n"));
    ASSERT_EQ(same.exit_code, 0) << same.err;
    EXPECT_NE(same.out.find("kept_probability 1\n"), std::string::npos);
    EXPECT_NE(same.out.find("output GHZ[3;000;+] 1\n"), std::string::npos);

    auto odd = run("simulate --config " + write("b.cfg", "circuit=normal_round\nstate=ghz3:+0 x ghz3:+1\n"));
    ASSERT_EQ(odd.exit_code, 0);
    EXPECT_NE(odd.out.find("kept_probability 0\n"), std::string::npos);

    auto pairs = run("simulate --config " + write("c.cfg", "circuit=pair_round\nstate=phi+ x psi+\n"));
    ASSERT_EQ(pairs.exit_code, 0);
    EXPECT_NE(pairs.out.find("kept_probability 0\n"), std::string::npos);

    auto bad = run("simulate --config " + write("d.cfg", "circuit=normal_round\nstate=ghz3:+9 x ghz3:+0\n"));
    EXPECT_EQ(bad.exit_code, 1);
    auto wrong = run("simulate --config " + write("e.cfg", "circuit=link\nstate=ghz3:+0\n"));
    EXPECT_EQ(wrong.exit_code, 1);
}

TEST_F(CliTest, verify_small_run_and_seed_fallback) {
    auto a = run("verify --trials 100 --seed 5 --out " + path("v.csv"));
    ASSERT_EQ(a.exit_code, 0) << a.out;
    EXPECT_NE(a.out.find("verification passed"), std::string::npos);
    auto csv = read(path("v.csv"));
    EXPECT_EQ(csv.rfind("section,case,statistic,estimate,predicted,std_error,z,pass\n", 0), 0u);
    EXPECT_EQ(csv.find(",0\n"), std::string::npos);

    auto b = run("verify --trials 100 --out " + path("w.csv"), "MEPP_SEED=5");
    ASSERT_EQ(b.exit_code, 0);
    EXPECT_EQ(csv, read(path("w.csv")));
    auto c = run("verify --trials 100 --out " + path("x.csv"), "MEPP_SEED=6");
    EXPECT_NE(csv, read(path("x.csv")));
    EXPECT_EQ(run("verify --trials 100", "MEPP_SEED=abc").exit_code, 1);
}
