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

#include "gtest/gtest.h"
#include "mepp/test_util.test.h"

using namespace mepp;

TEST(verify, oracle_matrix_passes) {
    VerifyConfig cfg;
    cfg.cases = 20;
    cfg.n4_cases = 3;
    auto checks = oracle_matrix(cfg);
    EXPECT_EQ(checks.size(), 4u * 20 + 3);
    for (const auto &c : checks) {
        EXPECT_TRUE(c.pass) << c.case_name << " " << c.max_error;
    }
}

TEST(verify, small_run_passes_with_wide_error_bars) {
    VerifyConfig cfg;
    cfg.trials = 100;
    cfg.cases = 5;
    cfg.n4_cases = 1;
    auto report = run_verification(cfg);
    EXPECT_TRUE(report.pass()) << report.text();
    EXPECT_NE(report.text().find("verification passed"), std::string::npos);
    auto csv = report.csv();
    EXPECT_EQ(csv.rfind("section,case,statistic,estimate,predicted,std_error,z,pass\n", 0), 0u);
    EXPECT_EQ(csv.find(",0\n"), std::string::npos);
}

TEST(verify, broken_link_fails_both_matrices) {
    VerifyConfig cfg;
    cfg.trials = 2000;
    cfg.cases = 6;
    cfg.n4_cases = 0;
    auto report = run_verification(cfg, circuits_with_broken_link());
    EXPECT_FALSE(report.pass());
    size_t oracle_failed = 0;
    for (const auto &c : report.oracle) {
        oracle_failed += !c.pass;
        if (c.operation != "link") {
            EXPECT_TRUE(c.pass) << c.case_name;
        }
    }
    EXPECT_EQ(oracle_failed, 6u);
    EXPECT_NE(report.text().find("FAIL monte carlo link"), std::string::npos);
}

TEST(verify, random_distribution_is_normalized) {
    TrialRng rng(5, 5);
    for (size_t n : {2, 4, 8}) {
        auto p = random_distribution(rng, n);
        double t = 0;
        for (double x : p) {
            EXPECT_GT(x, 0);
            t += x;
        }
        EXPECT_NEAR(t, 1, 1e-14);
    }
}
