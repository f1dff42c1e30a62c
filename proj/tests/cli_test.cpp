// Copyright 2026 The memcap Authors
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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string &args) {
    std::string cmd = std::string(MEMCAP_CLI) + " " + args + " 2>&1";
    FILE *pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) {
        out.append(buf, n);
    }
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(cli, capacity_physical) {
    auto r = run("capacity --s 0 --a 0.6666666666666666 --d 0.3333333333333333");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("capacity_blackwell"), std::string::npos);
    EXPECT_NE(r.out.find("0.0817041659"), std::string::npos) << r.out;
}

TEST(cli, capacity_raw) {
    auto r = run("capacity --q00 0.9 --q10 0.3 --x0 0.9 --x1 0.5 --methods blackwell,oracle_n");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("blackwell_oracle_agree"), std::string::npos);
}

TEST(cli, exit_codes) {
    EXPECT_EQ(run("capacity --s 1 --a 0.6 --d 0.1").code, 1);
    EXPECT_EQ(run("capacity --s 0 --a 0.6 --d 0.5").code, 1);
    EXPECT_EQ(run("capacity --s 0 --a 0.6").code, 1);
    EXPECT_EQ(run("capacity --s 0 --a 0.6 --d 0.1 --q00 0.5").code, 1);
    EXPECT_EQ(run("bogus").code, 1);
    EXPECT_EQ(run("capacity --s 0.9 --a 0.6666666666666666 --d 0.3333333333333333 --max-iter 2").code, 2);
    EXPECT_EQ(run("capacity --s 0.9 --a 0.5 --d 0.16666666666666666 --bins 0 --max-atoms 64").code, 3);
    EXPECT_EQ(run("sweep --s-range 0:1:3 --a-range 0.5 --d-max").code, 1);
    EXPECT_EQ(run("figure 7").code, 1);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(cli, near_endpoint_warning) {
    auto r = run("capacity --s 0.99999 --a 0.9 --d 0.1 --max-iter 1");
    EXPECT_NE(r.out.find("near_non_forgetful"), std::string::npos) << r.out;
}

TEST(cli, sweep_to_file) {
    std::string path = "cli_sweep_test.csv";
    auto r = run("sweep --s-range 0:0.5:3 --a-range 0.5:0.8:2 --d-max --out " + path);
    ASSERT_EQ(r.code, 0) << r.out;
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        ++lines;
    }
    EXPECT_EQ(lines, 2 + 6);
    std::remove(path.c_str());
}

TEST(cli, compare_report) {
    auto r = run("compare --s 0.6666666666666666 --a 0.6666666666666666 --d 0.3333333333333333 --mc-steps 100000");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("|blackwell - oracle|"), std::string::npos);
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
}
