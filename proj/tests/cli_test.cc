/*
 * Copyright 2026 The cstk Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("cstk_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    ASSERT_EQ(run("synth --games race:6,flight:6 --race-rows 900 --flight-rows 900 --seed 3 --out " +
                  path("c.jsonl")),
              0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string& name) { return (dir_ / name).string(); }

  // Runs the tool and returns its exit status; output goes to files in dir_.
  static int run(const std::string& args) {
    const std::string cmd = std::string(CSTK_CLI_PATH) + " " + args + " >" + path("stdout.txt") +
                            " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string read(const std::string& name) {
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static fs::path dir_;
};

fs::path Cli::dir_;

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("train --no-such-flag"), 2);
  EXPECT_EQ(run("train --data " + path("missing.jsonl") + " --out " + path("m.txt")), 2);
  EXPECT_EQ(run("rank --data " + path("c.jsonl") + " --scenario Z"), 2);
  EXPECT_EQ(run("eval --data " + path("c.jsonl") + " --learners lmt"), 2);
  EXPECT_EQ(run("synth --games race:x --out " + path("x.jsonl")), 2);
  const std::string err = read("stderr.txt");
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1) << err;
}

TEST_F(Cli, RuntimeErrorsExitOne) {
  std::ofstream(path("bad.jsonl")) << "{not json}\n";
  EXPECT_EQ(run("train --data " + path("bad.jsonl") + " --out " + path("m.txt")), 1);
  EXPECT_NE(read("stderr.txt").find("line 1"), std::string::npos);
}

TEST_F(Cli, SynthWritesTraceSidecar) {
  EXPECT_TRUE(fs::exists(path("c.jsonl")));
  EXPECT_TRUE(fs::exists(path("c.jsonl.trace.csv")));
  EXPECT_EQ(read("c.jsonl.trace.csv").rfind("session_id,timestamp,risk,latent_level\n", 0), 0u);
}

TEST_F(Cli, EvalGridHasEighteenReports) {
  ASSERT_EQ(run("eval --data " + path("c.jsonl") + " --learners stump,tree,forest --trees 5 --k 3 --seed 7 --out " +
                path("grid.json")),
            0)
      << read("stderr.txt");
  const auto grid = nlohmann::json::parse(read("grid.json"));
  EXPECT_EQ(grid.at("reports").size(), 18u);
  ASSERT_EQ(run("viz tables --grid " + path("grid.json")), 0);
  EXPECT_NE(read("stdout.txt").find("Quarterly classification"), std::string::npos);
}

TEST_F(Cli, RankTableHasThirtyFourEntries) {
  ASSERT_EQ(run("rank --data " + path("c.jsonl") + " --learner forest --trees 5 --scenario A --scheme binary"), 0)
      << read("stderr.txt");
  std::istringstream in(read("stdout.txt"));
  std::string line;
  std::size_t entries = 0;
  while (std::getline(in, line)) entries += !line.empty() && std::isdigit(static_cast<unsigned char>(line[3]));
  EXPECT_EQ(entries, 34u);
}

TEST_F(Cli, TrainPredictAdviseServe) {
  ASSERT_EQ(run("train --data " + path("c.jsonl") + " --learner tree --rank --out " + path("m.txt")), 0)
      << read("stderr.txt");
  ASSERT_EQ(run("predict --model " + path("m.txt") + " --data " + path("c.jsonl") + " --out " + path("p.csv")), 0);
  EXPECT_EQ(read("p.csv").rfind("session_id,timestamp,label,predicted,p0,p1\n", 0), 0u);
  ASSERT_EQ(run("advise --model " + path("m.txt") + " --data " + path("c.jsonl") + " --session race-000"), 0)
      << read("stderr.txt");
  const auto advice = nlohmann::json::parse(read("stdout.txt"));
  EXPECT_EQ(advice.at("session_id"), "race-000");
  ASSERT_EQ(run("advise --export-matrix " + path("m.csv") + " --write-mapping " + path("map.cfg")), 0);
  EXPECT_NE(read("map.cfg").find("timestamp = Exposure"), std::string::npos);
  ASSERT_EQ(run("serve --model " + path("m.txt") + " --mapping " + path("map.cfg") + " --stdio < /dev/null"), 0);
}

TEST_F(Cli, HeatOutputs) {
  ASSERT_EQ(run("viz heat --data " + path("c.jsonl") + " --nx 16 --nz 16 --csv " + path("h.csv") + " --svg " +
                path("h.svg")),
            0)
      << read("stderr.txt");
  EXPECT_EQ(read("h.csv").rfind("ix,iz,center_x,center_z", 0), 0u);
  EXPECT_EQ(read("h.svg").rfind("<svg", 0), 0u);
}

}  // namespace
