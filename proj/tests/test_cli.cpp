// Copyright 2026 The tsebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>

#include "support/support.hpp"

using tse_test::TempDir;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + TSE_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("cli end to end with exit codes") {
  TempDir dir("cli");
  const fs::path log = dir / "log.txt";
  const fs::path data = dir / "data";

  CHECK(run_cli("", log) == 2);
  CHECK(run_cli("frobnicate", log) == 2);
  CHECK(run_cli("simulate", log) == 2);

  REQUIRE(run_cli("simulate --out " + q(data) +
                  " --speakers 4 --train 4 --valid 2 --test 2 --snr -3:3 --duration 0.5 --seed 2",
              log) == 0);
  CHECK(fs::exists(data / "train.jsonl"));
  CHECK(run_cli("simulate --out " + q(dir / "bad") + " --speakers 2", log) == 2);
  CHECK(run_cli("simulate --out " + q(dir / "bad") + " --snr 5", log) == 2);

  CHECK(run_cli("evaluate --manifest " + q(data / "test.jsonl") + " --report " + q(dir / "m.json") + " --oracle mixture",
            log) == 0);
  const auto report = nlohmann::json::parse(std::ifstream(dir / "m.json"));
  CHECK(report["aggregates"]["failure_rate_pct"].get<double>() == 100.0);
  CHECK(run_cli("evaluate --manifest " + q(data / "test.jsonl") + " --report " + q(dir / "m.json"), log) == 2);
  CHECK(run_cli("evaluate --manifest " + q(data / "test.jsonl") + " --report " + q(dir / "m.json") + " --oracle clean",
            log) == 2);

  std::ofstream(dir / "broken.jsonl") << "{\"id\": 1}\n";
  CHECK(run_cli("evaluate --manifest " + q(dir / "broken.jsonl") + " --report " + q(dir / "b.json") +
                " --oracle target",
            log) == 2);

  // a small system-7 run
  REQUIRE(run_cli("preset --system 7 --out " + q(dir / "s7.json"), log) == 0);
  auto cfg = nlohmann::json::parse(std::ifstream(dir / "s7.json"));
  cfg["model"] = {{"blstm_hidden", 4}, {"spk_blstm_hidden", 4}, {"spk_blstm_layers", 1}, {"embed", 4},
                  {"mhfa_heads", 2},   {"mhfa_compress", 4},    {"conv_filters", 16}};
  cfg["upstream"]["layers"] = 2;
  cfg["upstream"]["dim"] = 8;
  cfg["optimizer"]["epochs"] = 1;
  cfg["optimizer"]["batch_size"] = 2;
  std::ofstream(dir / "tiny.json") << cfg.dump(1);
  CHECK(run_cli("train --config " + q(dir / "tiny.json") + " --data " + q(data) + " --out " + q(dir / "run"), log) == 0);
  CHECK(fs::exists(dir / "run" / "best" / "params.tnsr"));
  CHECK(fs::exists(dir / "run" / "curve.jsonl"));
  // resuming with a larger epoch budget is a configuration change
  CHECK(run_cli("train --config " + q(dir / "tiny.json") + " --data " + q(data) + " --out " + q(dir / "run") +
                " --resume " + q(dir / "run" / "last") + " --epochs 2",
            log) == 2);
  CHECK(run_cli("train --config " + q(dir / "tiny.json") + " --data " + q(data) + " --out " + q(dir / "run"), log) == 2);

  CHECK(run_cli("evaluate --ckpt " + q(dir / "run" / "best") + " --manifest " + q(data / "test.jsonl") + " --report " +
                q(dir / "r.json"),
            log) == 0);
  CHECK(run_cli("export-weights --ckpt " + q(dir / "run" / "best") + " --out " + q(dir / "w.csv"), log) == 0);
  CHECK(fs::exists(dir / "w.csv"));
  CHECK(run_cli("export-weights --ckpt " + q(dir / "nowhere") + " --out " + q(dir / "w.csv"), log) == 1);

  cfg["fusion"] = "film";
  std::ofstream(dir / "typo.json") << cfg.dump(1);
  CHECK(run_cli("train --config " + q(dir / "typo.json") + " --data " + q(data) + " --out " + q(dir / "typo"), log) == 2);

  CHECK(run_cli("features --manifest " + q(data / "test.jsonl") + " --out " + q(dir / "feats") + " --layers 2 --dim 8",
            log) == 0);
  std::size_t dumps = 0;
  for (const auto& e : fs::directory_iterator(dir / "feats")) dumps += e.path().extension() == ".lfsc";
  CHECK(dumps == 4);  // two mixtures, two enrollments

  CHECK(run_cli("preset --system 9 --out " + q(dir / "x.json"), log) == 2);
}
