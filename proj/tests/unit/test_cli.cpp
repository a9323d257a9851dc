// Copyright 2026 The ACAV Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "acav/cli/commands.hpp"
#include "acav/cli/config.hpp"
#include "acav/cli/hash.hpp"
#include "acav/core/error.hpp"
#include "support/oracles.hpp"

using namespace acav;
using namespace acav::cli;

namespace {

const char* kTinyConfig = R"({
  "seed": 3,
  "dataset": {"scene": "fundus", "healthy": 4, "diseased": 4, "frequencies": {"bleeding": 1.0}},
  "train": {"learning_rate": 0.01, "epochs": 2, "batch_size": 4},
  "probe": {"pool_size": 4, "reference_healthy": 4, "reference_diseased": 4,
            "sweeps": [{"kinds": ["bleeding"], "counts": [1]}]}
})";

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run acav_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "acav");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("config parsing") {
    const auto c = parse_config(kTinyConfig);
    CHECK(c.seed == 3);
    CHECK(c.dataset.healthy_count == 4);
    CHECK(c.train.epochs == 2);
    CHECK(c.probe.margin == 0.2);
    CHECK(c.probe.layers == std::vector<std::string>{"n-1", "n-2"});
    REQUIRE(c.probe.concepts.size() == 1);
    CHECK(c.probe.concepts[0].name == "bleeding x1 medium");
    CHECK(c.hash.size() == 64);
    CHECK(c.dataset.seed == dataset_seed(c));
    CHECK(dataset_seed(c) != train_seed(c));
    CHECK(pool_seed(c) != reference_seed(c));
  }

  TEST_CASE("sweeps expand in order") {
    const std::string text = replace(kTinyConfig, R"({"kinds": ["bleeding"], "counts": [1]})",
                                     R"({"name": "t", "kinds": ["bleeding"], "counts": [1, 3],
                                         "scales": ["small", "medium", "large"], "intensities": [1.0, 0.5]})");
    const auto c = parse_config(text);
    REQUIRE(c.probe.concepts.size() == 12);
    CHECK(c.probe.concepts[0].name == "t x1 small");
    CHECK(c.probe.concepts[1].name == "t x1 small i0.5");
    CHECK(c.probe.concepts[2].name == "t x1 medium");
    CHECK(c.probe.concepts[4].name == "t x1 large");
    CHECK(c.probe.concepts[6].count == 3);
  }

  TEST_CASE("strict keys and values") {
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "\"seed\": 3", "\"seed\": 3, \"extra\": 1")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "\"healthy\": 4", "\"healthy\": 4, \"colour\": 1")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "\"counts\": [1]", "\"counts\": [1], \"size\": 2")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "\"epochs\": 2", "\"epochs\": 2, \"momentum\": 0.9")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "\"seed\": 3,", "")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "\"learning_rate\": 0.01", "\"learning_rate\": -1")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "\"healthy\": 4", "\"healthy\": -4")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "[{\"kinds\": [\"bleeding\"], \"counts\": [1]}]", "[]")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "\"bleeding\": 1.0", "\"tumor\": 1.0")), ConfigError);
    CHECK_THROWS_AS(parse_config(replace(kTinyConfig, "\"kinds\": [\"bleeding\"]", "\"kinds\": [\"drusen\"]")), ConfigError);
    CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
  }

  TEST_CASE("config hash tracks every byte") {
    const auto a = parse_config(kTinyConfig);
    const auto b = parse_config(std::string(kTinyConfig) + " ");
    const auto c = parse_config(kTinyConfig);
    CHECK(a.hash != b.hash);
    CHECK(a.hash == c.hash);
    const auto d = parse_config(kTinyConfig, 99);
    CHECK(d.seed == 99);
    CHECK(d.hash != a.hash);
    CHECK(dataset_seed(d) != dataset_seed(a));
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(acav_cli({}).code == 2);
    CHECK(acav_cli({"frobnicate"}).code == 2);
    CHECK(acav_cli({"gen-data", "--config", "/nonexistent/c.json", "--out", "x"}).code == 2);
    CHECK(acav_cli({"--help"}).code == 0);
    CHECK(acav_cli({"selftest", "--threads", "0"}).code == 2);
  }

  TEST_CASE("selftest") {
    const auto r = acav_cli({"selftest", "--models", "10", "--cases", "10"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS gradient check") != std::string::npos);
    CHECK(r.out.find("PASS conv oracle") != std::string::npos);
  }

  TEST_CASE("gen-data is deterministic and reports entropy") {
    testing::TempDir dir("gen");
    write_file(dir / "c.json", kTinyConfig);
    const auto c = (dir / "c.json").string();
    const auto r1 = acav_cli({"gen-data", "--config", c, "--out", (dir / "d1").string()});
    const auto r2 = acav_cli({"gen-data", "--config", c, "--out", (dir / "d2").string(), "--threads", "2"});
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(r1.out.find("healthy: 4") != std::string::npos);
    CHECK(r1.out.find("diseased: 4") != std::string::npos);
    CHECK(r1.out.find("entropy_spec_nats: 0.0000") != std::string::npos);
    CHECK(read_file(dir / "d1" / "manifest.json") == read_file(dir / "d2" / "manifest.json"));
    const auto manifest = nlohmann::json::parse(read_file(dir / "d1" / "manifest.json"));
    CHECK(manifest.at("samples").size() == 8);
    const auto run = nlohmann::json::parse(read_file(dir / "d1" / "run_gen-data.json"));
    CHECK(run.at("config_hash") == manifest.at("config_hash"));
    CHECK(run.at("outputs").size() == 17);
    CHECK(run.at("inputs")[0].at("sha256") == sha256_file(c));
  }

  TEST_CASE("gen-data entropy of a skewed spec") {
    testing::TempDir dir("ent");
    write_file(dir / "c.json",
               replace(kTinyConfig, "\"bleeding\": 1.0", "\"fatty_dots\": 0.7, \"cotton_wool\": 0.2, \"bleeding\": 0.1"));
    const auto r = acav_cli({"gen-data", "--config", (dir / "c.json").string(), "--out", (dir / "d").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("entropy_spec_nats: 0.8018") != std::string::npos);
  }

  TEST_CASE("train needs a dataset") {
    testing::TempDir dir("nodata");
    write_file(dir / "c.json", kTinyConfig);
    const auto missing = (dir / "no-such-data").string();
    const auto r = acav_cli({"train", "--config", (dir / "c.json").string(), "--data", missing, "--out",
                        (dir / "m").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find(missing) != std::string::npos);
    const auto r2 = acav_cli({"train", "--config", (dir / "c.json").string(), "--out", (dir / "m").string()});
    CHECK(r2.code == 2);
  }

  TEST_CASE("train is reproducible and writes its artifacts") {
    testing::TempDir dir("train");
    write_file(dir / "c.json", kTinyConfig);
    const auto c = (dir / "c.json").string();
    REQUIRE(acav_cli({"gen-data", "--config", c, "--out", (dir / "d").string()}).code == 0);
    const auto a = acav_cli({"train", "--config", c, "--data", (dir / "d").string(), "--out", (dir / "m1").string()});
    const auto b = acav_cli({"train", "--config", c, "--data", (dir / "d").string(), "--out", (dir / "m2").string(),
                        "--threads", "3"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(sha256_file(dir / "m1" / "model.ckpt") == sha256_file(dir / "m2" / "model.ckpt"));
    const auto hash = parse_config(read_file(c)).hash;
    const auto loss = read_file(dir / "m1" / "loss_history.csv");
    CHECK(loss.rfind("epoch,loss,config_hash,seed\n", 0) == 0);
    CHECK(loss.find(hash) != std::string::npos);
    const auto run = nlohmann::json::parse(read_file(dir / "m1" / "run_train.json"));
    CHECK(run.at("config_hash") == hash);
    CHECK(run.contains("loss_flagged"));
    CHECK(run.at("timings_s").contains("train"));
  }

  TEST_CASE("probe explains an unusable model") {
    testing::TempDir dir("probe");
    write_file(dir / "c.json", replace(kTinyConfig, "\"epochs\": 2", "\"epochs\": 0"));
    const auto c = (dir / "c.json").string();
    REQUIRE(acav_cli({"gen-data", "--config", c, "--out", (dir / "d").string()}).code == 0);
    REQUIRE(acav_cli({"train", "--config", c, "--data", (dir / "d").string(), "--out", (dir / "m").string()}).code == 0);
    const auto r = acav_cli({"probe", "--config", c, "--checkpoint", (dir / "m" / "model.ckpt").string(), "--out",
                        (dir / "p").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("probe.margin") != std::string::npos);
  }

  TEST_CASE("report merges files") {
    testing::TempDir dir("report");
    const std::string header =
        "schema,config_hash,seed,concept,kinds,count,scale,intensity,layer,layer_index,n,sim_original,"
        "sim_augmented,abs_deviation,delta_v,flip_rate,literal_ratio,flipped,preserved,aug_abstained,"
        "angle_healthy,angle_diseased,angle_original_healthy,angle_original_diseased\n";
    write_file(dir / "a.csv", header + "1,h1,5,tumor x1 small,tumor,1,small,1,n-1,13,10,0.9,0.8,0.1,1,0.2,0.25,2,8,0,"
                                       "20,31,5,40\n");
    write_file(dir / "b.csv", header + "1,h1,6,tumor x1 small,tumor,1,small,1,n-1,13,10,0.9,0.7,0.2,1,0.2,0.25,2,8,0,"
                                       "20,29,5,40\n");
    write_file(dir / "bad.csv", replace(header, "schema,", "schema,") + "7,h1,6,x,tumor,1,small,1,n-1,13,10,0.9,0.7,"
                                                                         "0.2,1,0.2,0.25,2,8,0,20,29,5,40\n");
    const auto self = acav_cli({"report", (dir / "a.csv").string(), (dir / "a.csv").string(), "--out",
                           (dir / "r1").string(), "--format", "csv"});
    REQUIRE(self.code == 0);
    CHECK(self.out == read_file(dir / "r1" / "merged.csv"));
    CHECK(std::count(self.out.begin(), self.out.end(), '\n') == 2);
    const auto two = acav_cli({"report", (dir / "a.csv").string(), (dir / "b.csv").string(), "--out",
                          (dir / "r2").string()});
    REQUIRE(two.code == 0);
    const auto merged = read_file(dir / "r2" / "merged.csv");
    CHECK(merged.find("angle_diseased@s5") != std::string::npos);
    CHECK(merged.find("angle_diseased@s6") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "r2" / "angle_vs_scale.csv"));
    CHECK(std::filesystem::exists(dir / "r2" / "deviation_vs_count.csv"));
    CHECK(std::filesystem::exists(dir / "r2" / "run_report.json"));
    CHECK(two.out.find("| concept | layer |") == 0);
    const auto bad = acav_cli({"report", (dir / "bad.csv").string(), "--out", (dir / "r3").string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("schema") != std::string::npos);
  }
}
