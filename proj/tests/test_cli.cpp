//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with a shell line; stdout captured, stderr to a scratch
// file so diagnostics stay off the test output.
RunResult run(const std::string &args, const std::string &stdin_text = "") {
  fs::path dir = fs::temp_directory_path() / "adrgen_cli_test";
  fs::create_directories(dir);
  fs::path in_file = dir / "stdin.txt";
  {
    std::ofstream f(in_file, std::ios::binary);
    f << stdin_text;
  }
  std::string cmd = std::string(ADRGEN_CLI_PATH) + " " + args + " < " +
                    in_file.string() + " 2> " + (dir / "stderr.txt").string();
  RunResult r;
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string toy_corpus() {
  return std::string(ADRGEN_SOURCE_DIR) + "/data/toy_corpus.tsv";
}

} // namespace

TEST_CASE("fragment: benzyl chloride prints two motif lines") {
  RunResult r = run("fragment", "ClCc1ccccc1\n");
  CHECK(r.exit_code == 0);
  int lines = 0;
  for (char c : r.out)
    lines += c == '\n';
  CHECK(lines == 2);
}

TEST_CASE("parse: emits one JSON object per input line") {
  RunResult r = run("parse", "C#N\nCCO\n");
  CHECK(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  int objects = 0;
  while (std::getline(in, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.contains("atoms"));
    CHECK(j.contains("bonds"));
    ++objects;
  }
  CHECK(objects == 2);
}

TEST_CASE("exit codes: usage=1, data=2") {
  CHECK(run("no-such-command").exit_code == 1);
  CHECK(run("parse", "C1CC\n").exit_code == 2); // unclosed ring
  CHECK(run("vocab --data /nonexistent.tsv").exit_code == 2);
  // malformed config values are usage errors
  CHECK(run("vocab --data x.tsv --set epochs=banana").exit_code == 1);
  CHECK(run("vocab --data x.tsv --set nonsense").exit_code == 1);
}

TEST_CASE("version prints format versions") {
  RunResult r = run("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("checkpoint format") != std::string::npos);
  CHECK(r.out.find("vocab format") != std::string::npos);
}

TEST_CASE("eval on identical files gives f1 = 1.0") {
  fs::path dir = fs::temp_directory_path() / "adrgen_cli_test";
  fs::create_directories(dir);
  std::string table = "drug_id\tlabels\nA\tNausea,Rash\nB\tHeadache\n";
  {
    std::ofstream f(dir / "truth.tsv", std::ios::binary);
    f << table;
  }
  fs::path out = dir / "metrics.json";
  RunResult r = run("eval --pred " + (dir / "truth.tsv").string() +
                    " --truth " + (dir / "truth.tsv").string() + " --out " +
                    out.string());
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j.at("f1").get<double>() == 1.0);
  CHECK(j.contains("config_hash"));
}

TEST_CASE("deterministic reruns produce byte-identical outputs") {
  RunResult a = run("fragment", "CC(=O)Oc1ccccc1C(=O)O\n");
  RunResult b = run("fragment", "CC(=O)Oc1ccccc1C(=O)O\n");
  CHECK(a.out == b.out);

  fs::path dir = fs::temp_directory_path() / "adrgen_cli_test";
  fs::path v1 = dir / "vocab1.jsonl", v2 = dir / "vocab2.jsonl";
  CHECK(run("vocab --data " + toy_corpus() + " --seed 3 --out " +
            v1.string())
            .exit_code == 0);
  CHECK(run("vocab --data " + toy_corpus() + " --seed 3 --out " +
            v2.string())
            .exit_code == 0);
  CHECK(slurp(v1) == slurp(v2));

  fs::path g1 = dir / "graph1.json", g2 = dir / "graph2.json";
  CHECK(run("graph --data " + toy_corpus() + " --seed 3 --out " +
            g1.string())
            .exit_code == 0);
  CHECK(run("graph --data " + toy_corpus() + " --seed 3 --out " +
            g2.string())
            .exit_code == 0);
  CHECK(slurp(g1) == slurp(g2));
}

TEST_CASE("training reruns with one seed are byte-identical") {
  fs::path a = fs::temp_directory_path() / "adrgen_cli_det_a";
  fs::path b = fs::temp_directory_path() / "adrgen_cli_det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  std::string fast = " --set epochs=4 --set batch_size=4 --set d_model=16 "
                     "--set decoder_heads=2 --set num_layers=1 "
                     "--set gat_layers=1 --set max_len=24 --set max_atoms=48 "
                     "--set seeds=5";
  REQUIRE(run("train --data " + toy_corpus() + " --out-dir " + a.string() +
              fast)
              .exit_code == 0);
  REQUIRE(run("train --data " + toy_corpus() + " --out-dir " + b.string() +
              fast)
              .exit_code == 0);
  for (const char *f : {"checkpoint_seed5.bin", "metrics.json",
                        "vocab.jsonl", "assoc_graph.json", "codec.json",
                        "train_log_seed5.jsonl"})
    CHECK(slurp(a / f) == slurp(b / f));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("train with default hyperparameters produces the artifacts") {
  // published defaults, one seed; checkpoint + metrics with the config
  // hash must exist afterwards
  fs::path dir = fs::temp_directory_path() / "adrgen_cli_defaults";
  fs::remove_all(dir);
  RunResult r = run("train --data " + toy_corpus() + " --out-dir " +
                    dir.string() + " --set seeds=1");
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "checkpoint_seed1.bin"));
  CHECK(fs::exists(dir / "metrics.json"));
  nlohmann::json metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
  CHECK(metrics.at("config_hash").is_string());
  fs::remove_all(dir);
}

TEST_CASE("train writes artifacts; predict and explain consume them") {
  fs::path dir = fs::temp_directory_path() / "adrgen_cli_train";
  fs::remove_all(dir);
  std::string fast = " --set epochs=8 --set batch_size=4 --set d_model=16 "
                     "--set decoder_heads=2 --set num_layers=1 "
                     "--set gat_layers=1 --set max_len=24 --set max_atoms=48 "
                     "--set dropout=0.0 --set seeds=1";
  RunResult r = run("train --data " + toy_corpus() + " --out-dir " +
                    dir.string() + fast);
  REQUIRE(r.exit_code == 0);
  for (const char *f :
       {"checkpoint_seed1.bin", "metrics_seed1.json", "metrics.json",
        "vocab.jsonl", "assoc_graph.json", "codec.json", "model.json",
        "train_log_seed1.jsonl"})
    CHECK(fs::exists(dir / f));
  nlohmann::json metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
  CHECK(metrics.contains("config_hash"));
  CHECK(metrics.at("single_seed_warning").get<bool>());

  // predict: skips unknown-motif drugs with an empty line, keeps going
  RunResult p = run("predict --model-dir " + dir.string(),
                    "CC(=O)Oc1ccccc1C(=O)O\nCCCCCCCC\n");
  CHECK(p.exit_code == 0);
  int lines = 0;
  for (char c : p.out)
    lines += c == '\n';
  CHECK(lines == 2);

  // explain writes the pinned CSV schema
  fs::path csv = dir / "contrib.csv";
  RunResult e = run("explain --model-dir " + dir.string() + " --data " +
                    toy_corpus() + " --drug-id aspirin --out " + csv.string());
  CHECK(e.exit_code == 0);
  std::string content = slurp(csv);
  CHECK(content.rfind("motif_index,motif_canonical,label_id,label_name,score\n",
                      0) == 0);
}
