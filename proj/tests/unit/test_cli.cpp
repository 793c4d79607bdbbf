// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

// Runs the segmap executable as a subprocess.

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kCli = SEGMAP_CLI;
const fs::path kFixtures = SEGMAP_FIXTURE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    static int n = 0;
    dir = fs::temp_directory_path() / ("segmap-cli-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

struct Outcome {
  int code;
  std::string err;
};

// Runs `segmap <args>` from `cwd`; stdout is discarded.
Outcome segmap(const std::string& args, const fs::path& cwd) {
  const fs::path err = cwd / ".stderr";
  const std::string cmd = "cd '" + cwd.string() + "' && '" + kCli.string() + "' " + args + " > /dev/null 2> '" +
                          err.string() + "'";
  const int raw = std::system(cmd.c_str());
  Outcome o{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(err)};
  fs::remove(err);
  return o;
}

void write(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

std::string corpus_flag() { return "--corpus '" + (kFixtures / "abstracts20.csv").string() + "'"; }

}  // namespace

TEST_CASE("ingest then extract writes the golden candidate CSV") {
  Scratch s;
  REQUIRE(segmap("-o out ingest " + corpus_flag(), s.dir).code == 0);
  REQUIRE(segmap("-o out extract", s.dir).code == 0);
  CHECK(slurp(s.dir / "out/extract/candidates.csv") == slurp(kFixtures / "abstracts20_candidates.golden.csv"));
  auto manifest = json::parse(slurp(s.dir / "out/manifests/extract.json"));
  CHECK(manifest.at("subcommand") == "extract");
  CHECK(!manifest.at("inputs").empty());
  CHECK(!manifest.at("outputs").empty());
}

TEST_CASE("a stage without its upstream artifact exits 3 and names the producer") {
  Scratch s;
  auto o = segmap("-o out metrics", s.dir);
  CHECK(o.code == 3);
  CHECK(o.err.find("extract") != std::string::npos);
  REQUIRE(segmap("-o out ingest " + corpus_flag(), s.dir).code == 0);
  REQUIRE(segmap("-o out extract", s.dir).code == 0);
  o = segmap("-o out metrics", s.dir);
  CHECK(o.code == 3);
  CHECK(o.err.find("code export") != std::string::npos);
}

TEST_CASE("configuration errors exit 2 and name the key") {
  Scratch s;
  write(s.dir / "bad.toml", "bogus_key = 1\n");
  auto o = segmap("-c bad.toml -o out extract", s.dir);
  CHECK(o.code == 2);
  CHECK(o.err.find("bogus_key") != std::string::npos);

  write(s.dir / "bad2.toml", "min_cocitations = -4\n");
  o = segmap("-c bad2.toml -o out schol", s.dir);
  CHECK(o.code == 2);
  CHECK(o.err.find("min_cocitations") != std::string::npos);

  o = segmap("-o out ingest --corpus missing.csv", s.dir);
  CHECK(o.code == 2);
  CHECK(o.err.find("corpus") != std::string::npos);
}

TEST_CASE("command-line flags override the config file") {
  Scratch s;
  write(s.dir / "run.toml", "anchor = \"housing\"\nout_dir = \"from-config\"\n");
  REQUIRE(segmap("-c run.toml -o out ingest --anchor segregation " + corpus_flag(), s.dir).code == 0);
  REQUIRE(segmap("-c run.toml -o out extract --anchor segregation", s.dir).code == 0);
  CHECK(!fs::exists(s.dir / "from-config"));
  auto manifest = json::parse(slurp(s.dir / "out/manifests/extract.json"));
  CHECK(manifest.at("config").at("anchor") == "segregation");
  CHECK(slurp(s.dir / "out/extract/candidates.csv") == slurp(kFixtures / "abstracts20_candidates.golden.csv"));
}

TEST_CASE("relative paths in a config file resolve against its directory") {
  Scratch s;
  fs::create_directories(s.dir / "proj");
  fs::create_directories(s.dir / "elsewhere");
  fs::copy_file(kFixtures / "abstracts20.csv", s.dir / "proj/corpus.csv");
  write(s.dir / "proj/segmap.toml", "corpus = \"corpus.csv\"\nout_dir = \"artifacts\"\n");
  REQUIRE(segmap("-c ../proj/segmap.toml ingest", s.dir / "elsewhere").code == 0);
  CHECK(fs::exists(s.dir / "proj/artifacts/corpus/records.jsonl"));
  CHECK(!fs::exists(s.dir / "elsewhere/artifacts"));
}

TEST_CASE("reruns are byte-identical and leave inputs untouched") {
  Scratch s;
  fs::copy_file(kFixtures / "abstracts20.csv", s.dir / "corpus.csv");
  const std::string before = slurp(s.dir / "corpus.csv");
  const auto mtime = fs::last_write_time(s.dir / "corpus.csv");
  const char* files[] = {"corpus/records.jsonl", "extract/candidates.jsonl", "extract/candidates.csv",
                         "conet/graph.json", "manifests/conet.json"};
  std::map<std::string, std::string> first;
  for (int run = 0; run < 2; ++run) {
    REQUIRE(segmap("-o out ingest --corpus corpus.csv", s.dir).code == 0);
    REQUIRE(segmap("-o out extract", s.dir).code == 0);
    REQUIRE(segmap("-o out conet --forms-source candidates", s.dir).code == 0);
    for (const char* f : files) {
      if (run == 0) {
        first[f] = slurp(s.dir / "out" / f);
        CHECK(!first[f].empty());
      } else {
        CHECK_MESSAGE(slurp(s.dir / "out" / f) == first[f], f);
      }
    }
  }
  CHECK(slurp(s.dir / "corpus.csv") == before);
  CHECK(fs::last_write_time(s.dir / "corpus.csv") == mtime);
}

TEST_CASE("coding through the CLI feeds downstream stages") {
  Scratch s;
  REQUIRE(segmap("-o out ingest " + corpus_flag(), s.dir).code == 0);
  REQUIRE(segmap("-o out extract", s.dir).code == 0);
  REQUIRE(segmap("-o out code decide --term 'racial segregation' --coder c1 --verdict valid", s.dir).code == 0);
  REQUIRE(segmap("-o out code decide --term 'gender segregation' --coder c1 --verdict valid", s.dir).code == 0);
  REQUIRE(segmap("-o out code decide --term 'residential segregation' --coder c1 --verdict invalid", s.dir).code == 0);
  auto o = segmap("-o out code decide --term 'no such segregation' --coder c1 --verdict valid", s.dir);
  CHECK(o.code == 1);
  CHECK(o.err.find("not_found") != std::string::npos);
  REQUIRE(segmap("-o out code export", s.dir).code == 0);
  const std::string forms = slurp(s.dir / "out/code/validated_forms.csv");
  CHECK(forms.find("racial segregation") != std::string::npos);
  CHECK(forms.find("residential segregation") == std::string::npos);
  REQUIRE(segmap("-o out metrics", s.dir).code == 0);
  auto report = json::parse(slurp(s.dir / "out/metrics/report.json"));
  CHECK(report.is_object());
  REQUIRE(segmap("-o out ontology", s.dir).code == 0);
  CHECK(fs::exists(s.dir / "out/ontology/dendrogram.json"));
  CHECK(!fs::exists(s.dir / "out/ontology/labeling.json"));
  write(s.dir / "labels.csv", "cluster,label\n0,Social category\n1,Gender\n");
  REQUIRE(segmap("-o out ontology --n-clusters 2 --cluster-labels labels.csv", s.dir).code == 0);
  CHECK(fs::exists(s.dir / "out/ontology/labeling.json"));
}
