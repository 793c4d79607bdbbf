// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C header only.

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <unistd.h>

#include "segmap/segmap.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kFixtures = SEGMAP_FIXTURE_DIR;
const fs::path kData = SEGMAP_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take(char* s) {
  std::string out = s ? s : "";
  sm_string_free(s);
  return out;
}

struct Scratch {
  fs::path dir;
  Scratch() {
    static int n = 0;
    dir = fs::temp_directory_path() / ("segmap-capi-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

sm_candidates* fixture_candidates() {
  sm_corpus* raw = nullptr;
  sm_corpus* filtered = nullptr;
  sm_lexicon* lex = nullptr;
  sm_candidates* cands = nullptr;
  REQUIRE(sm_corpus_ingest((kFixtures / "abstracts20.csv").c_str(), nullptr, &raw) == SM_OK);
  REQUIRE(sm_corpus_filter(raw, "segregation", &filtered) == SM_OK);
  REQUIRE(sm_lexicon_load_dir((kData / "lexicon").c_str(), &lex) == SM_OK);
  REQUIRE(sm_extract(filtered, "segregation", lex, 2, &cands) == SM_OK);
  sm_lexicon_free(lex);
  sm_corpus_free(filtered);
  sm_corpus_free(raw);
  return cands;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(sm_version()) == "0.3.0");
  CHECK(std::string(sm_status_name(SM_OK)) == "ok");
  CHECK(std::string(sm_status_name(SM_ERR_NOT_FOUND)) == "not_found");
}

TEST_CASE("ingest, filter and extract reproduce the golden candidate CSV") {
  sm_corpus* raw = nullptr;
  sm_corpus* filtered = nullptr;
  REQUIRE(sm_corpus_ingest((kFixtures / "abstracts20.csv").c_str(), nullptr, &raw) == SM_OK);
  REQUIRE(sm_corpus_filter(raw, "segregation", &filtered) == SM_OK);
  CHECK(sm_corpus_size(filtered) == 19);
  sm_corpus_free(filtered);
  sm_corpus_free(raw);

  sm_candidates* cands = fixture_candidates();
  char* csv = nullptr;
  REQUIRE(sm_candidates_csv(cands, &csv) == SM_OK);
  CHECK(take(csv) == slurp(kFixtures / "abstracts20_candidates.golden.csv"));

  Scratch s;
  const auto path = s.dir / "candidates.json";
  REQUIRE(sm_candidates_save(cands, path.c_str()) == SM_OK);
  sm_candidates* again = nullptr;
  REQUIRE(sm_candidates_load(path.c_str(), &again) == SM_OK);
  CHECK(sm_candidates_count(again) == sm_candidates_count(cands));
  REQUIRE(sm_candidates_csv(again, &csv) == SM_OK);
  CHECK(take(csv) == slurp(kFixtures / "abstracts20_candidates.golden.csv"));
  sm_candidates_free(again);
  sm_candidates_free(cands);
}

TEST_CASE("errors map to status codes with a message") {
  sm_corpus* c = nullptr;
  CHECK(sm_corpus_ingest("/nonexistent/segmap.csv", nullptr, &c) == SM_ERR_IO);
  CHECK(c == nullptr);
  CHECK(std::string(sm_last_error()).size() > 0);

  CHECK(sm_corpus_ingest((kFixtures / "abstracts20.csv").c_str(), "{not json", &c) == SM_ERR_PARSE);
  CHECK(sm_corpus_ingest(nullptr, nullptr, &c) == SM_ERR_INVALID_ARGUMENT);
  CHECK(std::string(sm_last_error()).find("NULL") != std::string::npos);

  REQUIRE(sm_corpus_ingest((kFixtures / "abstracts20.csv").c_str(), nullptr, &c) == SM_OK);
  CHECK(std::string(sm_last_error()).empty());
  sm_corpus_free(c);

  sm_candidates* cands = fixture_candidates();
  Scratch s;
  sm_codebook* cb = nullptr;
  REQUIRE(sm_codebook_open((s.dir / "journal.jsonl").c_str(), cands, nullptr, &cb) == SM_OK);
  CHECK(sm_codebook_record(cb, R"({"term":"no such segregation","coder_id":"c1","verdict":"valid"})") ==
        SM_ERR_NOT_FOUND);
  CHECK(sm_codebook_record(cb, R"({"term":"racial segregation","coder_id":"c1","verdict":"maybe"})") ==
        SM_ERR_INVALID_ARGUMENT);
  CHECK(sm_codebook_record(cb, R"({"term":"racial segregation","coder_id":"c1","verdict":"valid","round":5})") ==
        SM_ERR_PRECONDITION);
  CHECK(sm_codebook_record(cb, R"({"term":"racial segregation","coder_id":"c1","verdict":"valid"})") == SM_OK);
  sm_codebook_free(cb);
  sm_candidates_free(cands);
}

TEST_CASE("codebook import and export through handles") {
  sm_candidates* cands = fixture_candidates();
  Scratch s;
  sm_codebook* cb = nullptr;
  REQUIRE(sm_codebook_open((s.dir / "journal.jsonl").c_str(), cands, nullptr, &cb) == SM_OK);
  size_t imported = 0;
  REQUIRE(sm_codebook_import(cb, R"(["racial segregation","residential segregation"])", "seed", &imported) == SM_OK);
  CHECK(imported == 2);
  sm_candidates* valid = nullptr;
  REQUIRE(sm_codebook_export_validated(cb, &valid) == SM_OK);
  char* terms = nullptr;
  REQUIRE(sm_candidates_terms_json(valid, &terms) == SM_OK);
  CHECK(json::parse(take(terms)) == json{"racial segregation", "residential segregation"});
  sm_candidates_free(valid);
  sm_codebook_free(cb);

  // Reopening replays the journal.
  REQUIRE(sm_codebook_open((s.dir / "journal.jsonl").c_str(), cands, nullptr, &cb) == SM_OK);
  char* progress = nullptr;
  REQUIRE(sm_codebook_progress_json(cb, &progress) == SM_OK);
  CHECK(json::parse(take(progress)).at("by_status").at("valid") == 2);
  sm_codebook_free(cb);
  sm_candidates_free(cands);
}

TEST_CASE("entropy and Spearman scalars") {
  const double w[] = {1, 1, 1, 1};
  double h = 0;
  REQUIRE(sm_entropy(w, 4, &h) == SM_OK);
  CHECK(h == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  const double neg[] = {1, -1};
  CHECK(sm_entropy(neg, 2, &h) == SM_ERR_INVALID_ARGUMENT);

  const double x[] = {1, 2, 3, 4, 5};
  const double y[] = {2, 1, 4, 3, 5};
  double rho = 0, p = 0;
  REQUIRE(sm_spearman(x, y, 5, &rho, &p) == SM_OK);
  CHECK(rho == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(p > 0.0);
  CHECK(p < 1.0);
}

TEST_CASE("embeddings JSONL, dendrogram and labeling") {
  Scratch s;
  const auto path = s.dir / "embeddings.jsonl";
  {
    std::ofstream out(path);
    out << R"({"dimension":3,"model_tag":"test"})" << "\n"
        << R"({"term":"racial segregation","vector":[1,0,0]})" << "\n"
        << R"({"term":"ethnic segregation","vector":[0.9,0.1,0]})" << "\n"
        << R"({"term":"residential segregation","vector":[0,1,0]})" << "\n"
        << R"({"term":"urban segregation","vector":[0,0.9,0.1]})" << "\n";
  }
  sm_embeddings* e = nullptr;
  REQUIRE(sm_embeddings_load(path.c_str(), &e) == SM_OK);
  char* missing = nullptr;
  REQUIRE(sm_embeddings_missing_json(e, R"(["racial segregation","gender segregation"])", &missing) == SM_OK);
  CHECK(json::parse(take(missing)) == json{"gender segregation"});

  const char* terms = R"(["racial segregation","ethnic segregation","residential segregation","urban segregation"])";
  sm_dendrogram* d = nullptr;
  REQUIRE(sm_dendrogram_cosine(e, terms, 1, &d) == SM_OK);
  char* cut = nullptr;
  REQUIRE(sm_dendrogram_cut(d, 2, 0.0, &cut) == SM_OK);
  auto clusters = json::parse(take(cut)).get<std::vector<int>>();
  REQUIRE(clusters.size() == 4);
  CHECK(clusters[0] == clusters[1]);
  CHECK(clusters[2] == clusters[3]);
  CHECK(clusters[0] != clusters[2]);
  CHECK(sm_dendrogram_cut(d, 9, 0.0, &cut) == SM_ERR_INVALID_ARGUMENT);

  const auto labels = s.dir / "cluster_labels.csv";
  {
    std::ofstream out(labels);
    out << "cluster,label\n" << clusters[0] << ",Social category\n" << clusters[2] << ",Space\n";
  }
  const std::string cj = json(clusters).dump();
  sm_labeling* l = nullptr;
  REQUIRE(sm_labeling_apply(terms, cj.c_str(), labels.c_str(), nullptr, nullptr, &l) == SM_OK);
  char* onto = nullptr;
  REQUIRE(sm_labeling_export(l, "ontology_json", &onto) == SM_OK);
  CHECK(!json::parse(take(onto)).empty());
  CHECK(sm_labeling_export(l, "pdf", &onto) == SM_ERR_INVALID_ARGUMENT);
  const auto saved = s.dir / "labeling.json";
  REQUIRE(sm_labeling_save(l, saved.c_str()) == SM_OK);
  sm_labeling* back = nullptr;
  REQUIRE(sm_labeling_load(saved.c_str(), &back) == SM_OK);
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(sm_labeling_export(l, "labeling", &a) == SM_OK);
  REQUIRE(sm_labeling_export(back, "labeling", &b) == SM_OK);
  CHECK(take(a) == take(b));
  sm_labeling_free(back);
  sm_labeling_free(l);
  sm_dendrogram_free(d);
  sm_embeddings_free(e);

  const auto bad = s.dir / "bad.jsonl";
  {
    std::ofstream out(bad);
    out << R"({"dimension":2,"model_tag":"test"})" << "\n"
        << R"({"term":"a segregation","vector":[1,0]})" << "\n" << R"({"term":"b segregation","vector":[1]})" << "\n";
  }
  CHECK(sm_embeddings_load(bad.c_str(), &e) == SM_ERR_PARSE);
}

TEST_CASE("co-occurrence network through handles") {
  sm_candidates* cands = fixture_candidates();
  sm_corpus* raw = nullptr;
  REQUIRE(sm_corpus_ingest((kFixtures / "abstracts20.csv").c_str(), nullptr, &raw) == SM_OK);
  sm_graph* g = nullptr;
  REQUIRE(sm_conet_build(cands, raw, 1, &g) == SM_OK);
  CHECK(sm_graph_node_count(g) > 0);
  sm_partition* p = nullptr;
  if (sm_graph_edge_count(g) > 0) {
    REQUIRE(sm_graph_louvain(g, 42, 1.0, &p) == SM_OK);
    CHECK(sm_partition_count(p) >= 1);
    char* exported = nullptr;
    REQUIRE(sm_graph_export(g, p, "json", nullptr, &exported) == SM_OK);
    CHECK(json::parse(take(exported)).contains("nodes"));
    sm_partition_free(p);
  }
  char* ref = nullptr;
  REQUIRE(sm_normalize_reference("Massey, D. S. (1988). The dimensions of residential segregation.", &ref) == SM_OK);
  CHECK(json::parse(take(ref)).at("key") == "massey|1988|the|dimensions|of|residential|segregation");
  sm_graph_free(g);
  sm_corpus_free(raw);
  sm_candidates_free(cands);
}

TEST_CASE("server starts on an ephemeral port and stops") {
  sm_candidates* cands = fixture_candidates();
  Scratch s;
  const auto cpath = s.dir / "candidates.json";
  REQUIRE(sm_candidates_save(cands, cpath.c_str()) == SM_OK);
  sm_candidates_free(cands);

  json opts = {{"candidates", cpath.string()}, {"journal", (s.dir / "journal.jsonl").string()}, {"port", 0}};
  sm_server* srv = nullptr;
  int port = 0;
  REQUIRE(sm_server_start(opts.dump().c_str(), &srv, &port) == SM_OK);
  REQUIRE(port > 0);
  sm_status run_status = SM_ERR_INTERNAL;
  std::thread t([&] { run_status = sm_server_run(srv); });

  httplib::Client cli("127.0.0.1", port);
  httplib::Result health;
  for (int i = 0; i < 50 && !health; ++i) {
    health = cli.Get("/health");
    if (!health) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  REQUIRE(health);
  CHECK(health->status == 200);
  auto r = cli.Post("/decisions", R"({"term":"no such segregation","coder_id":"c1","verdict":"valid"})",
                    "application/json");
  REQUIRE(r);
  CHECK(r->status == 404);

  sm_server_stop(srv);
  t.join();
  CHECK(run_status == SM_OK);
  sm_server_free(srv);

  CHECK(sm_server_start(R"({"port":0})", &srv, &port) == SM_ERR_INVALID_ARGUMENT);
}
