// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <csignal>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "support.hpp"

namespace segmap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Artifact layout under out_dir.
const fs::path kRecords = "corpus/records.jsonl";
const fs::path kCorpusManifest = "corpus/manifest.json";
const fs::path kCandidates = "extract/candidates.jsonl";
const fs::path kValidated = "code/validated.jsonl";
const fs::path kMetricsReport = "metrics/report.json";
const fs::path kConetGraph = "conet/graph.json";
const fs::path kLabeling = "ontology/labeling.json";
const fs::path kReviewLabeling = "review/labeling.json";

struct Run {
  const Config& cfg;
  fs::path out;
  unsigned threads;
  RunManifest manifest;

  Run(const Config& c, const std::string& name)
      : cfg(c),
        out(*c.path("out_dir")),
        threads(static_cast<unsigned>(c.integer("threads"))),
        manifest(name, out, c.effective()) {}

  fs::path at(const fs::path& rel) const { return out / rel; }

  fs::path required_path(const std::string& key, const std::string& why) const {
    auto p = cfg.path(key);
    if (!p) throw ConfigError("config key '" + key + "': required by " + why);
    if (!fs::exists(*p)) throw ConfigError("config key '" + key + "': " + p->string() + " does not exist");
    return *p;
  }

  std::optional<fs::path> optional_path(const std::string& key) const {
    auto p = cfg.path(key);
    if (p && !fs::exists(*p)) throw ConfigError("config key '" + key + "': " + p->string() + " does not exist");
    return p;
  }

  fs::path journal() const {
    auto p = cfg.path("journal");
    return p ? *p : at("code/journal.jsonl");
  }

  std::string policy_json() const {
    return json{{"min_coders", cfg.integer("min_coders")},
                {"require_all_registered", cfg.boolean("require_all_registered")}}
        .dump();
  }

  Corpus corpus() {
    require_artifact(at(kRecords), "ingest");
    require_artifact(at(kCorpusManifest), "ingest");
    manifest.input(at(kRecords));
    manifest.input(at(kCorpusManifest));
    sm_corpus* c = nullptr;
    check(sm_corpus_load(at(kRecords).c_str(), at(kCorpusManifest).c_str(), &c));
    return Corpus(c);
  }

  Candidates load_candidates(const fs::path& p) {
    manifest.input(p);
    sm_candidates* c = nullptr;
    check(sm_candidates_load(p.c_str(), &c));
    return Candidates(c);
  }

  Candidates candidates() {
    require_artifact(at(kCandidates), "extract");
    return load_candidates(at(kCandidates));
  }

  /// The form set selected by forms_source.
  Candidates forms() {
    require_artifact(at(kCandidates), "extract");
    if (cfg.str("forms_source") == "candidates") return load_candidates(at(kCandidates));
    require_artifact(at(kValidated), "code export");
    return load_candidates(at(kValidated));
  }

  void finish(const std::string& summary) {
    manifest.write();
    std::cout << summary << "\n";
  }
};

std::string candidates_terms(const sm_candidates* c) {
  char* s = nullptr;
  check(sm_candidates_terms_json(c, &s));
  return take(s);
}

std::string graph_export(const sm_graph* g, const sm_partition* p, const char* format, const json& opt) {
  char* s = nullptr;
  check(sm_graph_export(g, p, format, opt.dump().c_str(), &s));
  return take(s);
}

Graph load_graph(const fs::path& p) {
  sm_graph* g = nullptr;
  check(sm_graph_load_json(p.c_str(), &g));
  return Graph(g);
}

enum class Algorithm { louvain, slm };

Partition detect(const sm_graph* g, Algorithm algo, const Config& cfg) {
  if (sm_graph_node_count(g) == 0) return Partition();
  sm_partition* p = nullptr;
  if (algo == Algorithm::louvain) {
    check(sm_graph_louvain(g, cfg.u64("seed"), cfg.real("resolution"), &p));
  } else {
    check(sm_graph_slm(g, cfg.u64("seed"), cfg.real("resolution"), &p));
  }
  return Partition(p);
}

json partition_json(const sm_partition* p) {
  if (!p) return nullptr;
  char* s = nullptr;
  check(sm_partition_json(p, &s));
  json j = json::parse(take(s));
  j["count"] = sm_partition_count(p);
  return j;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch != ',') {
      cur += ch;
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  return out;
}

void hash_dir_inputs(RunManifest& m, const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) m.input(f);
}

}  // namespace

void run_ingest(const Config& cfg) {
  Run run(cfg, "ingest");
  const fs::path csv = run.required_path("corpus", "ingest");
  run.manifest.input(csv);
  std::string column_map;
  if (auto cm = run.optional_path("column_map")) {
    run.manifest.input(*cm);
    column_map = read_text(*cm);
  }
  sm_corpus* raw = nullptr;
  check(sm_corpus_ingest(csv.c_str(), column_map.empty() ? nullptr : column_map.c_str(), &raw));
  Corpus all(raw);
  sm_corpus* filtered = nullptr;
  check(sm_corpus_filter(all.get(), cfg.str("anchor").c_str(), &filtered));
  Corpus corpus(filtered);
  fs::create_directories(run.at("corpus"));
  check(sm_corpus_save(corpus.get(), run.at(kRecords).c_str(), run.at(kCorpusManifest).c_str()));
  run.manifest.produced(kRecords);
  run.manifest.produced(kCorpusManifest);
  char* stats = nullptr;
  check(sm_corpus_stats_json(corpus.get(), &stats));
  run.manifest.output("corpus/stats.json", json::parse(take(stats)).dump(2) + "\n");
  char* man = nullptr;
  check(sm_corpus_manifest_json(corpus.get(), &man));
  json m = json::parse(take(man));
  run.finish("ingest: " + std::to_string(sm_corpus_size(corpus.get())) + " records kept of " +
             std::to_string(m.value("rows_read", 0)) + " rows (" + std::to_string(m.value("rows_rejected", 0)) +
             " rejected, " + std::to_string(m.value("filtered_out", 0)) + " without '" + cfg.str("anchor") + "')");
}

void run_extract(const Config& cfg) {
  Run run(cfg, "extract");
  Corpus corpus = run.corpus();
  const fs::path lexdir = run.required_path("lexicon_dir", "extract");
  hash_dir_inputs(run.manifest, lexdir);
  sm_lexicon* lex = nullptr;
  check(sm_lexicon_load_dir(lexdir.c_str(), &lex));
  Lexicon lexicon(lex);
  sm_candidates* out = nullptr;
  check(sm_extract(corpus.get(), cfg.str("anchor").c_str(), lexicon.get(), run.threads, &out));
  Candidates cands(out);
  fs::create_directories(run.at("extract"));
  check(sm_candidates_save(cands.get(), run.at(kCandidates).c_str()));
  run.manifest.produced(kCandidates);
  char* csv = nullptr;
  check(sm_candidates_csv(cands.get(), &csv));
  run.manifest.output("extract/candidates.csv", take(csv));
  run.finish("extract: " + std::to_string(sm_candidates_count(cands.get())) + " candidate forms");
}

void run_code(const Config& cfg, const CodeArgs& args) {
  Run run(cfg, "code." + args.action);
  Candidates cands = run.candidates();
  const fs::path journal = run.journal();
  if (journal.has_parent_path()) fs::create_directories(journal.parent_path());
  sm_codebook* raw = nullptr;
  check(sm_codebook_open(journal.c_str(), cands.get(), run.policy_json().c_str(), &raw));
  CodebookH cb(raw);
  if (fs::exists(journal)) run.manifest.input(journal);

  if (args.action == "import") {
    std::string terms;
    if (args.all) {
      terms = candidates_terms(cands.get());
    } else {
      if (args.terms_file.empty()) throw ConfigError("code import needs --terms FILE or --all");
      run.manifest.input(args.terms_file);
      terms = json(read_lines(args.terms_file)).dump();
    }
    size_t n = 0;
    check(sm_codebook_import(cb.get(), terms.c_str(), args.note.c_str(), &n));
    run.finish("code import: " + std::to_string(n) + " forms marked valid in " + journal.string());
  } else if (args.action == "decide") {
    json d = {{"term", args.term}, {"coder_id", args.coder}, {"verdict", args.verdict}, {"comment", args.comment}};
    if (args.round) d["round"] = *args.round;
    check(sm_codebook_record(cb.get(), d.dump().c_str()));
    run.finish("code decide: recorded " + args.verdict + " for '" + args.term + "' by " + args.coder);
  } else if (args.action == "resolve") {
    json req = {{"resolutions", json::array()}, {"deferred", args.defer}, {"changelog", args.changelog}};
    for (const auto& a : args.accept) {
      auto eq = a.rfind('=');
      if (eq == std::string::npos) throw ConfigError("--resolve expects term=verdict, got '" + a + "'");
      req["resolutions"].push_back({{"term", a.substr(0, eq)}, {"verdict", a.substr(eq + 1)}});
    }
    check(sm_codebook_resolve_round(cb.get(), req.dump().c_str()));
    char* p = nullptr;
    check(sm_codebook_progress_json(cb.get(), &p));
    run.finish("code resolve: " + json::parse(take(p)).dump());
  } else if (args.action == "discrepancies") {
    char* s = nullptr;
    check(sm_codebook_discrepancies_json(cb.get(), &s));
    run.finish(json::parse(take(s)).dump(2));
  } else if (args.action == "stats") {
    char* s = nullptr;
    check(sm_codebook_progress_json(cb.get(), &s));
    std::string text = json::parse(take(s)).dump(2) + "\n";
    run.manifest.output("code/progress.json", text);
    run.finish(text.substr(0, text.size() - 1));
  } else if (args.action == "export") {
    sm_candidates* v = nullptr;
    check(sm_codebook_export_validated(cb.get(), &v));
    Candidates validated(v);
    fs::create_directories(run.at("code"));
    check(sm_candidates_save(validated.get(), run.at(kValidated).c_str()));
    run.manifest.produced(kValidated);
    char* csv = nullptr;
    check(sm_validated_forms_csv(validated.get(), &csv));
    run.manifest.output("code/validated_forms.csv", take(csv));
    char* state = nullptr;
    check(sm_codebook_state_json(cb.get(), &state));
    run.manifest.output("code/state.json", json::parse(take(state)).dump(2) + "\n");
    run.finish("code export: " + std::to_string(sm_candidates_count(validated.get())) + " validated forms");
  } else {
    throw ConfigError("unknown code action '" + args.action + "'");
  }
}

void run_metrics(const Config& cfg) {
  Run run(cfg, "metrics");
  Candidates forms = run.forms();
  Corpus corpus = run.corpus();
  json opt = {{"discipline_universe", cfg.integer("discipline_universe")},
              {"moving_average_window", cfg.integer("moving_average_window")}};
  if (auto pos = run.optional_path("positions")) {
    run.manifest.input(*pos);
    opt["positions"] = pos->string();
  }
  char* s = nullptr;
  check(sm_metrics_report(forms.get(), corpus.get(), opt.dump().c_str(), &s));
  json report = json::parse(take(s));
  run.manifest.output(kMetricsReport, report.dump(2) + "\n");

  std::string long_csv = "series,year,value\n";
  for (const auto& [name, pts] : report["series"].items()) {
    if (pts.is_null()) continue;
    for (const auto& p : pts) {
      long_csv += name + "," + std::to_string(p[0].get<int>()) + "," + p[1].dump() + "\n";
    }
  }
  run.manifest.output("metrics/series.csv", long_csv);

  const std::vector<std::pair<std::string, std::vector<std::string>>> plots = {
      {"forms", {"forms_per_year", "new_forms_per_year"}},
      {"diversity", {"diversity", "diversity_moving_average"}},
      {"multidisciplinarity", {"multidisciplinarity", "multidisciplinarity_moving_average"}},
      {"intersectionality", {"intersectionality_entropy"}},
  };
  for (const auto& [name, series] : plots) {
    json sel = json::object();
    for (const auto& k : series) {
      if (report["series"].contains(k) && !report["series"][k].is_null() && !report["series"][k].empty()) {
        sel[k] = report["series"][k];
      }
    }
    if (sel.empty()) continue;
    char* svg = nullptr;
    check(sm_series_svg(sel.dump().c_str(), json{{"title", name}}.dump().c_str(), &svg));
    run.manifest.output("metrics/" + name + ".svg", take(svg));
  }
  for (const auto& [k, v] : report["notes"].items()) std::cerr << "metrics: note: " << k << ": " << v.get<std::string>() << "\n";
  run.finish("metrics: report over " + std::to_string(report["n_forms"].get<int>()) + " forms");
}

void run_conet(const Config& cfg) {
  Run run(cfg, "conet");
  Candidates forms = run.forms();
  Corpus corpus = run.corpus();
  sm_graph* raw = nullptr;
  check(sm_conet_build(forms.get(), corpus.get(), static_cast<int>(cfg.integer("conet_min_weight")), &raw));
  Graph g(raw);
  run.manifest.seed("seed", cfg.u64("seed"));
  Partition louvain = detect(g.get(), Algorithm::louvain, cfg);
  Partition slm = detect(g.get(), Algorithm::slm, cfg);
  const json opt = {{"with_centrality", true}, {"threads", run.threads}};
  run.manifest.output(kConetGraph, graph_export(g.get(), louvain.get(), "json", opt));
  run.manifest.output("conet/graph.graphml", graph_export(g.get(), louvain.get(), "graphml", opt));
  run.manifest.output("conet/centrality.csv", graph_export(g.get(), louvain.get(), "centrality_csv", opt));
  json summary = {{"nodes", sm_graph_node_count(g.get())},
                  {"edges", sm_graph_edge_count(g.get())},
                  {"louvain", partition_json(louvain.get())},
                  {"slm", partition_json(slm.get())},
                  {"path_dependence", nullptr}};
  double rho = 0, p = 0;
  if (sm_graph_path_dependence(g.get(), run.threads, &rho, &p) == SM_OK) {
    summary["path_dependence"] = {{"rho", rho}, {"p_value", p}};
  } else {
    summary["path_dependence_note"] = sm_last_error();
  }
  json slices = json::array();
  for (int year : cfg.int_list("slice_years")) {
    sm_graph* s = nullptr;
    check(sm_graph_slice(g.get(), year, &s));
    Graph slice(s);
    Partition sp = detect(slice.get(), Algorithm::louvain, cfg);
    const fs::path rel = "conet/slices/" + std::to_string(year) + ".json";
    run.manifest.output(rel, graph_export(slice.get(), sp.get(), "json", opt));
    slices.push_back({{"year", year},
                      {"nodes", sm_graph_node_count(slice.get())},
                      {"edges", sm_graph_edge_count(slice.get())},
                      {"modularity", sp ? json(sm_partition_modularity(sp.get())) : json(nullptr)}});
  }
  summary["slices"] = slices;
  run.manifest.output("conet/summary.json", summary.dump(2) + "\n");
  run.finish("conet: " + std::to_string(sm_graph_node_count(g.get())) + " nodes, " +
             std::to_string(sm_graph_edge_count(g.get())) + " edges");
}

void run_schol(const Config& cfg) {
  Run run(cfg, "schol");
  Corpus corpus = run.corpus();
  run.manifest.seed("seed", cfg.u64("seed"));
  std::string excluded;
  if (auto ex = run.optional_path("cocitation_exclude")) {
    run.manifest.input(*ex);
    excluded = json(read_lines(*ex)).dump();
  }
  const auto top_k = static_cast<size_t>(cfg.integer("top_k"));
  struct Net {
    std::string name;
    std::string count_attr;
    Graph graph;
  };
  std::vector<Net> nets;
  sm_graph* g = nullptr;
  check(sm_schol_cocitation(corpus.get(), static_cast<int>(cfg.integer("min_cocitations")), top_k,
                            excluded.empty() ? nullptr : excluded.c_str(), &g));
  nets.push_back({"cocitation", "citation_count", Graph(g)});
  check(sm_schol_coupling(corpus.get(), static_cast<int>(cfg.integer("coupling_min")), top_k, &g));
  nets.push_back({"coupling", "citations", Graph(g)});
  check(sm_schol_countries(corpus.get(), static_cast<int>(cfg.integer("country_min_docs")), &g));
  nets.push_back({"countries", "doc_count", Graph(g)});

  json summary = json::object();
  std::string line = "schol:";
  for (const auto& net : nets) {
    Partition p = detect(net.graph.get(), Algorithm::slm, cfg);
    const json opt = {{"with_centrality", true}, {"threads", run.threads}, {"count_attr", net.count_attr}};
    run.manifest.output("schol/" + net.name + ".json", graph_export(net.graph.get(), p.get(), "json", opt));
    run.manifest.output("schol/" + net.name + ".graphml", graph_export(net.graph.get(), p.get(), "graphml", opt));
    run.manifest.output("schol/" + net.name + "_nodes.csv", graph_export(net.graph.get(), p.get(), "node_csv", opt));
    summary[net.name] = {{"nodes", sm_graph_node_count(net.graph.get())},
                         {"edges", sm_graph_edge_count(net.graph.get())},
                         {"slm", partition_json(p.get())}};
    line += " " + net.name + " " + std::to_string(sm_graph_node_count(net.graph.get())) + "/" +
            std::to_string(sm_graph_edge_count(net.graph.get()));
  }
  run.manifest.output("schol/summary.json", summary.dump(2) + "\n");
  run.finish(line + " (nodes/edges)");
}

void run_ontology(const Config& cfg) {
  Run run(cfg, "ontology");
  Candidates forms = run.forms();
  json terms = json::parse(candidates_terms(forms.get()));
  if (terms.size() < 2) throw std::runtime_error("ontology needs at least 2 forms, have " + std::to_string(terms.size()));
  DendrogramH dg;
  std::string method;
  if (auto emb = run.optional_path("embeddings")) {
    run.manifest.input(*emb);
    sm_embeddings* e = nullptr;
    check(sm_embeddings_load(emb->c_str(), &e));
    Embeddings table(e);
    char* m = nullptr;
    check(sm_embeddings_missing_json(table.get(), terms.dump().c_str(), &m));
    json missing = json::parse(take(m));
    run.manifest.output("ontology/missing_terms.json", missing.dump(2) + "\n");
    if (!missing.empty()) {
      std::cerr << "ontology: warning: " << missing.size() << " forms have no embedding:";
      for (const auto& t : missing) std::cerr << " '" << t.get<std::string>() << "'";
      std::cerr << "\n";
      json kept = json::array();
      for (const auto& t : terms) {
        if (std::find(missing.begin(), missing.end(), t) == missing.end()) kept.push_back(t);
      }
      terms = kept;
    }
    if (terms.size() < 2) throw std::runtime_error("fewer than 2 forms have embeddings");
    sm_dendrogram* d = nullptr;
    check(sm_dendrogram_cosine(table.get(), terms.dump().c_str(), run.threads, &d));
    dg.reset(d);
    method = "cosine";
  } else {
    sm_dendrogram* d = nullptr;
    check(sm_dendrogram_lexical(terms.dump().c_str(), cfg.str("anchor").c_str(), &d));
    dg.reset(d);
    method = "lexical";
  }
  run.manifest.note("distance", method);
  char* dj = nullptr;
  check(sm_dendrogram_json(dg.get(), &dj));
  run.manifest.output("ontology/dendrogram.json", json::parse(take(dj)).dump(2) + "\n");

  size_t k = 0;
  double dist = 0;
  if (cfg.has("cut_distance")) {
    dist = cfg.real("cut_distance");
  } else {
    k = static_cast<size_t>(cfg.integer("n_clusters"));
    if (k > terms.size()) {
      std::cerr << "ontology: n_clusters " << k << " exceeds the " << terms.size() << " forms; using " << terms.size()
                << "\n";
      k = terms.size();
      run.manifest.note("n_clusters_used", k);
    }
  }
  char* cj = nullptr;
  check(sm_dendrogram_cut(dg.get(), k, dist, &cj));
  json clusters = json::parse(take(cj));
  std::string csv = "term,cluster\n";
  for (size_t i = 0; i < terms.size(); ++i) {
    csv += terms[i].get<std::string>() + "," + std::to_string(clusters[i].get<int>()) + "\n";
  }
  run.manifest.output("ontology/clusters.csv", csv);

  auto cluster_labels = run.optional_path("cluster_labels");
  if (!cluster_labels) {
    run.manifest.note("labeling", "skipped: cluster_labels not set");
    int n_clusters = 0;
    for (const auto& c : clusters) n_clusters = std::max(n_clusters, c.get<int>() + 1);
    run.finish("ontology: " + std::to_string(terms.size()) + " forms in " + std::to_string(n_clusters) + " clusters (" +
               method + "); set cluster_labels to build the type network");
    return;
  }
  run.manifest.input(*cluster_labels);
  auto overrides = run.optional_path("label_overrides");
  auto types = run.optional_path("types");
  if (overrides) run.manifest.input(*overrides);
  if (types) run.manifest.input(*types);
  sm_labeling* l = nullptr;
  check(sm_labeling_apply(terms.dump().c_str(), clusters.dump().c_str(), cluster_labels->c_str(),
                          overrides ? overrides->c_str() : nullptr, types ? types->c_str() : nullptr, &l));
  Labeling labeling(l);
  for (const auto& [rel, format] : std::vector<std::pair<fs::path, const char*>>{
           {kLabeling, "labeling"}, {"ontology/ontology.json", "ontology_json"}, {"ontology/ontology.graphml", "graphml"}}) {
    char* s = nullptr;
    check(sm_labeling_export(labeling.get(), format, &s));
    run.manifest.output(rel, take(s));
  }
  run.finish("ontology: " + std::to_string(terms.size()) + " forms labeled (" + method + ")");
}

void run_serve(const Config& cfg) {
  Run run(cfg, "serve");
  require_artifact(run.at(kCandidates), "extract");
  run.manifest.input(run.at(kCandidates));
  const fs::path journal = run.journal();
  if (journal.has_parent_path()) fs::create_directories(journal.parent_path());
  json opt = {{"journal", journal.string()},
              {"candidates", run.at(kCandidates).string()},
              {"policy", json::parse(run.policy_json())},
              {"host", cfg.str("host")},
              {"port", cfg.integer("port")}};
  if (fs::exists(run.at(kRecords)) && fs::exists(run.at(kCorpusManifest))) {
    opt["corpus_records"] = run.at(kRecords).string();
    opt["corpus_manifest"] = run.at(kCorpusManifest).string();
  }
  // Review edits go to a working copy so the ontology output stays as built.
  if (!fs::exists(run.at(kReviewLabeling)) && fs::exists(run.at(kLabeling))) {
    write_text(run.at(kReviewLabeling), read_text(run.at(kLabeling)));
  }
  if (fs::exists(run.at(kReviewLabeling))) opt["labeling"] = run.at(kReviewLabeling).string();
  if (cfg.has("token")) opt["token"] = cfg.str("token");

  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  sm_server* raw = nullptr;
  int port = 0;
  check(sm_server_start(opt.dump().c_str(), &raw, &port));
  Server server(raw);
  run.manifest.note("port", port);
  run.finish("serve: listening on http://" + cfg.str("host") + ":" + std::to_string(port));
  std::cout.flush();

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    sm_server_stop(server.get());
  });
  sm_status st = sm_server_run(server.get());
  // Wake the waiter if the server ended on its own.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  check(st);
}

void run_export(const Config& cfg, const ExportArgs& args) {
  Run run(cfg, "export");
  const int selected = !args.graph.empty() + !args.plot.empty() + !args.ontology.empty() + args.forms;
  if (selected != 1) throw ConfigError("export needs exactly one of --graph, --plot, --ontology, --forms");
  auto write = [&](const fs::path& default_rel, const std::string& content) {
    if (args.output.empty()) {
      run.manifest.output(default_rel, content);
    } else {
      write_text(args.output, content);
      run.manifest.note("output", {{"path", args.output}, {"sha256", sha256_of(args.output)}});
    }
  };

  if (!args.graph.empty()) {
    fs::path src;
    Algorithm algo = Algorithm::slm;
    std::string count_attr = "doc_count";
    if (args.graph == "conet") {
      src = run.at(kConetGraph);
      require_artifact(src, "conet");
      algo = Algorithm::louvain;
    } else if (args.graph == "cocitation" || args.graph == "coupling" || args.graph == "countries") {
      src = run.at("schol/" + args.graph + ".json");
      require_artifact(src, "schol");
      if (args.graph == "cocitation") count_attr = "citation_count";
      if (args.graph == "coupling") count_attr = "citations";
    } else {
      throw ConfigError("--graph must be conet, cocitation, coupling or countries, got '" + args.graph + "'");
    }
    run.manifest.input(src);
    run.manifest.seed("seed", cfg.u64("seed"));
    Graph g = load_graph(src);
    Partition p = detect(g.get(), algo, cfg);
    json opt = {{"with_centrality", true},
                {"threads", run.threads},
                {"count_attr", count_attr},
                {"min_edge_weight", cfg.real("min_edge_weight")},
                {"min_degree", cfg.integer("min_degree")}};
    const std::string ext = args.format == "graphml" ? "graphml" : args.format == "json" ? "json" : "csv";
    write("exports/" + args.graph + "_" + args.format + "." + ext, graph_export(g.get(), p.get(), args.format.c_str(), opt));
  } else if (!args.plot.empty()) {
    require_artifact(run.at(kMetricsReport), "metrics");
    run.manifest.input(run.at(kMetricsReport));
    json report = json::parse(read_text(run.at(kMetricsReport)));
    json sel = json::object();
    std::string name;
    for (const auto& k : split_list(args.plot)) {
      if (!report["series"].contains(k) || report["series"][k].is_null()) {
        throw ConfigError("--plot: the metrics report has no series '" + k + "'");
      }
      sel[k] = report["series"][k];
      name += (name.empty() ? "" : "+") + k;
    }
    char* svg = nullptr;
    check(sm_series_svg(sel.dump().c_str(), json{{"title", name}}.dump().c_str(), &svg));
    write("exports/" + name + ".svg", take(svg));
  } else if (!args.ontology.empty()) {
    fs::path src = run.at(kReviewLabeling);
    if (!fs::exists(src)) src = run.at(kLabeling);
    require_artifact(src, "ontology");
    run.manifest.input(src);
    sm_labeling* l = nullptr;
    check(sm_labeling_load(src.c_str(), &l));
    Labeling labeling(l);
    char* s = nullptr;
    check(sm_labeling_export(labeling.get(), args.ontology.c_str(), &s));
    write("exports/ontology_" + args.ontology + (args.ontology == "graphml" ? ".graphml" : ".json"), take(s));
  } else {
    Candidates forms = run.forms();
    char* csv = nullptr;
    check(sm_validated_forms_csv(forms.get(), &csv));
    write("exports/forms.csv", take(csv));
  }
  run.finish("export: done");
}

}  // namespace segmap::cli
