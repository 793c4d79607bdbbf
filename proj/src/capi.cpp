// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/segmap.h"

#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "segmap/codebook.hpp"
#include "segmap/community.hpp"
#include "segmap/conet.hpp"
#include "segmap/corpus.hpp"
#include "segmap/error.hpp"
#include "segmap/extract.hpp"
#include "segmap/hashing.hpp"
#include "segmap/metrics.hpp"
#include "segmap/ontology.hpp"
#include "segmap/plot.hpp"
#include "segmap/report.hpp"
#include "segmap/scholnet.hpp"
#include "segmap/serve.hpp"

using nlohmann::json;

struct sm_corpus {
  segmap::CorpusStore store;
};
struct sm_lexicon {
  segmap::StopLexicon lexicon;
};
struct sm_candidates {
  segmap::CandidateSet set;
};
struct sm_codebook {
  std::unique_ptr<segmap::Codebook> codebook;
};
struct sm_graph {
  segmap::WeightedGraph graph;
};
struct sm_partition {
  segmap::CommunityPartition partition;
};
struct sm_embeddings {
  segmap::EmbeddingTable table;
};
struct sm_dendrogram {
  segmap::Dendrogram dendrogram;
};
struct sm_labeling {
  segmap::TypeLabeling labeling;
};
struct sm_server {
  std::unique_ptr<segmap::CorpusStore> store;
  std::unique_ptr<segmap::Codebook> codebook;
  std::unique_ptr<segmap::LabelingStore> labeling;
  std::unique_ptr<segmap::ReviewServer> server;
};

namespace {

thread_local std::string g_last_error;

sm_status status_of(segmap::ErrorKind k) {
  switch (k) {
    case segmap::ErrorKind::invalid_argument: return SM_ERR_INVALID_ARGUMENT;
    case segmap::ErrorKind::io: return SM_ERR_IO;
    case segmap::ErrorKind::parse: return SM_ERR_PARSE;
    case segmap::ErrorKind::not_found: return SM_ERR_NOT_FOUND;
    case segmap::ErrorKind::precondition: return SM_ERR_PRECONDITION;
    case segmap::ErrorKind::conflict: return SM_ERR_CONFLICT;
  }
  return SM_ERR_INTERNAL;
}

template <class Fn>
sm_status wrap(Fn fn) {
  g_last_error.clear();
  try {
    fn();
    return SM_OK;
  } catch (const segmap::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    g_last_error = std::string("JSON: ") + e.what();
    return SM_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SM_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (!p) throw segmap::Error(segmap::ErrorKind::invalid_argument, std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void put(char** out, const std::string& s) {
  require(out, "out");
  *out = dup_string(s);
}

json parse_json(const char* text, const char* what) {
  if (!text) return nullptr;
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw segmap::Error(segmap::ErrorKind::parse, std::string(what) + ": " + e.what());
  }
}

std::vector<std::string> string_array(const char* text, const char* what) {
  json j = parse_json(text, what);
  if (!j.is_array()) throw segmap::Error(segmap::ErrorKind::invalid_argument, std::string(what) + " must be a JSON array");
  return j.get<std::vector<std::string>>();
}

}  // namespace

extern "C" {

const char* sm_version(void) { return SEGMAP_VERSION; }
const char* sm_last_error(void) { return g_last_error.c_str(); }

const char* sm_status_name(sm_status s) {
  switch (s) {
    case SM_OK: return "ok";
    case SM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SM_ERR_IO: return "io";
    case SM_ERR_PARSE: return "parse";
    case SM_ERR_NOT_FOUND: return "not_found";
    case SM_ERR_PRECONDITION: return "precondition";
    case SM_ERR_CONFLICT: return "conflict";
    case SM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void sm_string_free(char* s) { std::free(s); }

sm_status sm_sha256_file(const char* path, char** out_hex) {
  return wrap([&] {
    require(path, "path");
    put(out_hex, segmap::sha256_file(path));
  });
}

// ---- corpus

sm_status sm_corpus_ingest(const char* csv_path, const char* column_map_json, sm_corpus** out) {
  return wrap([&] {
    require(csv_path, "csv_path");
    require(out, "out");
    std::optional<segmap::ColumnMap> cols;
    if (column_map_json) cols = segmap::ColumnMap::from_json(parse_json(column_map_json, "column map"));
    auto c = std::make_unique<sm_corpus>();
    if (cols) {
      c->store = segmap::ingest_csv(csv_path, *cols);
    } else {
      c->store = segmap::ingest_csv_text(segmap::read_file(csv_path), std::nullopt, csv_path);
    }
    *out = c.release();
  });
}

sm_status sm_corpus_filter(const sm_corpus* c, const char* anchor, sm_corpus** out) {
  return wrap([&] {
    require(c, "corpus");
    require(anchor, "anchor");
    require(out, "out");
    auto r = std::make_unique<sm_corpus>();
    r->store = segmap::filter_by_anchor(c->store, anchor);
    *out = r.release();
  });
}

sm_status sm_corpus_save(const sm_corpus* c, const char* records_path, const char* manifest_path) {
  return wrap([&] {
    require(c, "corpus");
    require(records_path, "records_path");
    require(manifest_path, "manifest_path");
    segmap::save_store(c->store, records_path, manifest_path);
  });
}

sm_status sm_corpus_load(const char* records_path, const char* manifest_path, sm_corpus** out) {
  return wrap([&] {
    require(records_path, "records_path");
    require(manifest_path, "manifest_path");
    require(out, "out");
    auto c = std::make_unique<sm_corpus>();
    c->store = segmap::load_store(records_path, manifest_path);
    *out = c.release();
  });
}

sm_status sm_corpus_manifest_json(const sm_corpus* c, char** out_json) {
  return wrap([&] {
    require(c, "corpus");
    put(out_json, c->store.manifest().to_json().dump());
  });
}

sm_status sm_corpus_stats_json(const sm_corpus* c, char** out_json) {
  return wrap([&] {
    require(c, "corpus");
    put(out_json, segmap::corpus_stats(c->store).to_json().dump());
  });
}

size_t sm_corpus_size(const sm_corpus* c) { return c ? c->store.size() : 0; }
void sm_corpus_free(sm_corpus* c) { delete c; }

// ---- extraction

sm_status sm_lexicon_load_dir(const char* dir, sm_lexicon** out) {
  return wrap([&] {
    require(dir, "dir");
    require(out, "out");
    auto l = std::make_unique<sm_lexicon>();
    l->lexicon = segmap::StopLexicon::load_dir(dir);
    *out = l.release();
  });
}

void sm_lexicon_free(sm_lexicon* l) { delete l; }

sm_status sm_extract(const sm_corpus* c, const char* anchor, const sm_lexicon* l, unsigned threads,
                     sm_candidates** out) {
  return wrap([&] {
    require(c, "corpus");
    require(anchor, "anchor");
    require(l, "lexicon");
    require(out, "out");
    auto r = std::make_unique<sm_candidates>();
    r->set = segmap::run_extraction(c->store, anchor, l->lexicon, threads);
    *out = r.release();
  });
}

sm_status sm_candidates_load(const char* path, sm_candidates** out) {
  return wrap([&] {
    require(path, "path");
    require(out, "out");
    auto r = std::make_unique<sm_candidates>();
    r->set = segmap::load_candidates(path);
    *out = r.release();
  });
}

sm_status sm_candidates_save(const sm_candidates* c, const char* path) {
  return wrap([&] {
    require(c, "candidates");
    require(path, "path");
    segmap::save_candidates(c->set, path);
  });
}

sm_status sm_candidates_csv(const sm_candidates* c, char** out_csv) {
  return wrap([&] {
    require(c, "candidates");
    put(out_csv, segmap::candidate_csv(c->set));
  });
}

sm_status sm_validated_forms_csv(const sm_candidates* c, char** out_csv) {
  return wrap([&] {
    require(c, "candidates");
    put(out_csv, segmap::validated_forms_csv(c->set));
  });
}

sm_status sm_candidates_terms_json(const sm_candidates* c, char** out_json) {
  return wrap([&] {
    require(c, "candidates");
    json terms = json::array();
    for (const auto& x : c->set) terms.push_back(x.term());
    put(out_json, terms.dump());
  });
}

size_t sm_candidates_count(const sm_candidates* c) { return c ? c->set.size() : 0; }
void sm_candidates_free(sm_candidates* c) { delete c; }

// ---- codebook

sm_status sm_codebook_open(const char* journal_path, const sm_candidates* c, const char* policy_json,
                           sm_codebook** out) {
  return wrap([&] {
    require(journal_path, "journal_path");
    require(c, "candidates");
    require(out, "out");
    auto policy = segmap::ConsensusPolicy::from_json(parse_json(policy_json, "policy"));
    auto cb = std::make_unique<sm_codebook>();
    cb->codebook = std::make_unique<segmap::Codebook>(journal_path, c->set, policy);
    *out = cb.release();
  });
}

sm_status sm_codebook_record(sm_codebook* cb, const char* decision_json) {
  return wrap([&] {
    require(cb, "codebook");
    require(decision_json, "decision_json");
    json j = parse_json(decision_json, "decision");
    segmap::CodingDecision d;
    d.term = j.at("term").get<std::string>();
    d.coder_id = j.at("coder_id").get<std::string>();
    d.verdict = segmap::parse_verdict(j.at("verdict").get<std::string>());
    d.round = j.contains("round") ? j["round"].get<int>() : cb->codebook->snapshot().open_round();
    d.comment = j.value("comment", "");
    d.timestamp = j.value("timestamp", "");
    cb->codebook->record(std::move(d));
  });
}

sm_status sm_codebook_resolve_round(sm_codebook* cb, const char* request_json) {
  return wrap([&] {
    require(cb, "codebook");
    json j = parse_json(request_json, "resolve request");
    if (j.is_null()) j = json::object();
    std::vector<segmap::Resolution> res;
    for (const auto& r : j.value("resolutions", json::array())) {
      res.push_back({r.at("term").get<std::string>(), segmap::parse_verdict(r.at("verdict").get<std::string>()),
                     r.value("note", "")});
    }
    auto deferred = j.value("deferred", std::vector<std::string>{});
    cb->codebook->resolve_round(res, deferred, j.value("changelog", ""));
  });
}

sm_status sm_codebook_import(sm_codebook* cb, const char* terms_json, const char* note, size_t* imported) {
  return wrap([&] {
    require(cb, "codebook");
    auto terms = string_array(terms_json, "terms");
    size_t n = cb->codebook->import_valid(terms, note ? note : "imported");
    if (imported) *imported = n;
  });
}

sm_status sm_codebook_discrepancies_json(const sm_codebook* cb, char** out_json) {
  return wrap([&] {
    require(cb, "codebook");
    auto state = cb->codebook->snapshot();
    json items = json::array();
    for (const auto& term : state.discrepancies()) {
      json ds = json::array();
      for (const auto& [coder, d] : state.latest(term)) {
        ds.push_back({{"coder_id", coder}, {"verdict", segmap::to_string(d.verdict)}, {"comment", d.comment},
                      {"round", d.round}});
      }
      items.push_back({{"term", term}, {"decisions", ds}});
    }
    put(out_json, json{{"round", state.open_round()}, {"count", items.size()}, {"items", items}}.dump());
  });
}

sm_status sm_codebook_progress_json(const sm_codebook* cb, char** out_json) {
  return wrap([&] {
    require(cb, "codebook");
    put(out_json, cb->codebook->progress().dump());
  });
}

sm_status sm_codebook_state_json(const sm_codebook* cb, char** out_json) {
  return wrap([&] {
    require(cb, "codebook");
    put(out_json, cb->codebook->state_json().dump());
  });
}

sm_status sm_codebook_export_validated(const sm_codebook* cb, sm_candidates** out) {
  return wrap([&] {
    require(cb, "codebook");
    require(out, "out");
    auto r = std::make_unique<sm_candidates>();
    r->set = cb->codebook->export_validated();
    *out = r.release();
  });
}

void sm_codebook_free(sm_codebook* cb) { delete cb; }

// ---- metrics

sm_status sm_metrics_report(const sm_candidates* forms, const sm_corpus* c, const char* options_json,
                            char** out_json) {
  return wrap([&] {
    require(forms, "forms");
    require(c, "corpus");
    auto opt = segmap::MetricsOptions::from_json(parse_json(options_json, "options"));
    put(out_json, segmap::metrics_report(forms->set, c->store, opt).dump());
  });
}

sm_status sm_series_svg(const char* series_json, const char* options_json, char** out_svg) {
  return wrap([&] {
    json s = parse_json(series_json, "series");
    if (!s.is_object()) throw segmap::Error(segmap::ErrorKind::invalid_argument, "series must be a JSON object");
    std::vector<std::pair<std::string, segmap::YearSeries>> series;
    for (const auto& [name, pts] : s.items()) series.emplace_back(name, segmap::series_from_json(pts));
    segmap::PlotOptions opt;
    json o = parse_json(options_json, "options");
    if (o.is_object()) {
      opt.title = o.value("title", "");
      opt.y_label = o.value("y_label", "");
    }
    put(out_svg, segmap::line_plot_svg(series, opt));
  });
}

sm_status sm_entropy(const double* weights, size_t n, double* out) {
  return wrap([&] {
    require(weights, "weights");
    require(out, "out");
    *out = segmap::shannon_entropy(std::span<const double>(weights, n));
  });
}

sm_status sm_spearman(const double* x, const double* y, size_t n, double* rho, double* p_value) {
  return wrap([&] {
    require(x, "x");
    require(y, "y");
    auto r = segmap::spearman(std::span<const double>(x, n), std::span<const double>(y, n));
    if (rho) *rho = r.rho;
    if (p_value) *p_value = r.p_value;
  });
}

// ---- graphs

namespace {

sm_graph* new_graph(segmap::WeightedGraph g) {
  auto r = std::make_unique<sm_graph>();
  r->graph = std::move(g);
  return r.release();
}

}  // namespace

sm_status sm_conet_build(const sm_candidates* forms, const sm_corpus* c, int min_weight, sm_graph** out) {
  return wrap([&] {
    require(forms, "forms");
    require(c, "corpus");
    require(out, "out");
    if (min_weight < 1) throw segmap::Error(segmap::ErrorKind::invalid_argument, "min_weight must be >= 1");
    *out = new_graph(segmap::build_cooccurrence(forms->set, c->store, min_weight));
  });
}

sm_status sm_graph_slice(const sm_graph* g, int up_to_year, sm_graph** out) {
  return wrap([&] {
    require(g, "graph");
    require(out, "out");
    *out = new_graph(segmap::temporal_slice(g->graph, up_to_year));
  });
}

sm_status sm_schol_cocitation(const sm_corpus* c, int min_cocitations, size_t top_k, const char* excluded_keys_json,
                              sm_graph** out) {
  return wrap([&] {
    require(c, "corpus");
    require(out, "out");
    segmap::CocitationOptions opt;
    opt.min_cocitations = min_cocitations;
    opt.top_k = top_k;
    if (excluded_keys_json) {
      for (const auto& k : string_array(excluded_keys_json, "excluded keys")) {
        opt.excluded_keys.insert(segmap::normalize_reference(k).key);
      }
    }
    *out = new_graph(segmap::build_cocitation(c->store, opt));
  });
}

sm_status sm_schol_coupling(const sm_corpus* c, int min_citations, size_t top_k, sm_graph** out) {
  return wrap([&] {
    require(c, "corpus");
    require(out, "out");
    *out = new_graph(segmap::build_coupling(c->store, min_citations, top_k));
  });
}

sm_status sm_schol_countries(const sm_corpus* c, int min_docs, sm_graph** out) {
  return wrap([&] {
    require(c, "corpus");
    require(out, "out");
    *out = new_graph(segmap::build_coauthorship_countries(c->store, min_docs));
  });
}

sm_status sm_normalize_reference(const char* raw, char** out_json) {
  return wrap([&] {
    require(raw, "raw");
    auto k = segmap::normalize_reference(raw);
    put(out_json, json{{"key", k.key}, {"parsed", k.parsed}}.dump());
  });
}

sm_status sm_graph_load_json(const char* path, sm_graph** out) {
  return wrap([&] {
    require(path, "path");
    require(out, "out");
    *out = new_graph(segmap::graph_from_json(parse_json(segmap::read_file(path).c_str(), path)));
  });
}

size_t sm_graph_node_count(const sm_graph* g) { return g ? g->graph.node_count() : 0; }
size_t sm_graph_edge_count(const sm_graph* g) { return g ? g->graph.edge_count() : 0; }

sm_status sm_graph_centralities_json(const sm_graph* g, unsigned threads, char** out_json) {
  return wrap([&] {
    require(g, "graph");
    auto t = segmap::centralities(g->graph, threads);
    json rows = json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
      rows.push_back({{"id", g->graph.nodes()[i].id},
                      {"degree", t[i].degree},
                      {"weighted_degree", t[i].weighted_degree},
                      {"betweenness", t[i].betweenness}});
    }
    put(out_json, rows.dump());
  });
}

sm_status sm_graph_path_dependence(const sm_graph* g, unsigned threads, double* rho, double* p_value) {
  return wrap([&] {
    require(g, "graph");
    auto r = segmap::path_dependence(g->graph, segmap::centralities(g->graph, threads));
    if (rho) *rho = r.rho;
    if (p_value) *p_value = r.p_value;
  });
}

sm_status sm_graph_louvain(const sm_graph* g, uint64_t seed, double resolution, sm_partition** out) {
  return wrap([&] {
    require(g, "graph");
    require(out, "out");
    auto p = std::make_unique<sm_partition>();
    p->partition = segmap::louvain(g->graph, seed, resolution);
    *out = p.release();
  });
}

sm_status sm_graph_slm(const sm_graph* g, uint64_t seed, double resolution, sm_partition** out) {
  return wrap([&] {
    require(g, "graph");
    require(out, "out");
    auto p = std::make_unique<sm_partition>();
    p->partition = segmap::slm_cluster(g->graph, seed, resolution);
    *out = p.release();
  });
}

sm_status sm_graph_export(const sm_graph* g, const sm_partition* p, const char* format, const char* options_json,
                          char** out) {
  return wrap([&] {
    require(g, "graph");
    require(format, "format");
    json o = parse_json(options_json, "options");
    if (o.is_null()) o = json::object();
    const segmap::CommunityPartition* part = p ? &p->partition : nullptr;
    if (part && part->community.size() != g->graph.node_count()) {
      throw segmap::Error(segmap::ErrorKind::invalid_argument, "partition does not match the graph");
    }
    std::optional<segmap::CentralityTable> table;
    const std::string f = format;
    if (o.value("with_centrality", false) || f == "centrality_csv") {
      table = segmap::centralities(g->graph, o.value("threads", 0u));
    }
    segmap::GraphExportOptions eo;
    eo.partition = part;
    eo.centrality = table ? &*table : nullptr;
    eo.min_edge_weight = o.value("min_edge_weight", 0.0);
    eo.min_degree = o.value("min_degree", std::size_t{0});
    if (f == "json") {
      put(out, segmap::graph_to_json(g->graph, eo).dump(2) + "\n");
    } else if (f == "graphml") {
      put(out, segmap::graph_to_graphml(g->graph, eo));
    } else if (f == "centrality_csv") {
      put(out, segmap::centrality_csv(g->graph, *table, part));
    } else if (f == "node_csv") {
      put(out, segmap::scholnet_node_csv(g->graph, o.value("count_attr", "doc_count"), part));
    } else {
      throw segmap::Error(segmap::ErrorKind::invalid_argument, "unknown export format '" + f + "'");
    }
  });
}

void sm_graph_free(sm_graph* g) { delete g; }

double sm_partition_modularity(const sm_partition* p) { return p ? p->partition.modularity : 0.0; }
size_t sm_partition_count(const sm_partition* p) { return p ? p->partition.community_count() : 0; }

sm_status sm_partition_json(const sm_partition* p, char** out_json) {
  return wrap([&] {
    require(p, "partition");
    put(out_json, json{{"modularity", p->partition.modularity}, {"community", p->partition.community}}.dump());
  });
}

void sm_partition_free(sm_partition* p) { delete p; }

// ---- ontology

sm_status sm_embeddings_load(const char* path, sm_embeddings** out) {
  return wrap([&] {
    require(path, "path");
    require(out, "out");
    auto e = std::make_unique<sm_embeddings>();
    e->table = segmap::load_embeddings(path);
    *out = e.release();
  });
}

sm_status sm_embeddings_missing_json(const sm_embeddings* e, const char* terms_json, char** out_json) {
  return wrap([&] {
    require(e, "embeddings");
    put(out_json, json(segmap::missing_terms(e->table, string_array(terms_json, "terms"))).dump());
  });
}

void sm_embeddings_free(sm_embeddings* e) { delete e; }

sm_status sm_dendrogram_cosine(const sm_embeddings* e, const char* terms_json, unsigned threads,
                               sm_dendrogram** out) {
  return wrap([&] {
    require(e, "embeddings");
    require(out, "out");
    auto table = terms_json ? e->table.select(string_array(terms_json, "terms")) : e->table;
    auto d = std::make_unique<sm_dendrogram>();
    d->dendrogram = segmap::agglomerative_complete(segmap::cosine_distance_matrix(table, threads));
    *out = d.release();
  });
}

sm_status sm_dendrogram_lexical(const char* terms_json, const char* anchor, sm_dendrogram** out) {
  return wrap([&] {
    require(out, "out");
    auto d = std::make_unique<sm_dendrogram>();
    d->dendrogram = segmap::agglomerative_complete(
        segmap::lexical_fallback_similarity(string_array(terms_json, "terms"), anchor ? anchor : "segregation"));
    *out = d.release();
  });
}

sm_status sm_dendrogram_cut(const sm_dendrogram* d, size_t n_clusters, double distance, char** out_json) {
  return wrap([&] {
    require(d, "dendrogram");
    segmap::CutCriterion c;
    if (n_clusters > 0) {
      c.n_clusters = n_clusters;
    } else {
      c.distance = distance;
    }
    put(out_json, json(segmap::cut_dendrogram(d->dendrogram, c)).dump());
  });
}

sm_status sm_dendrogram_json(const sm_dendrogram* d, char** out_json) {
  return wrap([&] {
    require(d, "dendrogram");
    put(out_json, d->dendrogram.to_json().dump());
  });
}

void sm_dendrogram_free(sm_dendrogram* d) { delete d; }

sm_status sm_labeling_apply(const char* terms_json, const char* clusters_json, const char* cluster_labels_csv,
                            const char* overrides_csv, const char* types_path, sm_labeling** out) {
  return wrap([&] {
    require(out, "out");
    auto terms = string_array(terms_json, "terms");
    json cj = parse_json(clusters_json, "clusters");
    if (!cj.is_array()) throw segmap::Error(segmap::ErrorKind::invalid_argument, "clusters must be a JSON array");
    auto clusters = cj.get<std::vector<int>>();
    std::map<int, std::string> cluster_labels;
    if (cluster_labels_csv) cluster_labels = segmap::parse_cluster_labels(segmap::read_file(cluster_labels_csv));
    std::map<std::string, std::vector<std::string>> overrides;
    if (overrides_csv) overrides = segmap::parse_label_overrides(segmap::read_file(overrides_csv));
    std::optional<std::set<std::string>> universe;
    if (types_path) universe = segmap::parse_type_universe(segmap::read_file(types_path));
    auto l = std::make_unique<sm_labeling>();
    l->labeling = segmap::apply_labeling(terms, clusters, cluster_labels, overrides, universe);
    *out = l.release();
  });
}

sm_status sm_labeling_load(const char* path, sm_labeling** out) {
  return wrap([&] {
    require(path, "path");
    require(out, "out");
    auto l = std::make_unique<sm_labeling>();
    l->labeling = segmap::TypeLabeling::from_json(parse_json(segmap::read_file(path).c_str(), path));
    *out = l.release();
  });
}

sm_status sm_labeling_save(const sm_labeling* l, const char* path) {
  return wrap([&] {
    require(l, "labeling");
    require(path, "path");
    segmap::write_file_atomic(path, l->labeling.to_json().dump(2) + "\n");
  });
}

sm_status sm_labeling_export(const sm_labeling* l, const char* format, char** out) {
  return wrap([&] {
    require(l, "labeling");
    require(format, "format");
    const std::string f = format;
    if (f == "labeling") {
      put(out, l->labeling.to_json().dump(2) + "\n");
    } else if (f == "ontology_json") {
      put(out, segmap::type_network(l->labeling).to_json().dump(2) + "\n");
    } else if (f == "graphml") {
      put(out, segmap::graph_to_graphml(segmap::type_network(l->labeling).to_graph()));
    } else {
      throw segmap::Error(segmap::ErrorKind::invalid_argument, "unknown labeling export format '" + f + "'");
    }
  });
}

void sm_labeling_free(sm_labeling* l) { delete l; }

// ---- serve

sm_status sm_server_start(const char* options_json, sm_server** out, int* bound_port) {
  return wrap([&] {
    require(out, "out");
    json o = parse_json(options_json, "serve options");
    if (!o.is_object()) throw segmap::Error(segmap::ErrorKind::invalid_argument, "serve options must be an object");
    if (!o.contains("journal") || !o.contains("candidates")) {
      throw segmap::Error(segmap::ErrorKind::invalid_argument, "serve options need 'journal' and 'candidates'");
    }
    auto s = std::make_unique<sm_server>();
    segmap::ServeContext ctx;
    ctx.candidates = segmap::load_candidates(o["candidates"].get<std::string>());
    auto policy = segmap::ConsensusPolicy::from_json(o.value("policy", json(nullptr)));
    s->codebook = std::make_unique<segmap::Codebook>(o["journal"].get<std::string>(), ctx.candidates, policy);
    ctx.codebook = s->codebook.get();
    if (o.contains("corpus_records") && o.contains("corpus_manifest")) {
      s->store = std::make_unique<segmap::CorpusStore>(
          segmap::load_store(o["corpus_records"].get<std::string>(), o["corpus_manifest"].get<std::string>()));
      ctx.store = s->store.get();
    }
    if (o.contains("labeling") && !o["labeling"].is_null()) {
      s->labeling = segmap::LabelingStore::open(o["labeling"].get<std::string>());
      ctx.labeling = s->labeling.get();
    }
    if (o.contains("token") && !o["token"].is_null() && !o["token"].get<std::string>().empty()) {
      ctx.token = o["token"].get<std::string>();
    }
    s->server = std::make_unique<segmap::ReviewServer>(std::move(ctx));
    int port = s->server->bind(o.value("host", "127.0.0.1"), o.value("port", 0));
    if (bound_port) *bound_port = port;
    *out = s.release();
  });
}

sm_status sm_server_run(sm_server* s) {
  return wrap([&] {
    require(s, "server");
    s->server->listen();
  });
}

void sm_server_stop(sm_server* s) {
  if (s && s->server) s->server->stop();
}

void sm_server_free(sm_server* s) { delete s; }

}  // extern "C"
