// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SEGMAP_SEGMAP_H
#define SEGMAP_SEGMAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SM_API __declspec(dllexport)
#else
#define SM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returning sm_status leaves a message retrievable through
 * sm_last_error() on failure. Output strings are heap-allocated and must be
 * released with sm_string_free(). Handles are released with their *_free
 * function; passing NULL to a *_free function is a no-op. */

typedef enum sm_status {
  SM_OK = 0,
  SM_ERR_INVALID_ARGUMENT = 1,
  SM_ERR_IO = 2,
  SM_ERR_PARSE = 3,
  SM_ERR_NOT_FOUND = 4,
  SM_ERR_PRECONDITION = 5,
  SM_ERR_CONFLICT = 6,
  SM_ERR_INTERNAL = 7
} sm_status;

typedef struct sm_corpus sm_corpus;
typedef struct sm_lexicon sm_lexicon;
typedef struct sm_candidates sm_candidates;
typedef struct sm_codebook sm_codebook;
typedef struct sm_graph sm_graph;
typedef struct sm_partition sm_partition;
typedef struct sm_embeddings sm_embeddings;
typedef struct sm_dendrogram sm_dendrogram;
typedef struct sm_labeling sm_labeling;
typedef struct sm_server sm_server;

SM_API const char* sm_version(void);
/* Message of the last failure on the calling thread ("" if none). */
SM_API const char* sm_last_error(void);
SM_API const char* sm_status_name(sm_status s);
SM_API void sm_string_free(char* s);
SM_API sm_status sm_sha256_file(const char* path, char** out_hex);

/* ---- corpus ------------------------------------------------------------ */

/* column_map_json may be NULL to detect Scopus column names from the header. */
SM_API sm_status sm_corpus_ingest(const char* csv_path, const char* column_map_json, sm_corpus** out);
SM_API sm_status sm_corpus_filter(const sm_corpus* c, const char* anchor, sm_corpus** out);
SM_API sm_status sm_corpus_save(const sm_corpus* c, const char* records_path, const char* manifest_path);
SM_API sm_status sm_corpus_load(const char* records_path, const char* manifest_path, sm_corpus** out);
SM_API sm_status sm_corpus_manifest_json(const sm_corpus* c, char** out_json);
SM_API sm_status sm_corpus_stats_json(const sm_corpus* c, char** out_json);
SM_API size_t sm_corpus_size(const sm_corpus* c);
SM_API void sm_corpus_free(sm_corpus* c);

/* ---- extraction -------------------------------------------------------- */

SM_API sm_status sm_lexicon_load_dir(const char* dir, sm_lexicon** out);
SM_API void sm_lexicon_free(sm_lexicon* l);

/* threads = 0 uses the hardware concurrency. */
SM_API sm_status sm_extract(const sm_corpus* c, const char* anchor, const sm_lexicon* l, unsigned threads,
                            sm_candidates** out);
SM_API sm_status sm_candidates_load(const char* path, sm_candidates** out);
SM_API sm_status sm_candidates_save(const sm_candidates* c, const char* path);
/* term,arity,n_docs,n_occurrences,first_year,first_countries,origin_discipline */
SM_API sm_status sm_candidates_csv(const sm_candidates* c, char** out_csv);
/* form,first_year,first_countries,n_publications */
SM_API sm_status sm_validated_forms_csv(const sm_candidates* c, char** out_csv);
SM_API sm_status sm_candidates_terms_json(const sm_candidates* c, char** out_json);
SM_API size_t sm_candidates_count(const sm_candidates* c);
SM_API void sm_candidates_free(sm_candidates* c);

/* ---- codebook ---------------------------------------------------------- */

/* policy_json: {"min_coders": n, "require_all_registered": bool} or NULL. */
SM_API sm_status sm_codebook_open(const char* journal_path, const sm_candidates* c, const char* policy_json,
                                  sm_codebook** out);
/* {"term","coder_id","round","verdict","comment"} */
SM_API sm_status sm_codebook_record(sm_codebook* cb, const char* decision_json);
/* {"resolutions":[{"term","verdict","note"}], "deferred":[...], "changelog": "..."} */
SM_API sm_status sm_codebook_resolve_round(sm_codebook* cb, const char* request_json);
/* terms_json: array of terms marked valid through an import override. */
SM_API sm_status sm_codebook_import(sm_codebook* cb, const char* terms_json, const char* note, size_t* imported);
SM_API sm_status sm_codebook_discrepancies_json(const sm_codebook* cb, char** out_json);
SM_API sm_status sm_codebook_progress_json(const sm_codebook* cb, char** out_json);
SM_API sm_status sm_codebook_state_json(const sm_codebook* cb, char** out_json);
SM_API sm_status sm_codebook_export_validated(const sm_codebook* cb, sm_candidates** out);
SM_API void sm_codebook_free(sm_codebook* cb);

/* ---- metrics ----------------------------------------------------------- */

/* Full index report over a form set as JSON. options_json keys:
 * positions (path), discipline_universe, moving_average_window. */
SM_API sm_status sm_metrics_report(const sm_candidates* forms, const sm_corpus* c, const char* options_json,
                                   char** out_json);
/* series_json: {"name": [[year, value], ...], ...}; options: title, y_label. */
SM_API sm_status sm_series_svg(const char* series_json, const char* options_json, char** out_svg);
SM_API sm_status sm_entropy(const double* weights, size_t n, double* out);
SM_API sm_status sm_spearman(const double* x, const double* y, size_t n, double* rho, double* p_value);

/* ---- graphs ------------------------------------------------------------ */

SM_API sm_status sm_conet_build(const sm_candidates* forms, const sm_corpus* c, int min_weight, sm_graph** out);
SM_API sm_status sm_graph_slice(const sm_graph* g, int up_to_year, sm_graph** out);
SM_API sm_status sm_schol_cocitation(const sm_corpus* c, int min_cocitations, size_t top_k,
                                     const char* excluded_keys_json, sm_graph** out);
SM_API sm_status sm_schol_coupling(const sm_corpus* c, int min_citations, size_t top_k, sm_graph** out);
SM_API sm_status sm_schol_countries(const sm_corpus* c, int min_docs, sm_graph** out);
/* {"key": "...", "parsed": bool} */
SM_API sm_status sm_normalize_reference(const char* raw, char** out_json);

SM_API sm_status sm_graph_load_json(const char* path, sm_graph** out);
SM_API size_t sm_graph_node_count(const sm_graph* g);
SM_API size_t sm_graph_edge_count(const sm_graph* g);
/* [{"id","degree","weighted_degree","betweenness"}] in node order. */
SM_API sm_status sm_graph_centralities_json(const sm_graph* g, unsigned threads, char** out_json);
SM_API sm_status sm_graph_path_dependence(const sm_graph* g, unsigned threads, double* rho, double* p_value);
SM_API sm_status sm_graph_louvain(const sm_graph* g, uint64_t seed, double resolution, sm_partition** out);
SM_API sm_status sm_graph_slm(const sm_graph* g, uint64_t seed, double resolution, sm_partition** out);
/* format: "json", "graphml", "centrality_csv" or "node_csv". partition may be
 * NULL. options_json keys: with_centrality, min_edge_weight, min_degree,
 * count_attr, threads. */
SM_API sm_status sm_graph_export(const sm_graph* g, const sm_partition* p, const char* format,
                                 const char* options_json, char** out);
SM_API void sm_graph_free(sm_graph* g);

SM_API double sm_partition_modularity(const sm_partition* p);
SM_API size_t sm_partition_count(const sm_partition* p);
SM_API sm_status sm_partition_json(const sm_partition* p, char** out_json);
SM_API void sm_partition_free(sm_partition* p);

/* ---- ontology ---------------------------------------------------------- */

SM_API sm_status sm_embeddings_load(const char* path, sm_embeddings** out);
/* Terms of terms_json without a vector, as a JSON array. */
SM_API sm_status sm_embeddings_missing_json(const sm_embeddings* e, const char* terms_json, char** out_json);
SM_API void sm_embeddings_free(sm_embeddings* e);

/* Cosine distances over the vectors of terms_json (in that order). */
SM_API sm_status sm_dendrogram_cosine(const sm_embeddings* e, const char* terms_json, unsigned threads,
                                      sm_dendrogram** out);
SM_API sm_status sm_dendrogram_lexical(const char* terms_json, const char* anchor, sm_dendrogram** out);
/* Exactly one criterion: n_clusters > 0, or distance >= 0 with n_clusters 0.
 * Output: JSON array of cluster ids per leaf. */
SM_API sm_status sm_dendrogram_cut(const sm_dendrogram* d, size_t n_clusters, double distance, char** out_json);
SM_API sm_status sm_dendrogram_json(const sm_dendrogram* d, char** out_json);
SM_API void sm_dendrogram_free(sm_dendrogram* d);

/* Any of the three paths may be NULL. */
SM_API sm_status sm_labeling_apply(const char* terms_json, const char* clusters_json, const char* cluster_labels_csv,
                                   const char* overrides_csv, const char* types_path, sm_labeling** out);
SM_API sm_status sm_labeling_load(const char* path, sm_labeling** out);
SM_API sm_status sm_labeling_save(const sm_labeling* l, const char* path);
/* format: "labeling", "ontology_json" or "graphml". */
SM_API sm_status sm_labeling_export(const sm_labeling* l, const char* format, char** out);
SM_API void sm_labeling_free(sm_labeling* l);

/* ---- serve ------------------------------------------------------------- */

/* options_json: journal, candidates, corpus_records, corpus_manifest,
 * labeling, policy, token, host, port (0 = ephemeral). */
SM_API sm_status sm_server_start(const char* options_json, sm_server** out, int* bound_port);
/* Blocks until sm_server_stop() from another thread. */
SM_API sm_status sm_server_run(sm_server* s);
SM_API void sm_server_stop(sm_server* s);
SM_API void sm_server_free(sm_server* s);

#ifdef __cplusplus
}
#endif

#endif /* SEGMAP_SEGMAP_H */
