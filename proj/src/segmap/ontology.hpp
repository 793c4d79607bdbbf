// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "segmap/graph.hpp"

namespace segmap {

/// Term vectors from the embedding file: a header line
/// {"dimension": d, "model_tag": "..."} followed by {"term", "vector"} lines.
struct EmbeddingTable {
  std::size_t dimension = 0;
  std::string model_tag;
  std::vector<std::string> terms;
  std::vector<std::vector<double>> vectors;

  std::optional<std::size_t> index_of(const std::string& term) const;
  /// Rows for `wanted` in that order; throws not_found listing absent terms.
  EmbeddingTable select(const std::vector<std::string>& wanted) const;
};

EmbeddingTable parse_embeddings(std::string_view jsonl);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
std::string serialize_embeddings(const EmbeddingTable& t);

/// Forms with no vector in the table, in input order.
std::vector<std::string> missing_terms(const EmbeddingTable& t, const std::vector<std::string>& forms);

/// Dense symmetric matrix with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

  /// Throws unless square, symmetric, finite, nonnegative, zero diagonal.
  void validate() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

DistanceMatrix cosine_distance_matrix(const EmbeddingTable& t, unsigned threads = 0);

/// 1 - Jaccard over the forms' tokens, `anchor` excluded.
DistanceMatrix lexical_fallback_similarity(const std::vector<std::string>& forms,
                                           std::string_view anchor = "segregation");

struct Merge {
  int a = 0;  // a < b
  int b = 0;
  double distance = 0;
  int id = 0;
  std::size_t size = 0;
};

/// Leaves are 0..n-1; the i-th merge creates cluster n + i.
struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;

  nlohmann::json to_json() const;
  static Dendrogram from_json(const nlohmann::json& j);
};

/// Complete linkage: repeatedly merges the pair of clusters with the
/// smallest maximum member distance, ties by smallest (a, b) id pair.
Dendrogram agglomerative_complete(const DistanceMatrix& d);

struct CutCriterion {
  std::optional<std::size_t> n_clusters;
  std::optional<double> distance;
};

/// Flat cluster id per leaf, numbered by first leaf appearance.
std::vector<int> cut_dendrogram(const Dendrogram& dg, const CutCriterion& c);

inline constexpr std::size_t kMaxLabels = 8;

struct TypeLabeling {
  std::set<std::string> universe;
  std::map<std::string, std::set<std::string>> labels;           // term -> labels
  std::map<std::string, std::set<std::string>> default_labels;   // from clusters

  /// Throws unless every term has 1..8 labels drawn from the universe.
  void validate() const;
  nlohmann::json to_json() const;
  static TypeLabeling from_json(const nlohmann::json& j);
};

/// Cluster id -> type label, from a "cluster,label" CSV.
std::map<int, std::string> parse_cluster_labels(std::string_view csv);
/// form -> labels from a "form,label1..label8" CSV; blank cells ignored.
std::map<std::string, std::vector<std::string>> parse_label_overrides(std::string_view csv);
/// One type label per line; '#' comments.
std::set<std::string> parse_type_universe(std::string_view text);

/// Each term starts from its cluster's label; a non-empty override replaces
/// it. With no universe given, the universe is every label in use.
TypeLabeling apply_labeling(const std::vector<std::string>& terms, const std::vector<int>& clusters,
                            const std::map<int, std::string>& cluster_labels,
                            const std::map<std::string, std::vector<std::string>>& overrides,
                            const std::optional<std::set<std::string>>& universe = std::nullopt);

struct OntologyGraph {
  std::map<std::string, std::size_t> type_freq;
  std::map<std::string, std::set<std::string>> form_labels;
  std::map<std::pair<std::string, std::string>, std::size_t> type_edges;  // a < b

  nlohmann::json to_json() const;
  /// Type and form nodes (attr kind) with membership and type-type edges.
  WeightedGraph to_graph() const;
};

OntologyGraph type_network(const TypeLabeling& labeling);

/// Thread-safe labeling state persisted as JSON after every edit.
class LabelingStore {
 public:
  LabelingStore(std::filesystem::path file, TypeLabeling initial);
  static std::unique_ptr<LabelingStore> open(const std::filesystem::path& file);

  TypeLabeling snapshot() const;
  /// Replaces a term's labels; validates the bound and the universe.
  void set_labels(const std::string& term, const std::vector<std::string>& labels);

 private:
  std::filesystem::path file_;
  mutable std::mutex mu_;
  TypeLabeling state_;
};

}  // namespace segmap
