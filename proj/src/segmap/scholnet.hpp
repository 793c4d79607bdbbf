// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "segmap/corpus.hpp"
#include "segmap/graph.hpp"

namespace segmap {

struct ReferenceKey {
  std::string key;
  bool parsed = false;  // false: key is the normalized full string (or empty)
  std::string surname;
  std::optional<int> year;
  std::vector<std::string> title_tokens;  // at most five
};

/// Normalizes a raw cited-reference string to surname|year|t1|..|t5. Both
/// APA ("Massey, D. S. (1988). Title.") and Scopus ("Massey D.S., Title,
/// (1988), Journal") layouts are recognized; anything else falls back to the
/// case-folded, punctuation-free string. Idempotent on its own output.
ReferenceKey normalize_reference(std::string_view raw);

struct CocitationOptions {
  int min_cocitations = 10;
  std::size_t top_k = 1000;
  std::set<std::string> excluded_keys;  // normalized keys removed before counting
};

/// Nodes are reference keys; each corpus document adds 1 to every unordered
/// pair of its distinct keys. Edges below the threshold are dropped first,
/// then the top_k nodes by total link strength (ties by key) are kept.
/// Node attr citation_count = citing documents.
WeightedGraph build_cocitation(const CorpusStore& store, const CocitationOptions& opt = {});

/// Nodes are journals (normalized source title) whose documents are cited
/// at least `min_citations` times in total; edge weight is the number of
/// reference keys both journals cite. Then top_k by link strength.
/// Node attrs doc_count and citations.
WeightedGraph build_coupling(const CorpusStore& store, int min_citations = 5, std::size_t top_k = 1000);

/// Nodes are countries with at least `min_docs` documents; edge weight is
/// the number of documents listing both countries. Node attr doc_count.
WeightedGraph build_coauthorship_countries(const CorpusStore& store, int min_docs = 5);

/// Sum of incident weights per node.
std::vector<double> link_strengths(const WeightedGraph& g);

/// Top-k node indices by link strength, ties by id; nodes without edges are
/// never selected.
std::vector<std::size_t> top_by_link_strength(const WeightedGraph& g, std::size_t k);

/// node,label,<count_attr>,total_link_strength[,community], ordered by
/// link strength.
std::string scholnet_node_csv(const WeightedGraph& g, const std::string& count_attr,
                              const CommunityPartition* partition = nullptr);

}  // namespace segmap
