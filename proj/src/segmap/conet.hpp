// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "segmap/corpus.hpp"
#include "segmap/extract.hpp"
#include "segmap/graph.hpp"
#include "segmap/metrics.hpp"

namespace segmap {

/// One node per form with at least one document; every document adds 1 to
/// each unordered pair of distinct forms it contains.
WeightedGraph build_cooccurrence(const CandidateSet& forms, const CorpusStore& store, int min_weight = 1);

/// Edges first co-occurring by `up_to_year`, weights recounted from the
/// documents up to that year; nodes kept when published by then.
WeightedGraph temporal_slice(const WeightedGraph& g, int up_to_year);

/// Brandes betweenness over unweighted shortest paths for undirected
/// graphs, unnormalized (each unordered pair counted once).
std::vector<double> betweenness(const WeightedGraph& g, unsigned threads = 0);

CentralityTable centralities(const WeightedGraph& g, unsigned threads = 0);

/// Spearman correlation of node age (latest first year minus the node's
/// first year) against betweenness.
SpearmanResult path_dependence(const WeightedGraph& g, const CentralityTable& table);

}  // namespace segmap
