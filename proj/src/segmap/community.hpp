// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "segmap/graph.hpp"

namespace segmap {

/// Weighted Newman modularity with resolution `gamma`. Throws when the
/// partition does not cover every node. A graph without edges has Q = 0.
double modularity(const WeightedGraph& g, const std::vector<int>& community, double gamma = 1.0);

/// Two-phase Louvain. Node visit order is shuffled per level from `seed`;
/// a node changes community only on a strictly larger gain, with its
/// current community evaluated first and neighbor communities in adjacency
/// order. `initial` seeds the first level instead of singletons.
CommunityPartition louvain(const WeightedGraph& g, std::uint64_t seed, double gamma = 1.0,
                           const std::optional<std::vector<int>>& initial = std::nullopt);

/// Louvain followed by rounds of within-community local moving from
/// singletons, aggregation of the refined sub-communities and a Louvain run
/// seeded with their parent communities. Keeps the best partition found, so
/// its modularity is never below louvain() with the same seed.
CommunityPartition slm_cluster(const WeightedGraph& g, std::uint64_t seed, double gamma = 1.0,
                               int max_rounds = 20);

}  // namespace segmap
