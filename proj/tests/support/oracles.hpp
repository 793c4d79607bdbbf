// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

// Slow reference computations used to check the library. They share no code
// with it beyond the graph container.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "segmap/graph.hpp"
#include "segmap/ontology.hpp"

namespace segmap::testing {

using AdjMatrix = std::vector<std::vector<bool>>;

inline AdjMatrix adjacency_matrix(const WeightedGraph& g) {
  AdjMatrix a(g.node_count(), std::vector<bool>(g.node_count(), false));
  for (const auto& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = true;
  return a;
}

/// Betweenness by listing every shortest path between every unordered pair.
inline std::vector<double> brute_force_betweenness(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  const auto a = adjacency_matrix(g);
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);

  std::vector<double> bc(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (d[s][t] >= inf) continue;
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> cur{s};
      std::function<void(std::size_t)> walk = [&](std::size_t x) {
        if (x == t) {
          paths.push_back(cur);
          return;
        }
        for (std::size_t y = 0; y < n; ++y) {
          if (a[x][y] && d[s][y] == d[s][x] + 1 && d[s][y] + d[y][t] == d[s][t]) {
            cur.push_back(y);
            walk(y);
            cur.pop_back();
          }
        }
      };
      walk(s);
      for (std::size_t v = 0; v < n; ++v) {
        if (v == s || v == t) continue;
        std::size_t through = 0;
        for (const auto& p : paths) through += std::count(p.begin(), p.end(), v);
        bc[v] += static_cast<double>(through) / static_cast<double>(paths.size());
      }
    }
  }
  return bc;
}

/// Nodes "v0".."v{n-1}" with unit-weight edges.
inline WeightedGraph graph_from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  WeightedGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node({"v" + std::to_string(i), "", 0, {}, {}});
  for (auto [u, v] : edges) g.add_to_edge(u, v, 1.0);
  g.normalize();
  return g;
}

inline WeightedGraph two_triangles() {
  return graph_from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

/// Newman's Q straight from the definition over ordered node pairs.
inline double definition_modularity(const WeightedGraph& g, const std::vector<int>& c) {
  const auto k = g.strengths();
  double two_m = 0;
  for (double x : k) two_m += x;
  if (two_m == 0) return 0;
  double q = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    for (std::size_t j = 0; j < g.node_count(); ++j)
      if (c[i] == c[j]) q += g.edge_weight(i, j) - k[i] * k[j] / two_m;
  return q / two_m;
}

/// G(n, p) with ids "n0".."n{n-1}" and unit weights.
inline WeightedGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  WeightedGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node({"n" + std::to_string(i), "", 0, {}, {}});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u(rng) < p) g.add_to_edge(i, j, 1.0);
  return g;
}

/// `blocks` groups of `size` nodes; edges inside with p_in, across with p_out.
inline WeightedGraph planted_blocks(std::size_t blocks, std::size_t size, double p_in, double p_out,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  WeightedGraph g;
  const std::size_t n = blocks * size;
  for (std::size_t i = 0; i < n; ++i) g.add_node({"b" + std::to_string(i / size) + "_" + std::to_string(i % size), "", 0, {}, {}});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u(rng) < (i / size == j / size ? p_in : p_out)) g.add_to_edge(i, j, 1.0);
  return g;
}

/// Unordered-partition equality (labels may differ).
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

struct OracleMerge {
  int a, b;
  double distance;
};

/// Complete linkage recomputing every cluster-pair distance from the leaf
/// distances at each step. Leaves are 0..n-1; merge i creates id n+i; ties
/// go to the smallest (a, b) pair.
inline std::vector<OracleMerge> brute_force_complete_linkage(const DistanceMatrix& d) {
  const int n = static_cast<int>(d.size());
  std::vector<std::pair<int, std::vector<int>>> clusters;
  for (int i = 0; i < n; ++i) clusters.push_back({i, {i}});
  std::vector<OracleMerge> out;
  int next = n;
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> best_ids{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        double link = 0;
        for (int x : clusters[i].second)
          for (int y : clusters[j].second) link = std::max(link, d.at(x, y));
        std::pair<int, int> ids = std::minmax(clusters[i].first, clusters[j].first);
        if (link < best || (link == best && ids < best_ids)) {
          best = link;
          best_ids = ids;
          bi = i;
          bj = j;
        }
      }
    }
    out.push_back({best_ids.first, best_ids.second, best});
    std::vector<int> members = clusters[bi].second;
    members.insert(members.end(), clusters[bj].second.begin(), clusters[bj].second.end());
    clusters.erase(clusters.begin() + static_cast<long>(bj));
    clusters.erase(clusters.begin() + static_cast<long>(bi));
    clusters.push_back({next++, members});
  }
  return out;
}

}  // namespace segmap::testing
