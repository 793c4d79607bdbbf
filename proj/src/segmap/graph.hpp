// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace segmap {

struct GraphNode {
  std::string id;
  std::string label;
  int first_year = 0;
  std::map<int, int> year_counts;               // year -> publications
  std::map<std::string, std::string> attrs;     // exported verbatim
};

struct GraphEdge {
  std::size_t u = 0;  // u < v
  std::size_t v = 0;
  double weight = 0;
  int first_co_year = 0;
  std::map<int, int> year_counts;  // year -> contributing documents
};

/// Undirected weighted graph with string node ids. No self-loops, at most
/// one edge per unordered pair.
class WeightedGraph {
 public:
  using Adjacency = std::vector<std::vector<std::pair<std::size_t, double>>>;

  /// Returns the existing index when the id is already present.
  std::size_t add_node(GraphNode node);
  /// Adds `weight` to the (u, v) edge, creating it if needed.
  GraphEdge& add_to_edge(std::size_t u, std::size_t v, double weight);
  /// Like add_to_edge, recording one contributing document of `year`.
  GraphEdge& add_contribution(std::size_t u, std::size_t v, int year);

  std::optional<std::size_t> find(const std::string& id) const;
  const std::vector<GraphNode>& nodes() const { return nodes_; }
  std::vector<GraphNode>& nodes() { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const GraphEdge* edge(std::size_t u, std::size_t v) const;
  double edge_weight(std::size_t u, std::size_t v) const;
  double total_weight() const;

  /// Neighbor lists in ascending neighbor order.
  Adjacency adjacency() const;
  /// Sum of incident edge weights per node.
  std::vector<double> strengths() const;

  /// Keeps edges satisfying `keep`; nodes are untouched.
  template <class Pred>
  void filter_edges(Pred keep) {
    std::vector<GraphEdge> kept;
    for (auto& e : edges_) {
      if (keep(e)) kept.push_back(std::move(e));
    }
    edges_ = std::move(kept);
    reindex();
  }

  /// Subgraph on the given node indices (kept in ascending order).
  WeightedGraph induced(const std::vector<std::size_t>& keep) const;

  /// Edges sorted by (u, v); call after bulk edits.
  void normalize();

 private:
  void reindex();
  static std::uint64_t key(std::size_t u, std::size_t v);

  std::vector<GraphNode> nodes_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::vector<GraphEdge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;
};

struct CommunityPartition {
  std::vector<int> community;  // per node, 0-based, relabelled in first-seen order
  double modularity = 0;

  std::size_t community_count() const;
};

/// Community ids renumbered by first appearance in node order.
std::vector<int> relabel_communities(const std::vector<int>& c);

struct CentralityRow {
  std::size_t degree = 0;
  double weighted_degree = 0;
  double betweenness = 0;
};
using CentralityTable = std::vector<CentralityRow>;  // per node index

struct GraphExportOptions {
  const CommunityPartition* partition = nullptr;
  const CentralityTable* centrality = nullptr;
  double min_edge_weight = 0;  // export-time filter
  std::size_t min_degree = 0;  // export-time filter on the filtered edge set
};

nlohmann::json graph_to_json(const WeightedGraph& g, const GraphExportOptions& opt = {});
WeightedGraph graph_from_json(const nlohmann::json& j);
std::string graph_to_graphml(const WeightedGraph& g, const GraphExportOptions& opt = {});
/// node,label,first_year,degree,weighted_degree,betweenness[,community]
std::string centrality_csv(const WeightedGraph& g, const CentralityTable& table,
                           const CommunityPartition* partition = nullptr);

std::string xml_escape(std::string_view s);

}  // namespace segmap
