// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

#include "segmap/csv.hpp"
#include "segmap/error.hpp"

namespace segmap {

std::uint64_t WeightedGraph::key(std::size_t u, std::size_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

std::size_t WeightedGraph::add_node(GraphNode node) {
  if (auto it = node_index_.find(node.id); it != node_index_.end()) return it->second;
  std::size_t idx = nodes_.size();
  node_index_.emplace(node.id, idx);
  if (node.label.empty()) node.label = node.id;
  nodes_.push_back(std::move(node));
  return idx;
}

GraphEdge& WeightedGraph::add_to_edge(std::size_t u, std::size_t v, double weight) {
  if (u == v) throw Error(ErrorKind::invalid_argument, "self-loop on node '" + nodes_.at(u).id + "'");
  if (u >= nodes_.size() || v >= nodes_.size()) throw Error(ErrorKind::invalid_argument, "edge endpoint out of range");
  if (u > v) std::swap(u, v);
  auto [it, inserted] = edge_index_.emplace(key(u, v), edges_.size());
  if (inserted) {
    GraphEdge e;
    e.u = u;
    e.v = v;
    edges_.push_back(std::move(e));
  }
  GraphEdge& e = edges_[it->second];
  e.weight += weight;
  return e;
}

GraphEdge& WeightedGraph::add_contribution(std::size_t u, std::size_t v, int year) {
  GraphEdge& e = add_to_edge(u, v, 1.0);
  ++e.year_counts[year];
  e.first_co_year = e.year_counts.begin()->first;
  return e;
}

std::optional<std::size_t> WeightedGraph::find(const std::string& id) const {
  if (auto it = node_index_.find(id); it != node_index_.end()) return it->second;
  return std::nullopt;
}

const GraphEdge* WeightedGraph::edge(std::size_t u, std::size_t v) const {
  if (auto it = edge_index_.find(key(u, v)); it != edge_index_.end()) return &edges_[it->second];
  return nullptr;
}

double WeightedGraph::edge_weight(std::size_t u, std::size_t v) const {
  const GraphEdge* e = edge(u, v);
  return e ? e->weight : 0.0;
}

double WeightedGraph::total_weight() const {
  double w = 0;
  for (const auto& e : edges_) w += e.weight;
  return w;
}

WeightedGraph::Adjacency WeightedGraph::adjacency() const {
  Adjacency adj(nodes_.size());
  for (const auto& e : edges_) {
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::vector<double> WeightedGraph::strengths() const {
  std::vector<double> s(nodes_.size(), 0.0);
  for (const auto& e : edges_) {
    s[e.u] += e.weight;
    s[e.v] += e.weight;
  }
  return s;
}

WeightedGraph WeightedGraph::induced(const std::vector<std::size_t>& keep) const {
  std::vector<std::size_t> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> remap(nodes_.size(), SIZE_MAX);
  WeightedGraph out;
  for (auto i : sorted) remap[i] = out.add_node(nodes_.at(i));
  for (const auto& e : edges_) {
    if (remap[e.u] == SIZE_MAX || remap[e.v] == SIZE_MAX) continue;
    GraphEdge& ne = out.add_to_edge(remap[e.u], remap[e.v], e.weight);
    ne.first_co_year = e.first_co_year;
    ne.year_counts = e.year_counts;
  }
  out.normalize();
  return out;
}

void WeightedGraph::normalize() {
  std::sort(edges_.begin(), edges_.end(),
            [](const GraphEdge& a, const GraphEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  reindex();
}

void WeightedGraph::reindex() {
  edge_index_.clear();
  for (std::size_t i = 0; i < edges_.size(); ++i) edge_index_.emplace(key(edges_[i].u, edges_[i].v), i);
}

std::size_t CommunityPartition::community_count() const {
  return std::set<int>(community.begin(), community.end()).size();
}

std::vector<int> relabel_communities(const std::vector<int>& c) {
  std::map<int, int> ids;
  std::vector<int> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto [it, inserted] = ids.emplace(c[i], static_cast<int>(ids.size()));
    out[i] = it->second;
  }
  return out;
}

namespace {

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct ExportView {
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> edges;
};

ExportView export_view(const WeightedGraph& g, const GraphExportOptions& opt) {
  ExportView view;
  std::vector<std::size_t> deg(g.node_count(), 0);
  std::vector<std::size_t> candidate_edges;
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const auto& e = g.edges()[i];
    if (e.weight < opt.min_edge_weight) continue;
    candidate_edges.push_back(i);
    ++deg[e.u];
    ++deg[e.v];
  }
  std::vector<bool> keep(g.node_count(), true);
  for (std::size_t i = 0; i < g.node_count(); ++i) keep[i] = deg[i] >= opt.min_degree;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (keep[i]) view.nodes.push_back(i);
  }
  for (auto i : candidate_edges) {
    const auto& e = g.edges()[i];
    if (keep[e.u] && keep[e.v]) view.edges.push_back(i);
  }
  return view;
}

}  // namespace

nlohmann::json graph_to_json(const WeightedGraph& g, const GraphExportOptions& opt) {
  auto view = export_view(g, opt);
  nlohmann::json nodes = nlohmann::json::array();
  for (auto i : view.nodes) {
    const auto& n = g.nodes()[i];
    nlohmann::json jn = {{"id", n.id}, {"label", n.label}, {"first_year", n.first_year}};
    if (opt.partition) jn["community"] = opt.partition->community.at(i);
    if (opt.centrality) {
      jn["degree"] = opt.centrality->at(i).degree;
      jn["weighted_degree"] = opt.centrality->at(i).weighted_degree;
      jn["betweenness"] = opt.centrality->at(i).betweenness;
    }
    if (!n.year_counts.empty()) {
      nlohmann::json yc = nlohmann::json::object();
      for (const auto& [y, c] : n.year_counts) yc[std::to_string(y)] = c;
      jn["year_counts"] = yc;
    }
    if (!n.attrs.empty()) jn["attrs"] = n.attrs;
    nodes.push_back(std::move(jn));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (auto i : view.edges) {
    const auto& e = g.edges()[i];
    nlohmann::json je = {{"source", g.nodes()[e.u].id},
                         {"target", g.nodes()[e.v].id},
                         {"weight", e.weight},
                         {"first_co_year", e.first_co_year}};
    if (!e.year_counts.empty()) {
      nlohmann::json yc = nlohmann::json::object();
      for (const auto& [y, c] : e.year_counts) yc[std::to_string(y)] = c;
      je["year_counts"] = yc;
    }
    edges.push_back(std::move(je));
  }
  nlohmann::json out = {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  if (opt.partition) out["modularity"] = opt.partition->modularity;
  return out;
}

WeightedGraph graph_from_json(const nlohmann::json& j) {
  try {
    WeightedGraph g;
    for (const auto& jn : j.at("nodes")) {
      GraphNode n;
      n.id = jn.at("id").get<std::string>();
      n.label = jn.value("label", n.id);
      n.first_year = jn.value("first_year", 0);
      if (jn.contains("year_counts")) {
        for (const auto& [y, c] : jn["year_counts"].items()) n.year_counts[std::stoi(y)] = c.get<int>();
      }
      if (jn.contains("attrs")) n.attrs = jn["attrs"].get<std::map<std::string, std::string>>();
      if (g.find(n.id)) throw Error(ErrorKind::parse, "duplicate node id '" + n.id + "'");
      g.add_node(std::move(n));
    }
    for (const auto& je : j.at("edges")) {
      auto u = g.find(je.at("source").get<std::string>());
      auto v = g.find(je.at("target").get<std::string>());
      if (!u || !v) throw Error(ErrorKind::parse, "edge references an unknown node");
      if (g.edge(*u, *v)) throw Error(ErrorKind::parse, "duplicate edge");
      double w = je.at("weight").get<double>();
      if (!(w > 0)) throw Error(ErrorKind::parse, "edge weight must be positive");
      GraphEdge& e = g.add_to_edge(*u, *v, w);
      e.first_co_year = je.value("first_co_year", 0);
      if (je.contains("year_counts")) {
        for (const auto& [y, c] : je["year_counts"].items()) e.year_counts[std::stoi(y)] = c.get<int>();
      }
    }
    g.normalize();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("graph JSON: ") + e.what());
  }
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string graph_to_graphml(const WeightedGraph& g, const GraphExportOptions& opt) {
  auto view = export_view(g, opt);
  std::set<std::string> attr_keys;
  for (auto i : view.nodes) {
    for (const auto& [k, v] : g.nodes()[i].attrs) attr_keys.insert(k);
  }
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
     << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
     << "  <key id=\"first_year\" for=\"node\" attr.name=\"first_year\" attr.type=\"int\"/>\n";
  if (opt.partition) os << "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n";
  if (opt.centrality) {
    os << "  <key id=\"degree\" for=\"node\" attr.name=\"degree\" attr.type=\"int\"/>\n"
       << "  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\" attr.type=\"double\"/>\n";
  }
  for (const auto& k : attr_keys) {
    os << "  <key id=\"a_" << xml_escape(k) << "\" for=\"node\" attr.name=\"" << xml_escape(k)
       << "\" attr.type=\"string\"/>\n";
  }
  os << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
     << "  <key id=\"first_co_year\" for=\"edge\" attr.name=\"first_co_year\" attr.type=\"int\"/>\n"
     << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (auto i : view.nodes) {
    const auto& n = g.nodes()[i];
    os << "    <node id=\"" << xml_escape(n.id) << "\">\n"
       << "      <data key=\"label\">" << xml_escape(n.label) << "</data>\n"
       << "      <data key=\"first_year\">" << n.first_year << "</data>\n";
    if (opt.partition) os << "      <data key=\"community\">" << opt.partition->community.at(i) << "</data>\n";
    if (opt.centrality) {
      os << "      <data key=\"degree\">" << opt.centrality->at(i).degree << "</data>\n"
         << "      <data key=\"betweenness\">" << num(opt.centrality->at(i).betweenness) << "</data>\n";
    }
    for (const auto& [k, v] : n.attrs) {
      os << "      <data key=\"a_" << xml_escape(k) << "\">" << xml_escape(v) << "</data>\n";
    }
    os << "    </node>\n";
  }
  for (auto i : view.edges) {
    const auto& e = g.edges()[i];
    os << "    <edge source=\"" << xml_escape(g.nodes()[e.u].id) << "\" target=\"" << xml_escape(g.nodes()[e.v].id)
       << "\">\n"
       << "      <data key=\"weight\">" << num(e.weight) << "</data>\n"
       << "      <data key=\"first_co_year\">" << e.first_co_year << "</data>\n"
       << "    </edge>\n";
  }
  os << "  </graph>\n</graphml>\n";
  return os.str();
}

std::string centrality_csv(const WeightedGraph& g, const CentralityTable& table, const CommunityPartition* partition) {
  std::ostringstream os;
  std::vector<std::string> header = {"node", "label", "first_year", "degree", "weighted_degree", "betweenness"};
  if (partition) header.push_back("community");
  write_csv_row(os, header);
  std::vector<std::size_t> order(g.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (table[a].degree != table[b].degree) return table[a].degree > table[b].degree;
    return g.nodes()[a].id < g.nodes()[b].id;
  });
  for (auto i : order) {
    const auto& n = g.nodes()[i];
    std::vector<std::string> row = {n.id,
                                    n.label,
                                    std::to_string(n.first_year),
                                    std::to_string(table[i].degree),
                                    num(table[i].weighted_degree),
                                    num(table[i].betweenness)};
    if (partition) row.push_back(std::to_string(partition->community.at(i)));
    write_csv_row(os, row);
  }
  return os.str();
}

}  // namespace segmap
