// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/conet.hpp"

#include <algorithm>
#include <limits>

#include "segmap/error.hpp"
#include "segmap/parallel.hpp"

namespace segmap {

WeightedGraph build_cooccurrence(const CandidateSet& forms, const CorpusStore& store, int min_weight) {
  WeightedGraph g;
  std::vector<std::size_t> node_of(forms.size(), SIZE_MAX);
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const auto& f = forms[i];
    if (f.doc_set.empty()) continue;
    GraphNode n;
    n.id = f.term();
    n.label = n.id;
    n.first_year = f.first_year;
    n.year_counts = f.per_year_counts;
    node_of[i] = g.add_node(std::move(n));
  }
  for (const auto& [doc, idx] : doc_form_index(forms)) {
    const DocumentRecord* r = store.find(doc);
    if (!r) continue;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        g.add_contribution(node_of[idx[a]], node_of[idx[b]], r->year);
      }
    }
  }
  g.filter_edges([&](const GraphEdge& e) { return e.weight >= min_weight; });
  g.normalize();
  return g;
}

WeightedGraph temporal_slice(const WeightedGraph& g, int up_to_year) {
  WeightedGraph out;
  std::vector<std::size_t> remap(g.node_count(), SIZE_MAX);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& n = g.nodes()[i];
    bool published = n.year_counts.empty() ? n.first_year <= up_to_year
                                           : n.year_counts.begin()->first <= up_to_year;
    if (!published) continue;
    GraphNode copy = n;
    copy.year_counts.erase(copy.year_counts.upper_bound(up_to_year), copy.year_counts.end());
    remap[i] = out.add_node(std::move(copy));
  }
  for (const auto& e : g.edges()) {
    if (e.first_co_year > up_to_year) continue;
    if (remap[e.u] == SIZE_MAX || remap[e.v] == SIZE_MAX) {
      throw Error(ErrorKind::precondition, "edge co-occurs before one of its nodes is published");
    }
    std::map<int, int> yc(e.year_counts.begin(), e.year_counts.upper_bound(up_to_year));
    double w = e.weight;
    if (!e.year_counts.empty()) {
      w = 0;
      for (const auto& [y, c] : yc) w += c;
    }
    GraphEdge& ne = out.add_to_edge(remap[e.u], remap[e.v], w);
    ne.first_co_year = e.first_co_year;
    ne.year_counts = std::move(yc);
  }
  out.normalize();
  return out;
}

std::vector<double> betweenness(const WeightedGraph& g, unsigned threads) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = chunk_count(n, kChunk);
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(n, 0.0));

  parallel_chunks(
      n, kChunk,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto& cb = partial[chunk];
        std::vector<std::size_t> stack, queue;
        std::vector<std::vector<std::size_t>> pred(n);
        std::vector<double> sigma(n), delta(n);
        std::vector<long> dist(n);
        stack.reserve(n);
        queue.reserve(n);
        for (std::size_t s = begin; s < end; ++s) {
          for (std::size_t v = 0; v < n; ++v) {
            pred[v].clear();
            sigma[v] = 0;
            delta[v] = 0;
            dist[v] = -1;
          }
          stack.clear();
          queue.clear();
          sigma[s] = 1;
          dist[s] = 0;
          queue.push_back(s);
          for (std::size_t head = 0; head < queue.size(); ++head) {
            std::size_t v = queue[head];
            stack.push_back(v);
            for (std::size_t w : adj[v]) {
              if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
              }
              if (dist[w] == dist[v] + 1) {
                sigma[w] += sigma[v];
                pred[w].push_back(v);
              }
            }
          }
          while (!stack.empty()) {
            std::size_t w = stack.back();
            stack.pop_back();
            for (std::size_t v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) cb[w] += delta[w];
          }
        }
      },
      threads);

  std::vector<double> bc(n, 0.0);
  for (const auto& cb : partial) {
    for (std::size_t v = 0; v < n; ++v) bc[v] += cb[v];
  }
  for (auto& x : bc) x /= 2.0;
  return bc;
}

CentralityTable centralities(const WeightedGraph& g, unsigned threads) {
  CentralityTable t(g.node_count());
  for (const auto& e : g.edges()) {
    ++t[e.u].degree;
    ++t[e.v].degree;
    t[e.u].weighted_degree += e.weight;
    t[e.v].weighted_degree += e.weight;
  }
  auto bc = betweenness(g, threads);
  for (std::size_t i = 0; i < t.size(); ++i) t[i].betweenness = bc[i];
  return t;
}

SpearmanResult path_dependence(const WeightedGraph& g, const CentralityTable& table) {
  if (table.size() != g.node_count()) throw Error(ErrorKind::invalid_argument, "centrality table size mismatch");
  int latest = std::numeric_limits<int>::min();
  for (const auto& n : g.nodes()) latest = std::max(latest, n.first_year);
  std::vector<double> age, bc;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    age.push_back(static_cast<double>(latest - g.nodes()[i].first_year));
    bc.push_back(table[i].betweenness);
  }
  return spearman(age, bc);
}

}  // namespace segmap
