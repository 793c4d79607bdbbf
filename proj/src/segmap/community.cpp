// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "segmap/error.hpp"

namespace segmap {

namespace {

constexpr double kGainEps = 1e-12;

struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self-loops, ascending
  std::vector<double> self;                              // internal weight, counted once
  std::vector<double> k;                                 // strength including 2 * self
  double m2 = 0;                                         // sum of k

  int size() const { return static_cast<int>(adj.size()); }
};

LevelGraph base_level(const WeightedGraph& g) {
  LevelGraph lg;
  const auto n = g.node_count();
  lg.adj.resize(n);
  lg.self.assign(n, 0.0);
  lg.k.assign(n, 0.0);
  for (const auto& e : g.edges()) {
    lg.adj[e.u].emplace_back(static_cast<int>(e.v), e.weight);
    lg.adj[e.v].emplace_back(static_cast<int>(e.u), e.weight);
    lg.k[e.u] += e.weight;
    lg.k[e.v] += e.weight;
  }
  for (auto& row : lg.adj) std::sort(row.begin(), row.end());
  for (double x : lg.k) lg.m2 += x;
  return lg;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<int>& comm, int count) {
  LevelGraph out;
  out.adj.resize(count);
  out.self.assign(count, 0.0);
  out.k.assign(count, 0.0);
  out.m2 = g.m2;
  std::vector<std::map<int, double>> acc(count);
  for (int i = 0; i < g.size(); ++i) {
    const int ci = comm[i];
    out.k[ci] += g.k[i];
    out.self[ci] += g.self[i];
    for (const auto& [j, w] : g.adj[i]) {
      const int cj = comm[j];
      if (ci == cj) {
        out.self[ci] += w / 2;
      } else {
        acc[ci][cj] += w;
      }
    }
  }
  for (int c = 0; c < count; ++c) out.adj[c].assign(acc[c].begin(), acc[c].end());
  return out;
}

// Uniform index in [0, bound) from one 64-bit draw.
std::size_t draw(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

std::vector<int> shuffled_order(int n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[draw(rng, static_cast<std::size_t>(i) + 1)]);
  return order;
}

int relabel(std::vector<int>& comm) {
  std::map<int, int> ids;
  for (auto& c : comm) {
    auto [it, inserted] = ids.emplace(c, static_cast<int>(ids.size()));
    c = it->second;
  }
  return static_cast<int>(ids.size());
}

// Repeated passes of single-node moves. With `parent`, a node only
// considers communities reached through neighbors of the same parent.
// Community ids must lie in [0, n).
bool local_moving(const LevelGraph& g, std::vector<int>& comm, std::mt19937_64& rng, double gamma,
                  const std::vector<int>* parent) {
  const int n = g.size();
  if (g.m2 <= 0 || n == 0) return false;
  std::vector<double> tot(n, 0.0);
  for (int i = 0; i < n; ++i) tot[comm[i]] += g.k[i];
  std::vector<double> nw(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<int> touched;
  auto order = shuffled_order(n, rng);
  bool any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (int i : order) {
      const int c = comm[i];
      touched.clear();
      for (const auto& [j, w] : g.adj[i]) {
        if (parent && (*parent)[j] != (*parent)[i]) continue;
        const int cj = comm[j];
        if (!seen[cj]) {
          seen[cj] = 1;
          touched.push_back(cj);
        }
        nw[cj] += w;
      }
      tot[c] -= g.k[i];
      int best = c;
      double best_gain = nw[c] - gamma * tot[c] * g.k[i] / g.m2;
      for (int cj : touched) {
        if (cj == c) continue;
        double gain = nw[cj] - gamma * tot[cj] * g.k[i] / g.m2;
        if (gain > best_gain + kGainEps) {
          best = cj;
          best_gain = gain;
        }
      }
      tot[best] += g.k[i];
      if (best != c) {
        comm[i] = best;
        moved = true;
        any = true;
      }
      for (int cj : touched) {
        nw[cj] = 0;
        seen[cj] = 0;
      }
    }
  }
  return any;
}

// Full multi-level Louvain from `init` (ids in [0, n)); returns the
// membership of every node of `base`.
std::vector<int> run_louvain(const LevelGraph& base, std::vector<int> init, std::mt19937_64& rng, double gamma) {
  const int n0 = base.size();
  std::vector<int> membership(n0);
  std::iota(membership.begin(), membership.end(), 0);
  LevelGraph g = base;
  std::vector<int> comm = std::move(init);
  for (;;) {
    local_moving(g, comm, rng, gamma, nullptr);
    const int count = relabel(comm);
    for (auto& m : membership) m = comm[m];
    if (count == g.size()) break;
    g = aggregate(g, comm, count);
    comm.resize(count);
    std::iota(comm.begin(), comm.end(), 0);
  }
  return membership;
}

std::vector<int> singletons(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

double modularity(const WeightedGraph& g, const std::vector<int>& community, double gamma) {
  if (community.size() != g.node_count()) {
    throw Error(ErrorKind::invalid_argument, "partition covers " + std::to_string(community.size()) + " of " +
                                                 std::to_string(g.node_count()) + " nodes");
  }
  for (int c : community) {
    if (c < 0) throw Error(ErrorKind::invalid_argument, "negative community id");
  }
  const double m = g.total_weight();
  if (m <= 0) return 0.0;
  std::map<int, double> in, tot;
  for (const auto& e : g.edges()) {
    tot[community[e.u]] += e.weight;
    tot[community[e.v]] += e.weight;
    if (community[e.u] == community[e.v]) in[community[e.u]] += 2 * e.weight;
  }
  double q = 0;
  for (const auto& [c, t] : tot) {
    double a = t / (2 * m);
    q += in[c] / (2 * m) - gamma * a * a;
  }
  return q;
}

CommunityPartition louvain(const WeightedGraph& g, std::uint64_t seed, double gamma,
                           const std::optional<std::vector<int>>& initial) {
  if (g.node_count() == 0) throw Error(ErrorKind::precondition, "louvain on an empty graph");
  std::vector<int> init = singletons(g.node_count());
  if (initial) {
    if (initial->size() != g.node_count()) throw Error(ErrorKind::invalid_argument, "initial partition size mismatch");
    init = *initial;
    relabel(init);
  }
  std::mt19937_64 rng(seed);
  CommunityPartition p;
  p.community = relabel_communities(run_louvain(base_level(g), std::move(init), rng, gamma));
  p.modularity = modularity(g, p.community, gamma);
  return p;
}

CommunityPartition slm_cluster(const WeightedGraph& g, std::uint64_t seed, double gamma, int max_rounds) {
  if (g.node_count() == 0) throw Error(ErrorKind::precondition, "slm_cluster on an empty graph");
  const LevelGraph base = base_level(g);
  std::mt19937_64 rng(seed);
  std::vector<int> best = relabel_communities(run_louvain(base, singletons(g.node_count()), rng, gamma));
  double best_q = modularity(g, best, gamma);

  for (int round = 0; round < max_rounds; ++round) {
    std::vector<int> refined = singletons(g.node_count());
    local_moving(base, refined, rng, gamma, &best);
    const int count = relabel(refined);
    LevelGraph agg = aggregate(base, refined, count);
    std::vector<int> init(count, 0);
    for (std::size_t v = 0; v < refined.size(); ++v) init[refined[v]] = best[v];
    relabel(init);
    std::vector<int> coarse = run_louvain(agg, std::move(init), rng, gamma);
    std::vector<int> candidate(g.node_count());
    for (std::size_t v = 0; v < candidate.size(); ++v) candidate[v] = coarse[refined[v]];
    candidate = relabel_communities(candidate);
    double q = modularity(g, candidate, gamma);
    if (q > best_q + kGainEps) {
      best = std::move(candidate);
      best_q = q;
    } else {
      break;
    }
  }
  return {std::move(best), best_q};
}

}  // namespace segmap
