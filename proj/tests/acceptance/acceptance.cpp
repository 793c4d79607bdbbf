// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

// One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "builders.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "segmap/codebook.hpp"
#include "segmap/community.hpp"
#include "segmap/conet.hpp"
#include "segmap/extract.hpp"
#include "segmap/metrics.hpp"
#include "segmap/ontology.hpp"
#include "segmap/scholnet.hpp"

using namespace segmap;
using namespace segmap::testing;

namespace {

// Collects failed sub-checks for one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }
  std::string detail() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + f;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v, int digits = 17) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

int failed = 0;

void criterion(const std::string& name, const std::function<void(Checks&)>& body) {
  Checks c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  if (!c.ok()) ++failed;
  std::printf("%s  %-28s %s\n", c.ok() ? "PASS" : "FAIL", name.c_str(), c.detail().c_str());
  std::fflush(stdout);
}

void extraction_golden(Checks& c) {
  const auto t0 = std::chrono::steady_clock::now();
  auto store = filter_by_anchor(ingest_csv_text(read_file(fixture("abstracts20.csv")), std::nullopt, "abstracts20.csv"),
                                "segregation");
  auto lex = StopLexicon::load_dir(data_path("lexicon"));
  auto csv = candidate_csv(run_extraction(store, "segregation", lex));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(csv == read_file(fixture("abstracts20_candidates.golden.csv")), "candidate CSV differs from golden");
  c.expect(secs < 1.0, "runtime " + fmt(secs, 3) + " s");
  c.note("runtime " + fmt(secs, 3) + " s");
}

void occurrence_conservation(Checks& c) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto sc = synthetic_corpus(seed, "segregation");
    auto cs = run_extraction(sc.store, "segregation", default_lexicon());
    c.expect(total_occurrences(cs) == sc.qualifying, "seed " + std::to_string(seed));
  }
  c.note("100 corpora");
}

void entropy(Checks& c) {
  double worst = 0;
  for (int n = 2; n <= 1000; ++n) {
    std::vector<double> w(static_cast<std::size_t>(n), 1.0);
    worst = std::max(worst, std::abs(shannon_entropy(w) - std::log(static_cast<double>(n))));
  }
  c.expect(worst <= 1e-12, "uniform max error " + fmt(worst));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(2 + trial % 40);
    for (auto& x : w) x = u(rng);
    const double h = shannon_entropy(w);
    auto shuffled = w;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    c.expect(shannon_entropy(shuffled) == h, "permutation trial " + std::to_string(trial));
    for (double f : {0.125, 2.0, 1024.0}) {
      auto scaled = w;
      for (auto& x : scaled) x *= f;
      c.expect(shannon_entropy(scaled) == h, "scale " + fmt(f) + " trial " + std::to_string(trial));
    }
    // Integer counts times an integer factor: every product and ratio is exact.
    std::vector<double> counts(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) counts[i] = 1 + static_cast<double>(rng() % 500);
    const double k = 2 + static_cast<double>(rng() % 999);
    auto scaled = counts;
    for (auto& x : scaled) x *= k;
    c.expect(shannon_entropy(scaled) == shannon_entropy(counts), "count scale trial " + std::to_string(trial));
  }
  c.note("uniform max error " + fmt(worst, 3));
}

void exponential_fit(Checks& c) {
  std::vector<std::pair<int, double>> pts;
  for (int y = 1960; y <= 2020; ++y) pts.emplace_back(y, 2 * std::exp(0.1 * y));
  auto fit = exp_fit(YearSeries(pts));
  const double ea = std::abs(fit.a / 2 - 1), eb = std::abs(fit.b / 0.1 - 1);
  c.expect(ea < 1e-9 && eb < 1e-9, "noiseless rel error a " + fmt(ea, 3) + " b " + fmt(eb, 3));
  c.expect(std::abs(fit.r2 - 1) < 1e-12, "noiseless r2 " + fmt(fit.r2));

  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.05);
  pts.clear();
  for (int x = 0; x < 60; ++x) pts.emplace_back(x, 1.5 * std::exp(0.06 * x) * (1 + noise(rng)));
  auto nf = exp_fit(YearSeries(pts));
  const double na = std::abs(nf.a / 1.5 - 1), nb = std::abs(nf.b / 0.06 - 1);
  c.expect(na < 0.05 && nb < 0.05, "noisy rel error a " + fmt(na, 3) + " b " + fmt(nb, 3));
  c.note("noiseless r2 " + fmt(fit.r2) + ", noisy rel error a " + fmt(na, 3) + " b " + fmt(nb, 3));
}

void betweenness_check(Checks& c) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 1 + rng() % 12;
    const double p = 0.15 + 0.6 * static_cast<double>(rng() % 100) / 100.0;
    auto g = random_graph(n, p, seed * 7919);
    auto got = betweenness(g, 1 + static_cast<unsigned>(seed % 3));
    auto want = brute_force_betweenness(g);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < n; ++i) same = std::abs(got[i] - want[i]) <= 1e-9;
    c.expect(same, "random graph seed " + std::to_string(seed));
  }
  auto path = graph_from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  c.expect(betweenness(path) == std::vector<double>{0, 3, 4, 3, 0}, "path graph");
  auto star = graph_from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  c.expect(betweenness(star) == std::vector<double>{10, 0, 0, 0, 0, 0}, "star graph");
  c.note("200 random graphs");
}

void louvain_modularity(Checks& c) {
  auto p = louvain(two_triangles(), 42);
  c.expect(p.community_count() == 2, "two triangles: " + std::to_string(p.community_count()) + " communities");
  c.expect(std::abs(p.modularity - 0.5) <= 1e-12, "two triangles Q " + fmt(p.modularity));
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto g = random_graph(3 + seed % 15, 0.3, seed);
    const double q = modularity(g, std::vector<int>(g.node_count(), 0));
    c.expect(std::abs(q) <= 1e-12, "all-in-one Q " + fmt(q) + " seed " + std::to_string(seed));
  }
  auto blocks = planted_blocks(4, 10, 0.9, 0.05, 12345);
  std::vector<int> truth;
  for (int b = 0; b < 4; ++b)
    for (int i = 0; i < 10; ++i) truth.push_back(b);
  c.expect(same_partition(louvain(blocks, 42).community, truth), "planted 4-block not recovered");
  auto g = random_graph(60, 0.08, 3);
  auto first = louvain(g, 7);
  for (int run = 0; run < 10; ++run) {
    auto again = louvain(g, 7);
    c.expect(again.community == first.community && again.modularity == first.modularity, "run " + std::to_string(run));
  }
  c.note("two triangles Q " + fmt(p.modularity) + ", 10 identical runs");
}

void slm_vs_louvain(Checks& c) {
  std::vector<WeightedGraph> graphs{two_triangles(), planted_blocks(4, 10, 0.9, 0.05, 12345),
                                    planted_blocks(6, 8, 0.7, 0.1, 8)};
  for (std::uint64_t seed = 1; seed <= 30; ++seed) graphs.push_back(random_graph(40, 0.1, seed));
  double min_gain = 1e300;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (std::uint64_t seed : {1u, 42u}) {
      const double l = louvain(graphs[i], seed).modularity;
      const double s = slm_cluster(graphs[i], seed).modularity;
      min_gain = std::min(min_gain, s - l);
      c.expect(s >= l, "fixture " + std::to_string(i) + " seed " + std::to_string(seed));
    }
  }
  c.note(std::to_string(graphs.size()) + " fixtures, min gain " + fmt(min_gain, 3));
}

std::vector<DocumentRecord> citing(const std::string& prefix, int n, const std::vector<std::string>& refs) {
  std::vector<DocumentRecord> out;
  for (int i = 0; i < n; ++i) out.push_back(Doc(prefix + std::to_string(i)).refs(refs));
  return out;
}

std::vector<std::string> node_ids(const WeightedGraph& g) {
  std::vector<std::string> out;
  for (const auto& n : g.nodes()) out.push_back(n.id);
  return out;
}

void scholarly_thresholds(Checks& c) {
  auto docs = citing("p", 10, {"alpha|1990|alpha", "beta|1991|beta"});
  auto nine = citing("q", 9, {"gamma|1992|gamma", "delta|1993|delta"});
  docs.insert(docs.end(), nine.begin(), nine.end());
  auto cocit = build_cocitation(make_store(docs));
  c.expect(node_ids(cocit) == std::vector<std::string>{"alpha|1990|alpha", "beta|1991|beta"} &&
               cocit.edge_count() == 1 && cocit.edges()[0].weight == 10,
           "co-citation 10 kept / 9 dropped");

  docs = citing("ab", 2, {"a|2000|a", "b|2000|b"});
  for (const auto& part : {citing("gh", 2, {"g|2000|g", "h|2000|h"}),
                           citing("cf", 1, {"c|2000|c", "d|2000|d", "e|2000|e", "f|2000|f"})})
    docs.insert(docs.end(), part.begin(), part.end());
  CocitationOptions opt;
  opt.min_cocitations = 2;
  opt.top_k = 2;
  c.expect(node_ids(build_cocitation(make_store(docs), opt)) == std::vector<std::string>{"a|2000|a", "b|2000|b"},
           "filter-then-top-k");
  CocitationOptions loose;
  loose.min_cocitations = 1;
  auto full = build_cocitation(make_store(docs), loose);
  std::vector<std::string> reverse;
  for (auto i : top_by_link_strength(full, 2)) reverse.push_back(full.nodes()[i].id);
  c.expect(reverse == std::vector<std::string>{"c|2000|c", "d|2000|d"}, "reverse-order fixture does not differ");

  // Citations per journal: 4, 9, 6, 2.
  std::vector<DocumentRecord> journals{
      Doc("j0").source("Urban Studies").cited_by(4).refs({"a|2000|a", "b|2000|b", "c|2000|c"}),
      Doc("j1").source("Social Forces").cited_by(9).refs({"b|2000|b", "c|2000|c", "d|2000|d"}),
      Doc("j2").source("Demography").cited_by(6).refs({"c|2000|c", "e|2000|e"}),
      Doc("j3").source("Housing Policy Debate").cited_by(2).refs({"a|2000|a", "e|2000|e"})};
  auto coupling = build_coupling(make_store(journals), 5);
  c.expect(node_ids(coupling) == std::vector<std::string>{"demography", "social forces"} &&
               coupling.edge_count() == 1 && coupling.edges()[0].weight == 1,
           "coupling min 5");

  std::vector<DocumentRecord> cdocs;
  auto add = [&](int count, std::set<std::string> countries) {
    for (int i = 0; i < count; ++i) cdocs.push_back(Doc("c" + std::to_string(cdocs.size())).countries(countries));
  };
  add(4, {"United States"});
  add(3, {"United States", "Canada"});
  add(2, {"Canada", "Mexico"});
  add(2, {"Brazil"});
  add(2, {"Brazil", "United States"});
  add(3, {"Chile", "Brazil"});
  add(4, {"Mexico"});
  c.expect(node_ids(build_coauthorship_countries(make_store(cdocs), 5)) ==
               std::vector<std::string>{"Brazil", "Canada", "Mexico", "United States"},
           "country min 5");
  c.note("co-citation 10/9, coupling 5, countries 5, filter before top-k");
}

void trigram_precedence(Checks& c) {
  CandidateSet forms{bare_form("occupational segregation", 1975), bare_form("gender segregation", 1985),
                     bare_form("racial segregation", 1980),       bare_form("residential segregation", 1990),
                     bare_form("school segregation", 1970),       bare_form("occupational gender segregation", 1987),
                     bare_form("racial residential segregation", 1995), bare_form("gender school segregation", 1984),
                     bare_form("urban school segregation", 1999)};
  // Hand count: of the three qualifying trigrams only occupational gender
  // segregation (1987) follows the first co-occurrence of its bigrams (1986).
  CoFirstYears co{{{"gender segregation", "occupational segregation"}, 1986},
                  {{"racial segregation", "residential segregation"}, 1996}};
  auto st = trigram_precedence_stats(forms, co);
  const double pct = 100 * st.frac_after_bigrams();
  c.expect(st.qualifying == 3 && st.after_bigrams == 2, "counts " + std::to_string(st.after_bigrams) + "/" +
                                                            std::to_string(st.qualifying));
  c.expect(std::abs(pct - 66.7) <= 0.1, "after bigrams " + fmt(pct, 4) + "%");
  c.expect(st.after_cooccurrence == 1, "after co-occurrence " + std::to_string(st.after_cooccurrence));
  c.note("after bigrams " + fmt(pct, 4) + "%, after co-occurrence " + std::to_string(st.after_cooccurrence) + "/3");
}

void clustering(Checks& c) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, static_cast<double>(rng() % (trial % 2 ? 4 : 50)));
    auto dg = agglomerative_complete(d);
    auto want = brute_force_complete_linkage(d);
    bool same = dg.merges.size() == want.size();
    for (std::size_t m = 0; same && m < want.size(); ++m) {
      same = dg.merges[m].a == want[m].a && dg.merges[m].b == want[m].b && dg.merges[m].distance == want[m].distance;
      if (m > 0) c.expect(dg.merges[m].distance >= dg.merges[m - 1].distance, "decreasing merge trial " + std::to_string(trial));
    }
    c.expect(same, "linkage trial " + std::to_string(trial));
  }
  const std::vector<double> xs{0, 1, 5, 6, 20};
  DistanceMatrix line(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) line.set(i, j, std::abs(xs[i] - xs[j]));
  auto dg = agglomerative_complete(line);
  c.expect(cut_dendrogram(dg, {2, std::nullopt}) == std::vector<int>{0, 0, 0, 0, 1}, "cut k=2");
  c.expect(cut_dendrogram(dg, {3, std::nullopt}) == std::vector<int>{0, 0, 1, 1, 2}, "cut k=3");
  c.expect(cut_dendrogram(dg, {5, std::nullopt}) == std::vector<int>{0, 1, 2, 3, 4}, "cut k=5");
  c.note("600 fixtures");
}

void type_network_check(Checks& c) {
  TypeLabeling t;
  t.labels = {{"f1", {"A", "B"}}, {"f2", {"A", "B"}}, {"f3", {"A", "C"}}};
  t.universe = {"A", "B", "C"};
  auto og = type_network(t);
  c.expect(og.type_edges.at({"A", "B"}) == 2 && og.type_edges.at({"A", "C"}) == 1 && og.type_edges.size() == 2,
           "hand fixture");
  std::mt19937_64 rng(2026);
  const std::vector<std::string> types{"A", "B", "C", "D", "E", "F", "G", "H", "I", "J"};
  for (int trial = 0; trial < 1000; ++trial) {
    TypeLabeling r;
    const int forms = 1 + static_cast<int>(rng() % 30);
    for (int f = 0; f < forms; ++f) {
      std::set<std::string> ls;
      const std::size_t k = 1 + rng() % 8;
      while (ls.size() < k) ls.insert(types[rng() % types.size()]);
      r.universe.insert(ls.begin(), ls.end());
      r.labels["f" + std::to_string(f)] = ls;
    }
    auto net = type_network(r);
    for (const auto& [ab, w] : net.type_edges)
      c.expect(w <= std::min(net.type_freq.at(ab.first), net.type_freq.at(ab.second)), "trial " + std::to_string(trial));
  }
  c.note("1000 random labelings");
}

CandidateSet ten_forms() {
  CandidateSet cs;
  for (const auto* t : {"age segregation", "class segregation", "digital segregation", "ethnic segregation",
                        "gender segregation", "income segregation", "racial segregation",
                        "residential segregation", "school segregation", "spatial segregation"})
    cs.push_back(bare_form(t));
  return cs;
}

void codebook_replay(Checks& c) {
  const auto forms = ten_forms();
  std::set<std::string> known;
  for (const auto& f : forms) known.insert(f.term());
  const std::vector<std::string> coders = {"ana", "ben", "cai", "dee"};
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    TempDir dir;
    const ConsensusPolicy policy{1 + pick(2), pick(2) == 1};
    Codebook cb(dir / "j.jsonl", forms, policy);
    for (int step = 0; step < 80; ++step) {
      const auto r = pick(20);
      const int round = cb.snapshot().open_round();
      if (r < 16) {
        cb.record({forms[pick(forms.size())].term(), coders[pick(coders.size())], round,
                   static_cast<Verdict>(pick(3)), "", "2026-01-01T00:00:00Z"});
      } else if (r < 18) {
        cb.import_valid({forms[pick(forms.size())].term()}, "imported");
      } else {
        std::vector<Resolution> res;
        std::vector<std::string> deferred;
        for (const auto& t : cb.discrepancies()) {
          if (pick(2)) res.push_back({t, pick(2) ? Verdict::valid : Verdict::invalid, ""});
          else deferred.push_back(t);
        }
        cb.resolve_round(res, deferred, "round");
      }
    }
    const auto live = cb.state_json().dump();
    c.expect(replay(read_journal(dir / "j.jsonl"), known, policy).to_json().dump() == live,
             "replay seed " + std::to_string(seed));
  }

  TempDir dir;
  Codebook cb(dir / "j.jsonl", forms);
  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (const auto* coder : {"ana", "ben", "cai"}) {
      Verdict v = i < 6 ? Verdict::valid : Verdict::invalid;
      if ((i == 2 || i == 7) && std::string(coder) == "cai") v = i == 2 ? Verdict::invalid : Verdict::valid;
      cb.record({forms[i].term(), coder, 1, v, "", "2026-01-01T00:00:00Z"});
    }
  }
  c.expect(cb.discrepancies() == std::vector<std::string>{"digital segregation", "residential segregation"},
           "discrepancy fixture");
  c.note("50 journals replayed");
}

void spearman_check(Checks& c) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  c.expect(spearman(x, std::vector<double>{10, 20, 30, 40, 50}).rho == 1.0, "monotone");
  c.expect(spearman(x, std::vector<double>{5, 4, 3, 2, 1}).rho == -1.0, "reversed");
  const double rho = spearman(x, std::vector<double>{2, 1, 4, 3, 5}).rho;
  c.expect(std::abs(rho - 0.7) <= 1e-12,
           "(1,2,3,4,5)/(2,1,4,3,5) gives " + fmt(rho) + ", expected 0.7; hand ranks give sum d^2 = 4, 1 - 24/120 = 0.8");
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(5 + trial % 30), b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = g(rng);
      b[i] = 0.5 * a[i] + g(rng);
    }
    std::vector<double> fa(a.size()), fb(b.size());
    std::transform(a.begin(), a.end(), fa.begin(), [](double v) { return std::exp(v); });
    std::transform(b.begin(), b.end(), fb.begin(), [](double v) { return v * v * v - 7; });
    c.expect(spearman(fa, fb).rho == spearman(a, b).rho, "monotone transform trial " + std::to_string(trial));
  }
}

}  // namespace

int main() {
  criterion("extraction-golden", extraction_golden);
  criterion("occurrence-conservation", occurrence_conservation);
  criterion("entropy", entropy);
  criterion("exponential-fit", exponential_fit);
  criterion("betweenness", betweenness_check);
  criterion("louvain-modularity", louvain_modularity);
  criterion("slm-vs-louvain", slm_vs_louvain);
  criterion("scholarly-thresholds", scholarly_thresholds);
  criterion("trigram-precedence", trigram_precedence);
  criterion("clustering", clustering);
  criterion("type-network", type_network_check);
  criterion("codebook-replay", codebook_replay);
  criterion("spearman", spearman_check);
  std::printf("%d of 13 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
