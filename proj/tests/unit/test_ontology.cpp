// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "segmap/error.hpp"
#include "segmap/hashing.hpp"
#include "segmap/ontology.hpp"

using namespace segmap;
using doctest::Approx;
using segmap::testing::TempDir;

namespace {

std::string header(std::size_t dim) { return "{\"dimension\": " + std::to_string(dim) + ", \"model_tag\": \"test\"}\n"; }

std::string vector_line(const std::string& term, const std::vector<double>& v) {
  nlohmann::json j = {{"term", term}, {"vector", v}};
  return j.dump() + "\n";
}

DistanceMatrix from_points(const std::vector<double>& xs) {
  DistanceMatrix d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) d.set(i, j, std::abs(xs[i] - xs[j]));
  return d;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::io;
}

std::string type_name(int i) { return std::string(1, static_cast<char>('A' + i)); }

TypeLabeling labeled(std::map<std::string, std::set<std::string>> labels) {
  TypeLabeling t;
  for (const auto& [term, ls] : labels) t.universe.insert(ls.begin(), ls.end());
  t.labels = std::move(labels);
  return t;
}

}  // namespace

TEST_CASE("embedding file with three 768-dimensional terms") {
  std::string text = header(768);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (const auto* term : {"racial segregation", "gender segregation", "school segregation"}) {
    std::vector<double> v(768);
    for (auto& x : v) x = g(rng);
    text += vector_line(term, v);
  }
  auto t = parse_embeddings(text);
  CHECK(t.dimension == 768);
  CHECK(t.model_tag == "test");
  CHECK(t.terms.size() == 3);
  CHECK(t.index_of("gender segregation") == 1u);
  CHECK(!t.index_of("age segregation"));
  CHECK(parse_embeddings(serialize_embeddings(t)).vectors == t.vectors);
  auto sel = t.select({"school segregation", "racial segregation"});
  CHECK(sel.terms == std::vector<std::string>{"school segregation", "racial segregation"});
  CHECK(kind_of([&] { t.select({"age segregation"}); }) == ErrorKind::not_found);
  CHECK(missing_terms(t, {"age segregation", "racial segregation", "class segregation"}) ==
        std::vector<std::string>{"age segregation", "class segregation"});
}

TEST_CASE("malformed embedding files are rejected") {
  CHECK(kind_of([] { parse_embeddings(header(2) + vector_line("a", {1, 2}) + vector_line("b", {1, 2, 3})); }) ==
        ErrorKind::parse);
  CHECK(kind_of([] { parse_embeddings(header(2) + "{\"term\": \"a\", \"vector\": [1, NaN]}\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_embeddings(header(2) + vector_line("a", {1, 2}) + vector_line("a", {3, 4})); }) ==
        ErrorKind::parse);
  CHECK(kind_of([] { parse_embeddings("{\"model_tag\": \"x\"}\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_embeddings(header(1) + "{\"term\": \"a\", \"vector\": [\"x\"]}\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { parse_embeddings(header(1) + "not json\n"); }) == ErrorKind::parse);
}

TEST_CASE("cosine distance") {
  auto t = parse_embeddings(header(2) + vector_line("v1", {1, 0}) + vector_line("v2", {1, 1}) +
                            vector_line("v3", {-2, 0}));
  auto d = cosine_distance_matrix(t);
  CHECK(d.at(0, 1) == Approx(1 - 1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(d.at(0, 1) == Approx(0.29289).epsilon(1e-5));
  CHECK(d.at(0, 2) == Approx(2.0));
  CHECK(d.at(1, 1) == 0.0);
  d.validate();
}

TEST_CASE("lexical fallback distance") {
  auto d = lexical_fallback_similarity({"racial residential segregation", "residential segregation", "school segregation"});
  CHECK(d.at(0, 1) == Approx(0.5).epsilon(1e-12));
  CHECK(d.at(1, 2) == 1.0);
  CHECK(d.at(0, 2) == 1.0);
}

TEST_CASE("distance matrix validation") {
  DistanceMatrix d(2);
  d.set(0, 1, -1);
  CHECK_THROWS_AS(d.validate(), Error);
  d.set(0, 1, std::nan(""));
  CHECK_THROWS_AS(d.validate(), Error);
}

TEST_CASE("complete linkage on points on a line") {
  auto dg = agglomerative_complete(from_points({0, 1, 5, 6, 20}));
  REQUIRE(dg.merges.size() == 4);
  CHECK((dg.merges[0].a == 0 && dg.merges[0].b == 1 && dg.merges[0].distance == 1 && dg.merges[0].id == 5));
  CHECK((dg.merges[1].a == 2 && dg.merges[1].b == 3 && dg.merges[1].distance == 1 && dg.merges[1].id == 6));
  CHECK((dg.merges[2].a == 5 && dg.merges[2].b == 6 && dg.merges[2].distance == 6 && dg.merges[2].size == 4));
  CHECK((dg.merges[3].a == 4 && dg.merges[3].b == 7 && dg.merges[3].distance == 20 && dg.merges[3].size == 5));

  CHECK(cut_dendrogram(dg, {2, std::nullopt}) == std::vector<int>{0, 0, 0, 0, 1});
  CHECK(cut_dendrogram(dg, {3, std::nullopt}) == std::vector<int>{0, 0, 1, 1, 2});
  CHECK(cut_dendrogram(dg, {5, std::nullopt}) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(cut_dendrogram(dg, {1, std::nullopt}) == std::vector<int>{0, 0, 0, 0, 0});
  CHECK(cut_dendrogram(dg, {std::nullopt, 5.9}) == std::vector<int>{0, 0, 1, 1, 2});
  CHECK(cut_dendrogram(dg, {std::nullopt, 6.0}) == std::vector<int>{0, 0, 0, 0, 1});
  CHECK(cut_dendrogram(dg, {std::nullopt, 0.5}) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(cut_dendrogram(dg, {0, std::nullopt}), Error);
  CHECK_THROWS_AS(cut_dendrogram(dg, {6, std::nullopt}), Error);
  CHECK_THROWS_AS(cut_dendrogram(dg, {2, 1.0}), Error);
  CHECK(Dendrogram::from_json(dg.to_json()).to_json() == dg.to_json());
}

TEST_CASE("complete linkage equals brute force on every small fixture") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    DistanceMatrix d(n);
    // Small integer distances force ties.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, static_cast<double>(rng() % (trial % 2 ? 4 : 50)));
    auto dg = agglomerative_complete(d);
    auto want = segmap::testing::brute_force_complete_linkage(d);
    REQUIRE(dg.merges.size() == want.size());
    for (std::size_t m = 0; m < want.size(); ++m) {
      INFO("trial " << trial << " merge " << m);
      CHECK(dg.merges[m].a == want[m].a);
      CHECK(dg.merges[m].b == want[m].b);
      CHECK(dg.merges[m].distance == want[m].distance);
      CHECK(dg.merges[m].id == static_cast<int>(n + m));
      if (m > 0) CHECK(dg.merges[m].distance >= dg.merges[m - 1].distance);
    }
  }
}

TEST_CASE("merge distances never decrease on random embeddings") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::string text = header(8);
    for (int i = 0; i < 40; ++i) {
      std::vector<double> v(8);
      for (auto& x : v) x = g(rng);
      text += vector_line("t" + std::to_string(i), v);
    }
    auto dg = agglomerative_complete(cosine_distance_matrix(parse_embeddings(text)));
    for (std::size_t m = 1; m < dg.merges.size(); ++m) CHECK(dg.merges[m].distance >= dg.merges[m - 1].distance);
  }
}

TEST_CASE("labeling from clusters and overrides") {
  const std::vector<std::string> terms{"racial segregation", "school segregation", "gender segregation"};
  const std::vector<int> clusters{0, 1, 0};
  const std::map<int, std::string> names{{0, "Social category"}, {1, "Institution"}};
  auto t = apply_labeling(terms, clusters, names, {{"school segregation", {"Institution", "Education"}},
                                                   {"gender segregation", {}}});
  CHECK(t.labels.at("racial segregation") == std::set<std::string>{"Social category"});
  CHECK(t.labels.at("school segregation") == std::set<std::string>{"Education", "Institution"});
  CHECK(t.labels.at("gender segregation") == std::set<std::string>{"Social category"});
  CHECK(t.default_labels.at("school segregation") == std::set<std::string>{"Institution"});
  CHECK(t.universe == std::set<std::string>{"Education", "Institution", "Social category"});
  CHECK(TypeLabeling::from_json(t.to_json()).to_json() == t.to_json());

  CHECK(kind_of([&] { apply_labeling(terms, clusters, names, {{"age segregation", {"X"}}}); }) == ErrorKind::not_found);
  CHECK(kind_of([&] { apply_labeling(terms, clusters, {{0, "Social category"}}, {}); }) ==
        ErrorKind::invalid_argument);
  CHECK(kind_of([&] { apply_labeling(terms, clusters, names, {}, std::set<std::string>{"Institution"}); }) ==
        ErrorKind::not_found);
}

TEST_CASE("labels are bounded at eight") {
  std::vector<std::string> eight, nine;
  for (int i = 1; i <= 9; ++i) {
    if (i <= 8) eight.push_back("T" + std::to_string(i));
    nine.push_back("T" + std::to_string(i));
  }
  auto t = apply_labeling({"a segregation"}, {0}, {{0, "T1"}}, {{"a segregation", eight}});
  CHECK(t.labels.at("a segregation").size() == 8);
  CHECK_THROWS_AS(apply_labeling({"a segregation"}, {0}, {{0, "T1"}}, {{"a segregation", nine}}), Error);
  CHECK_THROWS_AS(parse_label_overrides("form,l1,l2,l3,l4,l5,l6,l7,l8\na,1,2,3,4,5,6,7,8,9\n"), Error);
}

TEST_CASE("label file parsers") {
  CHECK(parse_cluster_labels("cluster,label\n0,Spatial\n1, Social \n2,\n") ==
        std::map<int, std::string>{{0, "Spatial"}, {1, "Social"}});
  CHECK_THROWS_AS(parse_cluster_labels("cluster,label\nx,Spatial\n"), Error);
  CHECK_THROWS_AS(parse_cluster_labels("cluster,label\n0,A\n0,B\n"), Error);
  auto ov = parse_label_overrides("form,label1,label2\nschool segregation,Institution,\nage segregation,,\n");
  CHECK(ov.at("school segregation") == std::vector<std::string>{"Institution"});
  CHECK(ov.at("age segregation").empty());
  CHECK(parse_type_universe("# types\nSpatial\n\nSocial # note\n") == std::set<std::string>{"Social", "Spatial"});
}

TEST_CASE("type network on a hand-labeled fixture") {
  auto og = type_network(labeled({{"f1", {"A", "B"}}, {"f2", {"A", "B"}}, {"f3", {"A", "C"}}}));
  CHECK(og.type_edges.at({"A", "B"}) == 2);
  CHECK(og.type_edges.at({"A", "C"}) == 1);
  CHECK(!og.type_edges.count({"B", "C"}));
  CHECK(og.type_freq == std::map<std::string, std::size_t>{{"A", 3}, {"B", 2}, {"C", 1}});
  auto g = og.to_graph();
  CHECK(g.node_count() == 6);
  CHECK(g.edge_weight(*g.find("type:A"), *g.find("type:B")) == 2);
  CHECK(g.edge_weight(*g.find("form:f3"), *g.find("type:C")) == 1);
}

TEST_CASE("type network invariants on random labelings") {
  std::mt19937_64 rng(2026);
  const std::vector<std::string> types{"A", "B", "C", "D", "E", "F", "G", "H", "I", "J"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::map<std::string, std::set<std::string>> labels;
    const int forms = 1 + static_cast<int>(rng() % 30);
    std::size_t total = 0;
    for (int f = 0; f < forms; ++f) {
      std::set<std::string> ls;
      const std::size_t k = 1 + rng() % 8;
      while (ls.size() < k) ls.insert(types[rng() % types.size()]);
      total += ls.size();
      labels["f" + std::to_string(f)] = ls;
    }
    auto og = type_network(labeled(labels));
    std::size_t freq_sum = 0;
    for (const auto& [_, n] : og.type_freq) freq_sum += n;
    REQUIRE(freq_sum == total);
    for (const auto& [ab, w] : og.type_edges) {
      REQUIRE(ab.first < ab.second);
      REQUIRE(w <= std::min(og.type_freq.at(ab.first), og.type_freq.at(ab.second)));
    }
  }
}

TEST_CASE("labeling store persists edits and enforces bounds") {
  TempDir dir;
  auto t = labeled({{"f1", {"A"}}, {"f2", {"B"}}});
  t.universe.insert({"C", "D", "E", "F", "G", "H", "I"});
  write_file_atomic(dir / "labeling.json", t.to_json().dump(2));
  auto store = LabelingStore::open(dir / "labeling.json");
  store->set_labels("f1", {"A", "C"});
  CHECK(LabelingStore::open(dir / "labeling.json")->snapshot().labels.at("f1") == std::set<std::string>{"A", "C"});
  CHECK(kind_of([&] { store->set_labels("f1", {}); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([&] { store->set_labels("f1", {"A", "B", "C", "D", "E", "F", "G", "H", "I"}); }) ==
        ErrorKind::invalid_argument);
  CHECK(kind_of([&] { store->set_labels("f1", {"Z"}); }) == ErrorKind::not_found);
  CHECK(kind_of([&] { store->set_labels("nope", {"A"}); }) == ErrorKind::not_found);
  CHECK(kind_of([&] { store->set_labels("f1", {"A", "A"}); }) == ErrorKind::invalid_argument);
  store->set_labels("f2", {"A", "B", "C", "D", "E", "F", "G", "H"});
  CHECK(store->snapshot().labels.at("f1") == std::set<std::string>{"A", "C"});

  std::vector<std::thread> pool;
  for (int i = 0; i < 8; ++i) pool.emplace_back([&, i] { store->set_labels(i % 2 ? "f1" : "f2", {type_name(i)}); });
  for (auto& th : pool) th.join();
  auto reread = LabelingStore::open(dir / "labeling.json")->snapshot();
  CHECK(reread.to_json() == store->snapshot().to_json());
}
