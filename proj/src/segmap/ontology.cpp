// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "segmap/csv.hpp"
#include "segmap/error.hpp"
#include "segmap/hashing.hpp"
#include "segmap/parallel.hpp"
#include "segmap/text.hpp"

namespace segmap {

using nlohmann::json;

std::optional<std::size_t> EmbeddingTable::index_of(const std::string& term) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] == term) return i;
  }
  return std::nullopt;
}

EmbeddingTable EmbeddingTable::select(const std::vector<std::string>& wanted) const {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < terms.size(); ++i) idx.emplace(terms[i], i);
  EmbeddingTable out;
  out.dimension = dimension;
  out.model_tag = model_tag;
  std::vector<std::string> absent;
  for (const auto& w : wanted) {
    auto it = idx.find(w);
    if (it == idx.end()) {
      absent.push_back(w);
      continue;
    }
    out.terms.push_back(w);
    out.vectors.push_back(vectors[it->second]);
  }
  if (!absent.empty()) {
    throw Error(ErrorKind::not_found, std::to_string(absent.size()) + " term(s) have no embedding: " + join(absent, "; "));
  }
  return out;
}

EmbeddingTable parse_embeddings(std::string_view jsonl) {
  EmbeddingTable t;
  bool header = false;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t nl = jsonl.find('\n', pos);
    std::string_view line = jsonl.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? jsonl.size() : nl + 1;
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "embedding file line " + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse, where + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::parse, where + "expected a JSON object");
    if (!header) {
      if (!j.contains("dimension") || !j["dimension"].is_number_integer() || j["dimension"].get<long>() <= 0) {
        throw Error(ErrorKind::parse, where + "header must carry a positive integer 'dimension'");
      }
      t.dimension = j["dimension"].get<std::size_t>();
      t.model_tag = j.value("model_tag", "");
      header = true;
      continue;
    }
    if (!j.contains("term") || !j["term"].is_string() || !j.contains("vector") || !j["vector"].is_array()) {
      throw Error(ErrorKind::parse, where + "expected {term, vector}");
    }
    std::string term = j["term"].get<std::string>();
    if (term.empty()) throw Error(ErrorKind::parse, where + "empty term");
    if (!seen.insert(term).second) throw Error(ErrorKind::parse, where + "duplicate term '" + term + "'");
    const auto& arr = j["vector"];
    if (arr.size() != t.dimension) {
      throw Error(ErrorKind::parse, where + "vector for '" + term + "' has dimension " + std::to_string(arr.size()) +
                                        ", header says " + std::to_string(t.dimension));
    }
    std::vector<double> v;
    v.reserve(arr.size());
    for (const auto& x : arr) {
      if (!x.is_number()) throw Error(ErrorKind::parse, where + "non-numeric component");
      double d = x.get<double>();
      if (!std::isfinite(d)) throw Error(ErrorKind::parse, where + "non-finite component");
      v.push_back(d);
    }
    t.terms.push_back(std::move(term));
    t.vectors.push_back(std::move(v));
  }
  if (!header) throw Error(ErrorKind::parse, "embedding file has no header line");
  return t;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) { return parse_embeddings(read_file(path)); }

std::string serialize_embeddings(const EmbeddingTable& t) {
  std::string out = json{{"dimension", t.dimension}, {"model_tag", t.model_tag}}.dump() + "\n";
  for (std::size_t i = 0; i < t.terms.size(); ++i) {
    out += json{{"term", t.terms[i]}, {"vector", t.vectors[i]}}.dump() + "\n";
  }
  return out;
}

std::vector<std::string> missing_terms(const EmbeddingTable& t, const std::vector<std::string>& forms) {
  std::set<std::string> have(t.terms.begin(), t.terms.end());
  std::vector<std::string> out;
  for (const auto& f : forms) {
    if (!have.count(f)) out.push_back(f);
  }
  return out;
}

void DistanceMatrix::validate() const {
  if (d_.size() != n_ * n_) throw Error(ErrorKind::invalid_argument, "distance matrix is not square");
  for (std::size_t i = 0; i < n_; ++i) {
    if (at(i, i) != 0) throw Error(ErrorKind::invalid_argument, "distance matrix diagonal must be zero");
    for (std::size_t j = i + 1; j < n_; ++j) {
      double v = at(i, j);
      if (!std::isfinite(v) || v < 0) throw Error(ErrorKind::invalid_argument, "distances must be finite and >= 0");
      if (v != at(j, i)) throw Error(ErrorKind::invalid_argument, "distance matrix is not symmetric");
    }
  }
}

DistanceMatrix cosine_distance_matrix(const EmbeddingTable& t, unsigned threads) {
  const std::size_t n = t.terms.size();
  if (n < 2) throw Error(ErrorKind::precondition, "cosine distances need at least 2 terms");
  std::vector<double> norm(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (double x : t.vectors[i]) s += x * x;
    norm[i] = std::sqrt(s);
    if (norm[i] == 0) throw Error(ErrorKind::invalid_argument, "zero vector for '" + t.terms[i] + "'");
  }
  DistanceMatrix d(n);
  parallel_chunks(
      n, 16,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            double dot = 0;
            const auto& a = t.vectors[i];
            const auto& b = t.vectors[j];
            for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
            double v = 1.0 - dot / (norm[i] * norm[j]);
            d.set(i, j, std::clamp(v, 0.0, 2.0));
          }
        }
      },
      threads);
  return d;
}

DistanceMatrix lexical_fallback_similarity(const std::vector<std::string>& forms, std::string_view anchor) {
  const std::size_t n = forms.size();
  std::vector<std::set<std::string>> toks(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& t : tokenize_text(forms[i])) {
      if (t != anchor) toks[i].insert(std::move(t));
    }
  }
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t inter = 0;
      for (const auto& t : toks[i]) inter += toks[j].count(t);
      std::size_t uni = toks[i].size() + toks[j].size() - inter;
      d.set(i, j, uni == 0 ? 0.0 : 1.0 - static_cast<double>(inter) / static_cast<double>(uni));
    }
  }
  return d;
}

json Dendrogram::to_json() const {
  json m = json::array();
  for (const auto& x : merges) m.push_back({x.a, x.b, x.distance, x.id, x.size});
  return {{"leaves", leaves}, {"merges", m}};
}

Dendrogram Dendrogram::from_json(const json& j) {
  try {
    Dendrogram dg;
    dg.leaves = j.at("leaves").get<std::size_t>();
    for (const auto& m : j.at("merges")) {
      dg.merges.push_back({m.at(0).get<int>(), m.at(1).get<int>(), m.at(2).get<double>(), m.at(3).get<int>(),
                           m.at(4).get<std::size_t>()});
    }
    return dg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("dendrogram JSON: ") + e.what());
  }
}

Dendrogram agglomerative_complete(const DistanceMatrix& d) {
  d.validate();
  const std::size_t n = d.size();
  Dendrogram dg;
  dg.leaves = n;
  if (n == 0) return dg;
  // Slot-indexed working copy; slot s holds cluster id ids[s] while active.
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i * n + j] = d.at(i, j);
  }
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<std::size_t> sizes(n, 1);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);
  int next_id = static_cast<int>(n);
  double last = -1;
  while (active.size() > 1) {
    std::size_t bi = 0, bj = 0;
    double bd = 0;
    int ba = -1, bb = -1;
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const std::size_t si = active[x], sj = active[y];
        const double v = w[si * n + sj];
        int a = std::min(ids[si], ids[sj]), b = std::max(ids[si], ids[sj]);
        if (ba < 0 || v < bd || (v == bd && std::tie(a, b) < std::tie(ba, bb))) {
          bd = v;
          ba = a;
          bb = b;
          bi = si;
          bj = sj;
        }
      }
    }
    if (bd < last) {
      throw Error(ErrorKind::precondition, "complete-linkage merge distances decreased");
    }
    last = bd;
    dg.merges.push_back({ba, bb, bd, next_id, sizes[bi] + sizes[bj]});
    // The merged cluster takes slot bi.
    for (std::size_t s : active) {
      if (s == bi || s == bj) continue;
      double v = std::max(w[bi * n + s], w[bj * n + s]);
      w[bi * n + s] = v;
      w[s * n + bi] = v;
    }
    ids[bi] = next_id++;
    sizes[bi] += sizes[bj];
    active.erase(std::find(active.begin(), active.end(), bj));
  }
  return dg;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<int> cut_dendrogram(const Dendrogram& dg, const CutCriterion& c) {
  const std::size_t n = dg.leaves;
  if (c.n_clusters.has_value() == c.distance.has_value()) {
    throw Error(ErrorKind::invalid_argument, "cut needs exactly one of n_clusters or distance");
  }
  if (dg.merges.size() + 1 != n && n > 0) {
    throw Error(ErrorKind::invalid_argument, "dendrogram is incomplete");
  }
  std::size_t apply = 0;
  if (c.n_clusters) {
    if (*c.n_clusters < 1 || *c.n_clusters > n) {
      throw Error(ErrorKind::invalid_argument, "n_clusters " + std::to_string(*c.n_clusters) + " outside [1, " +
                                                   std::to_string(n) + "]");
    }
    apply = n - *c.n_clusters;
  } else {
    while (apply < dg.merges.size() && dg.merges[apply].distance <= *c.distance) ++apply;
  }
  // Representative leaf per cluster id.
  UnionFind uf(n);
  std::vector<int> rep(n + dg.merges.size());
  for (std::size_t i = 0; i < n; ++i) rep[i] = static_cast<int>(i);
  for (std::size_t m = 0; m < apply; ++m) {
    const auto& mg = dg.merges[m];
    uf.unite(rep.at(mg.a), rep.at(mg.b));
    rep.at(mg.id) = rep.at(mg.a);
  }
  std::vector<int> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = uf.find(static_cast<int>(i));
  return relabel_communities(roots);
}

void TypeLabeling::validate() const {
  for (const auto& [term, ls] : labels) {
    if (ls.empty() || ls.size() > kMaxLabels) {
      throw Error(ErrorKind::invalid_argument, "form '" + term + "' has " + std::to_string(ls.size()) +
                                                   " labels; allowed 1.." + std::to_string(kMaxLabels));
    }
    for (const auto& l : ls) {
      if (!universe.count(l)) throw Error(ErrorKind::not_found, "unknown type '" + l + "' on form '" + term + "'");
    }
  }
}

json TypeLabeling::to_json() const {
  json forms = json::array();
  for (const auto& [term, ls] : labels) {
    json f = {{"term", term}, {"labels", ls}};
    if (auto it = default_labels.find(term); it != default_labels.end()) f["default_labels"] = it->second;
    forms.push_back(std::move(f));
  }
  return {{"types", universe}, {"forms", forms}, {"max_labels", kMaxLabels}};
}

TypeLabeling TypeLabeling::from_json(const json& j) {
  try {
    TypeLabeling t;
    t.universe = j.at("types").get<std::set<std::string>>();
    for (const auto& f : j.at("forms")) {
      std::string term = f.at("term").get<std::string>();
      t.labels[term] = f.at("labels").get<std::set<std::string>>();
      if (f.contains("default_labels")) t.default_labels[term] = f["default_labels"].get<std::set<std::string>>();
    }
    t.validate();
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("labeling JSON: ") + e.what());
  }
}

std::map<int, std::string> parse_cluster_labels(std::string_view csv) {
  auto table = read_delimited(csv, detect_delimiter(csv));
  if (table.header.size() < 2) throw Error(ErrorKind::parse, "cluster label CSV needs columns cluster,label");
  std::map<int, std::string> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "cluster label CSV line " + std::to_string(table.line_numbers[r]) + ": ";
    if (row.size() < 2) throw Error(ErrorKind::parse, where + "expected cluster,label");
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(row[0], &used);
      if (used != trim(row[0]).size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, where + "cluster id '" + row[0] + "' is not an integer");
    }
    std::string label(trim(row[1]));
    if (label.empty()) continue;
    if (!out.emplace(id, label).second) throw Error(ErrorKind::parse, where + "duplicate cluster id");
  }
  return out;
}

std::map<std::string, std::vector<std::string>> parse_label_overrides(std::string_view csv) {
  auto table = read_delimited(csv, detect_delimiter(csv));
  if (table.header.empty()) throw Error(ErrorKind::parse, "label override CSV is empty");
  if (table.header.size() > 1 + kMaxLabels) {
    throw Error(ErrorKind::parse, "label override CSV has more than " + std::to_string(kMaxLabels) + " label columns");
  }
  std::map<std::string, std::vector<std::string>> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "label override CSV line " + std::to_string(table.line_numbers[r]) + ": ";
    if (row.size() > 1 + kMaxLabels) throw Error(ErrorKind::parse, where + "more than 8 labels");
    std::string form(trim(row.at(0)));
    if (form.empty()) throw Error(ErrorKind::parse, where + "empty form");
    std::vector<std::string> ls;
    for (std::size_t i = 1; i < row.size(); ++i) {
      std::string l(trim(row[i]));
      if (!l.empty()) ls.push_back(std::move(l));
    }
    if (!out.emplace(form, std::move(ls)).second) throw Error(ErrorKind::parse, where + "duplicate form '" + form + "'");
  }
  return out;
}

std::set<std::string> parse_type_universe(std::string_view text) {
  std::set<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::string t(trim(line));
    if (!t.empty()) out.insert(t);
  }
  return out;
}

TypeLabeling apply_labeling(const std::vector<std::string>& terms, const std::vector<int>& clusters,
                            const std::map<int, std::string>& cluster_labels,
                            const std::map<std::string, std::vector<std::string>>& overrides,
                            const std::optional<std::set<std::string>>& universe) {
  if (terms.size() != clusters.size()) throw Error(ErrorKind::invalid_argument, "terms and clusters differ in length");
  std::set<std::string> known(terms.begin(), terms.end());
  for (const auto& [form, ls] : overrides) {
    if (!known.count(form)) throw Error(ErrorKind::not_found, "override for unknown form '" + form + "'");
  }
  TypeLabeling t;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::set<std::string> defaults;
    if (auto it = cluster_labels.find(clusters[i]); it != cluster_labels.end()) defaults.insert(it->second);
    std::set<std::string> ls = defaults;
    if (auto it = overrides.find(terms[i]); it != overrides.end() && !it->second.empty()) {
      if (it->second.size() > kMaxLabels) {
        throw Error(ErrorKind::invalid_argument, "form '" + terms[i] + "' has more than 8 labels");
      }
      ls = std::set<std::string>(it->second.begin(), it->second.end());
    }
    if (!defaults.empty()) t.default_labels[terms[i]] = defaults;
    t.labels[terms[i]] = std::move(ls);
  }
  if (universe) {
    t.universe = *universe;
  } else {
    for (const auto& [term, ls] : t.labels) t.universe.insert(ls.begin(), ls.end());
  }
  t.validate();
  return t;
}

json OntologyGraph::to_json() const {
  json types = json::array();
  for (const auto& [label, freq] : type_freq) types.push_back({{"id", label}, {"label", label}, {"freq", freq}});
  json forms = json::array();
  for (const auto& [term, ls] : form_labels) forms.push_back({{"term", term}, {"labels", ls}});
  json edges = json::array();
  for (const auto& [ab, w] : type_edges) edges.push_back({{"a", ab.first}, {"b", ab.second}, {"weight", w}});
  return {{"types", types}, {"forms", forms}, {"type_edges", edges}};
}

WeightedGraph OntologyGraph::to_graph() const {
  WeightedGraph g;
  for (const auto& [label, freq] : type_freq) {
    GraphNode n;
    n.id = "type:" + label;
    n.label = label;
    n.attrs = {{"kind", "type"}, {"freq", std::to_string(freq)}};
    g.add_node(std::move(n));
  }
  for (const auto& [term, ls] : form_labels) {
    GraphNode n;
    n.id = "form:" + term;
    n.label = term;
    n.attrs = {{"kind", "form"}};
    std::size_t f = g.add_node(std::move(n));
    for (const auto& l : ls) g.add_to_edge(f, *g.find("type:" + l), 1.0);
  }
  for (const auto& [ab, w] : type_edges) {
    g.add_to_edge(*g.find("type:" + ab.first), *g.find("type:" + ab.second), static_cast<double>(w));
  }
  g.normalize();
  return g;
}

OntologyGraph type_network(const TypeLabeling& labeling) {
  OntologyGraph og;
  for (const auto& t : labeling.universe) og.type_freq[t] = 0;
  for (const auto& [term, ls] : labeling.labels) {
    og.form_labels[term] = ls;
    for (const auto& l : ls) ++og.type_freq[l];
    for (auto a = ls.begin(); a != ls.end(); ++a) {
      for (auto b = std::next(a); b != ls.end(); ++b) ++og.type_edges[{*a, *b}];
    }
  }
  return og;
}

LabelingStore::LabelingStore(std::filesystem::path file, TypeLabeling initial)
    : file_(std::move(file)), state_(std::move(initial)) {
  state_.validate();
}

std::unique_ptr<LabelingStore> LabelingStore::open(const std::filesystem::path& file) {
  json j;
  try {
    j = json::parse(read_file(file));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, file.string() + ": " + e.what());
  }
  return std::make_unique<LabelingStore>(file, TypeLabeling::from_json(j));
}

TypeLabeling LabelingStore::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

void LabelingStore::set_labels(const std::string& term, const std::vector<std::string>& labels) {
  std::lock_guard lock(mu_);
  if (!state_.labels.count(term)) throw Error(ErrorKind::not_found, "unknown form '" + term + "'");
  std::set<std::string> ls(labels.begin(), labels.end());
  if (ls.size() != labels.size()) throw Error(ErrorKind::invalid_argument, "duplicate labels");
  TypeLabeling next = state_;
  next.labels[term] = std::move(ls);
  next.validate();
  write_file_atomic(file_, next.to_json().dump(2) + "\n");
  state_ = std::move(next);
}

}  // namespace segmap
