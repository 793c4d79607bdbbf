// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/scholnet.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "segmap/csv.hpp"
#include "segmap/text.hpp"

namespace segmap {

namespace {

constexpr std::size_t kTitleTokens = 5;

bool is_key_part(std::string_view p) {
  if (p.empty()) return false;
  return std::all_of(p.begin(), p.end(), [](unsigned char c) { return std::islower(c) || std::isdigit(c); });
}

std::optional<ReferenceKey> parse_existing_key(std::string_view s) {
  if (s.find('|') == std::string_view::npos) return std::nullopt;
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    auto bar = s.find('|', start);
    parts.emplace_back(s.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (parts.size() < 3 || parts.size() > 2 + kTitleTokens) return std::nullopt;
  if (!std::all_of(parts.begin(), parts.end(), [](const std::string& p) { return is_key_part(p); })) {
    return std::nullopt;
  }
  if (parts[1].size() != 4 || !std::all_of(parts[1].begin(), parts[1].end(), ::isdigit)) return std::nullopt;
  ReferenceKey k;
  k.key = std::string(s);
  k.parsed = true;
  k.surname = parts[0];
  k.year = std::stoi(parts[1]);
  k.title_tokens.assign(parts.begin() + 2, parts.end());
  return k;
}

struct YearParen {
  std::size_t begin = 0;  // '('
  std::size_t end = 0;    // one past ')'
  int year = 0;
};

// First "(dddd)" or "(dddda)" with a plausible year.
std::optional<YearParen> find_year_paren(std::string_view s) {
  for (std::size_t i = 0; i + 5 < s.size(); ++i) {
    if (s[i] != '(') continue;
    std::size_t j = i + 1;
    if (j + 4 > s.size()) break;
    if (!std::all_of(s.begin() + j, s.begin() + j + 4, [](unsigned char c) { return std::isdigit(c); })) continue;
    std::size_t k = j + 4;
    if (k < s.size() && std::islower(static_cast<unsigned char>(s[k]))) ++k;
    if (k >= s.size() || s[k] != ')') continue;
    int y = 0;
    std::from_chars(s.data() + j, s.data() + j + 4, y);
    if (y < kMinYear || y > kMaxYear) continue;
    return YearParen{i, k + 1, y};
  }
  return std::nullopt;
}

// "Massey D.S." or "Van der Berg J.-P." or "et al."
bool author_like(std::string_view seg) {
  seg = trim(seg);
  if (seg.empty()) return false;
  if (to_lower_ascii(seg) == "et al." || to_lower_ascii(seg) == "et al") return true;
  auto sp = seg.rfind(' ');
  if (sp == std::string_view::npos) return false;
  std::string_view last = seg.substr(sp + 1);
  if (last.find('.') == std::string_view::npos) return false;
  return std::all_of(last.begin(), last.end(),
                     [](unsigned char c) { return std::isupper(c) || c == '.' || c == '-'; });
}

std::vector<std::string> first_tokens(std::string_view text, std::size_t n) {
  auto toks = tokenize_text(text);
  if (toks.size() > n) toks.resize(n);
  return toks;
}

}  // namespace

ReferenceKey normalize_reference(std::string_view raw) {
  std::string_view s = trim(raw);
  if (s.empty()) return {};
  if (auto k = parse_existing_key(s)) return *k;

  if (auto yp = find_year_paren(s)) {
    std::string_view before = s.substr(0, yp->begin);
    std::string_view after = trim(s.substr(yp->end));
    std::string_view first_author = before.substr(0, before.find(','));
    auto surname_toks = tokenize_text(first_author);
    std::vector<std::string> title;
    if (!after.empty() && after.front() == '.') {
      title = first_tokens(after.substr(1), kTitleTokens);
    } else {
      auto segs = split_trimmed(before, ',');
      std::size_t i = 0;
      while (i < segs.size() && author_like(segs[i])) ++i;
      if (i > 0 && i < segs.size()) {
        std::vector<std::string> rest(segs.begin() + static_cast<std::ptrdiff_t>(i), segs.end());
        title = first_tokens(join(rest, ", "), kTitleTokens);
      }
    }
    if (!surname_toks.empty() && !title.empty()) {
      ReferenceKey k;
      k.parsed = true;
      k.surname = surname_toks.front();
      k.year = yp->year;
      k.title_tokens = std::move(title);
      k.key = k.surname + "|" + std::to_string(yp->year);
      for (const auto& t : k.title_tokens) k.key += "|" + t;
      return k;
    }
  }
  ReferenceKey k;
  k.key = normalize_label(s);
  return k;
}

std::vector<double> link_strengths(const WeightedGraph& g) { return g.strengths(); }

std::vector<std::size_t> top_by_link_strength(const WeightedGraph& g, std::size_t k) {
  auto s = g.strengths();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] > 0) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) {
    if (s[a] != s[b]) return s[a] > s[b];
    return g.nodes()[a].id < g.nodes()[b].id;
  });
  if (idx.size() > k) idx.resize(k);
  return idx;
}

namespace {

struct PairCount {
  int weight = 0;
  int first_year = 0;
};

std::uint64_t pair_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Builds the graph over `ids` (sorted node ids) from pair counts, keeping
// edges with weight >= min_weight, then truncating to top_k.
WeightedGraph assemble(const std::vector<GraphNode>& nodes, const std::unordered_map<std::uint64_t, PairCount>& pairs,
                       int min_weight, std::size_t top_k) {
  // Node order: ascending id, so output does not depend on hash order.
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nodes[a].id < nodes[b].id; });
  std::vector<bool> has_edge(nodes.size(), false);
  std::vector<std::pair<std::uint64_t, PairCount>> kept;
  for (const auto& [k, pc] : pairs) {
    if (pc.weight < min_weight) continue;
    kept.emplace_back(k, pc);
    has_edge[k >> 32] = true;
    has_edge[k & 0xffffffffu] = true;
  }
  WeightedGraph full;
  std::vector<std::size_t> remap(nodes.size(), SIZE_MAX);
  for (auto i : order) {
    if (has_edge[i]) remap[i] = full.add_node(nodes[i]);
  }
  for (const auto& [k, pc] : kept) {
    GraphEdge& e = full.add_to_edge(remap[k >> 32], remap[k & 0xffffffffu], pc.weight);
    e.first_co_year = pc.first_year;
  }
  full.normalize();
  return full.induced(top_by_link_strength(full, top_k));
}

void count_pairs(const std::vector<std::size_t>& items, int year, std::unordered_map<std::uint64_t, PairCount>& pairs) {
  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = a + 1; b < items.size(); ++b) {
      auto [it, inserted] = pairs.try_emplace(pair_key(items[a], items[b]), PairCount{0, year});
      ++it->second.weight;
      it->second.first_year = std::min(it->second.first_year, year);
    }
  }
}

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

WeightedGraph build_cocitation(const CorpusStore& store, const CocitationOptions& opt) {
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<GraphNode> nodes;
  std::vector<int> cited;
  std::unordered_map<std::uint64_t, PairCount> pairs;
  for (const auto& r : store.records()) {
    std::vector<std::size_t> keys;
    for (const auto& ref : r.references) {
      ReferenceKey k = normalize_reference(ref);
      if (k.key.empty() || opt.excluded_keys.count(k.key)) continue;
      auto [it, inserted] = ids.emplace(k.key, nodes.size());
      if (inserted) {
        GraphNode n;
        n.id = k.key;
        n.label = std::string(trim(ref));
        n.first_year = k.year.value_or(0);
        nodes.push_back(std::move(n));
        cited.push_back(0);
      }
      keys.push_back(it->second);
    }
    sort_unique(keys);
    for (auto k : keys) ++cited[k];
    count_pairs(keys, r.year, pairs);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].attrs["citation_count"] = std::to_string(cited[i]);
  return assemble(nodes, pairs, opt.min_cocitations, opt.top_k);
}

WeightedGraph build_coupling(const CorpusStore& store, int min_citations, std::size_t top_k) {
  std::map<std::string, std::size_t> ids;
  std::vector<GraphNode> nodes;
  std::vector<long> citations, docs;
  std::vector<std::vector<std::string>> keysets;
  for (const auto& r : store.records()) {
    std::string j = normalize_label(r.source_title);
    if (j.empty()) continue;
    auto [it, inserted] = ids.emplace(j, nodes.size());
    if (inserted) {
      GraphNode n;
      n.id = j;
      n.label = r.source_title;
      n.first_year = r.year;
      nodes.push_back(std::move(n));
      citations.push_back(0);
      docs.push_back(0);
      keysets.emplace_back();
    }
    const std::size_t ji = it->second;
    nodes[ji].first_year = std::min(nodes[ji].first_year, r.year);
    citations[ji] += r.cited_by;
    ++docs[ji];
    for (const auto& ref : r.references) {
      auto k = normalize_reference(ref);
      if (!k.key.empty()) keysets[ji].push_back(k.key);
    }
  }
  std::map<std::string, std::vector<std::size_t>> citing;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    nodes[j].attrs["doc_count"] = std::to_string(docs[j]);
    nodes[j].attrs["citations"] = std::to_string(citations[j]);
    if (citations[j] < min_citations) continue;
    sort_unique(keysets[j]);
    for (const auto& k : keysets[j]) citing[k].push_back(j);
  }
  std::unordered_map<std::uint64_t, PairCount> pairs;
  for (const auto& [k, js] : citing) count_pairs(js, 0, pairs);
  return assemble(nodes, pairs, 1, top_k);
}

WeightedGraph build_coauthorship_countries(const CorpusStore& store, int min_docs) {
  std::map<std::string, long> doc_count;
  std::map<std::string, int> first_year;
  for (const auto& r : store.records()) {
    for (const auto& c : r.countries) {
      ++doc_count[c];
      auto [it, inserted] = first_year.emplace(c, r.year);
      if (!inserted) it->second = std::min(it->second, r.year);
    }
  }
  WeightedGraph g;
  for (const auto& [c, n] : doc_count) {
    if (n < min_docs) continue;
    GraphNode node;
    node.id = c;
    node.label = c;
    node.first_year = first_year[c];
    node.attrs["doc_count"] = std::to_string(n);
    g.add_node(std::move(node));
  }
  for (const auto& r : store.records()) {
    std::vector<std::size_t> present;
    for (const auto& c : r.countries) {
      if (auto i = g.find(c)) present.push_back(*i);
    }
    for (std::size_t a = 0; a < present.size(); ++a) {
      for (std::size_t b = a + 1; b < present.size(); ++b) g.add_contribution(present[a], present[b], r.year);
    }
  }
  g.normalize();
  return g;
}

std::string scholnet_node_csv(const WeightedGraph& g, const std::string& count_attr,
                              const CommunityPartition* partition) {
  auto s = g.strengths();
  std::vector<std::size_t> order(g.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (s[a] != s[b]) return s[a] > s[b];
    return g.nodes()[a].id < g.nodes()[b].id;
  });
  std::ostringstream os;
  std::vector<std::string> header = {"node", "label", count_attr, "total_link_strength"};
  if (partition) header.push_back("community");
  write_csv_row(os, header);
  for (auto i : order) {
    const auto& n = g.nodes()[i];
    auto it = n.attrs.find(count_attr);
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, s[i]);
    std::vector<std::string> row = {n.id, n.label, it == n.attrs.end() ? "" : it->second, std::string(buf, r.ptr)};
    if (partition) row.push_back(std::to_string(partition->community.at(i)));
    write_csv_row(os, row);
  }
  return os.str();
}

}  // namespace segmap
