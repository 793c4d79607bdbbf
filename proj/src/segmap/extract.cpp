// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/extract.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "segmap/csv.hpp"
#include "segmap/error.hpp"
#include "segmap/hashing.hpp"
#include "segmap/parallel.hpp"
#include "segmap/text.hpp"

namespace segmap {

using nlohmann::json;

std::string FieldTag::to_string() const {
  switch (kind) {
    case FieldKind::title: return "title";
    case FieldKind::abstract_text: return "abstract";
    case FieldKind::keyword: return "keyword:" + std::to_string(index);
  }
  return "title";
}

FieldTag FieldTag::parse(std::string_view s) {
  if (s == "title") return {FieldKind::title, 0};
  if (s == "abstract") return {FieldKind::abstract_text, 0};
  if (s.starts_with("keyword:")) return {FieldKind::keyword, std::stoi(std::string(s.substr(8)))};
  throw Error(ErrorKind::parse, "unknown field tag: " + std::string(s));
}

TokenStream tokenize(const DocumentRecord& record) {
  TokenStream ts;
  auto push = [&](std::string_view text, FieldTag tag) {
    ts.tokens.push_back(tokenize_text(text));
    ts.field_tags.push_back(tag);
  };
  push(record.title, {FieldKind::title, 0});
  push(record.abstract_text, {FieldKind::abstract_text, 0});
  for (std::size_t k = 0; k < record.keywords.size(); ++k)
    push(record.keywords[k], {FieldKind::keyword, static_cast<int>(k)});
  return ts;
}

// ---------------------------------------------------------------------------
// Lexicon

const std::vector<std::string>& StopLexicon::category_names() {
  static const std::vector<std::string> names = {
      "function_words", "conjunctive_adverbs", "subordinating_conjunctions", "auxiliary_verbs",
      "common_verbs",   "common_adverbs",      "jargon"};
  return names;
}

StopLexicon StopLexicon::load_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::io, "lexicon directory not found: " + dir.string());
  StopLexicon lex;
  for (const auto& cat : category_names()) {
    lex.categories_[cat];
    auto file = dir / (cat + ".txt");
    if (!std::filesystem::exists(file)) continue;
    std::istringstream in(read_file(file));
    std::string line;
    while (std::getline(in, line)) {
      auto entry = trim(line.substr(0, line.find('#')));
      if (!entry.empty()) lex.add(cat, entry);
    }
  }
  return lex;
}

void StopLexicon::add(const std::string& category, std::string_view token) {
  auto toks = tokenize_text(token);
  if (toks.size() != 1 || toks[0] != token)
    throw Error(ErrorKind::invalid_argument,
                "lexicon entry must be a single lowercase token: '" + std::string(token) + "'");
  categories_[category].insert(toks[0]);
  all_.insert(toks[0]);
}

bool StopLexicon::blocks(std::string_view token) const { return all_.find(token) != all_.end(); }

bool StopLexicon::contains(const std::string& category, std::string_view token) const {
  auto it = categories_.find(category);
  return it != categories_.end() && it->second.count(std::string(token)) > 0;
}

// ---------------------------------------------------------------------------
// Extraction

std::string NGramCandidate::term() const { return join(terms, " "); }

namespace {

struct Hit {
  std::vector<std::string> terms;
  Occurrence where;
};

void scan_document(const DocumentRecord& r, const std::string& anchor, const StopLexicon& lex, std::vector<Hit>& out) {
  auto ts = tokenize(r);
  for (std::size_t s = 0; s < ts.tokens.size(); ++s) {
    const auto& t = ts.tokens[s];
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (t[i] != anchor) continue;
      const bool near_ok = !lex.blocks(t[i - 1]);
      if (!near_ok) continue;
      Occurrence where{r.doc_id, ts.field_tags[s], static_cast<int>(i)};
      if (i >= 2 && !lex.blocks(t[i - 2])) {
        out.push_back({{t[i - 2], t[i - 1], anchor}, std::move(where)});
      } else {
        out.push_back({{t[i - 1], anchor}, std::move(where)});
      }
    }
  }
}

void fill_year_counts(NGramCandidate& c, const CorpusStore& store) {
  c.per_year_counts.clear();
  for (const auto& id : c.doc_set) {
    const auto* r = store.find(id);
    if (!r) throw Error(ErrorKind::not_found, "candidate references unknown document: " + id);
    ++c.per_year_counts[r->year];
  }
}

void sort_by_term(CandidateSet& cs) {
  std::sort(cs.begin(), cs.end(),
            [](const NGramCandidate& a, const NGramCandidate& b) { return a.term() < b.term(); });
}

}  // namespace

CandidateSet extract_candidates(const CorpusStore& store, std::string_view anchor_in, const StopLexicon& lexicon,
                                unsigned threads) {
  auto anchor_toks = tokenize_text(anchor_in);
  if (anchor_toks.size() != 1) throw Error(ErrorKind::invalid_argument, "anchor must be a single token");
  const auto& anchor = anchor_toks[0];
  if (lexicon.blocks(anchor))
    throw Error(ErrorKind::precondition, "anchor '" + anchor + "' appears in the stop lexicon");

  constexpr std::size_t kChunk = 64;
  const auto& recs = store.records();
  std::vector<std::vector<Hit>> partial(chunk_count(recs.size(), kChunk));
  parallel_chunks(
      recs.size(), kChunk,
      [&](std::size_t c, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) scan_document(recs[i], anchor, lexicon, partial[c]);
      },
      threads);

  std::map<std::vector<std::string>, NGramCandidate> merged;
  for (auto& chunk : partial) {
    for (auto& h : chunk) {
      auto& c = merged[h.terms];
      if (c.terms.empty()) c.terms = h.terms;
      c.doc_set.insert(h.where.doc_id);
      c.occurrences.push_back(std::move(h.where));
    }
  }
  CandidateSet out;
  out.reserve(merged.size());
  for (auto& [_, c] : merged) {
    std::sort(c.occurrences.begin(), c.occurrences.end());
    fill_year_counts(c, store);
    out.push_back(std::move(c));
  }
  sort_by_term(out);
  return out;
}

void aggregate_firsts(CandidateSet& candidates, const CorpusStore& store) {
  for (auto& c : candidates) {
    c.first_countries.clear();
    c.origin_discipline.reset();
    if (c.per_year_counts.empty()) fill_year_counts(c, store);
    if (c.per_year_counts.empty()) continue;
    c.first_year = c.per_year_counts.begin()->first;
    int origin_year = 0;
    for (const auto& id : c.doc_set) {  // ascending doc_id breaks same-year ties
      const auto* r = store.find(id);
      if (r->year == c.first_year) c.first_countries.insert(r->countries.begin(), r->countries.end());
      if (!r->asjc_fields.empty() && (!c.origin_discipline || r->year < origin_year)) {
        c.origin_discipline = r->asjc_fields.front();
        origin_year = r->year;
      }
    }
  }
}

CandidateSet canonicalize_reversed(CandidateSet candidates, const CorpusStore& store) {
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> twins;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& t = candidates[i].terms;
    if (t.size() != 3 || t[0] == t[1]) continue;
    twins[std::minmax(t[0], t[1])].push_back(i);
  }

  std::vector<bool> drop(candidates.size(), false);
  for (auto& [_, idx] : twins) {
    if (idx.size() < 2) continue;
    auto& a = candidates[idx[0]];
    auto& b = candidates[idx[1]];
    bool a_wins;
    if (a.first_year != b.first_year) {
      a_wins = a.first_year < b.first_year;
    } else if (a.occurrences.size() != b.occurrences.size()) {
      a_wins = a.occurrences.size() > b.occurrences.size();
    } else {
      a_wins = a.terms < b.terms;
    }
    auto& winner = a_wins ? a : b;
    auto& loser = a_wins ? b : a;
    winner.occurrences.insert(winner.occurrences.end(), loser.occurrences.begin(), loser.occurrences.end());
    std::sort(winner.occurrences.begin(), winner.occurrences.end());
    winner.doc_set.insert(loser.doc_set.begin(), loser.doc_set.end());
    fill_year_counts(winner, store);
    CandidateSet one{winner};
    aggregate_firsts(one, store);
    winner = std::move(one.front());
    drop[a_wins ? idx[1] : idx[0]] = true;
  }

  CandidateSet out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (!drop[i]) out.push_back(std::move(candidates[i]));
  sort_by_term(out);
  return out;
}

CandidateSet run_extraction(const CorpusStore& store, std::string_view anchor, const StopLexicon& lexicon,
                            unsigned threads) {
  auto cs = extract_candidates(store, anchor, lexicon, threads);
  aggregate_firsts(cs, store);
  return canonicalize_reversed(std::move(cs), store);
}

std::size_t total_occurrences(const CandidateSet& candidates) {
  std::size_t n = 0;
  for (const auto& c : candidates) n += c.occurrences.size();
  return n;
}

// ---------------------------------------------------------------------------
// Export

void write_candidate_csv(std::ostream& os, const CandidateSet& candidates) {
  const std::vector<std::string> header = {"term",       "arity",           "n_docs",           "n_occurrences",
                                           "first_year", "first_countries", "origin_discipline"};
  write_csv_row(os, header);
  for (const auto& c : candidates) {
    std::vector<std::string> countries(c.first_countries.begin(), c.first_countries.end());
    std::vector<std::string> row = {c.term(),
                                    std::to_string(c.arity()),
                                    std::to_string(c.doc_set.size()),
                                    std::to_string(c.occurrences.size()),
                                    std::to_string(c.first_year),
                                    join(countries, ";"),
                                    c.origin_discipline.value_or("")};
    write_csv_row(os, row);
  }
}

std::string candidate_csv(const CandidateSet& candidates) {
  std::ostringstream os;
  write_candidate_csv(os, candidates);
  return os.str();
}

json candidate_to_json(const NGramCandidate& c) {
  json occ = json::array();
  for (const auto& o : c.occurrences) occ.push_back({o.doc_id, o.field.to_string(), o.position});
  json years = json::object();
  for (auto [y, n] : c.per_year_counts) years[std::to_string(y)] = n;
  json j = {{"terms", c.terms},
            {"occurrences", occ},
            {"doc_set", c.doc_set},
            {"per_year_counts", years},
            {"first_year", c.first_year},
            {"first_countries", c.first_countries}};
  j["origin_discipline"] = c.origin_discipline ? json(*c.origin_discipline) : json(nullptr);
  return j;
}

NGramCandidate candidate_from_json(const json& j) {
  NGramCandidate c;
  c.terms = j.at("terms").get<std::vector<std::string>>();
  if (c.terms.size() < 2 || c.terms.size() > 3)
    throw Error(ErrorKind::parse, "candidate must have 2 or 3 terms");
  for (const auto& o : j.at("occurrences"))
    c.occurrences.push_back({o.at(0).get<std::string>(), FieldTag::parse(o.at(1).get<std::string>()), o.at(2).get<int>()});
  c.doc_set = j.at("doc_set").get<std::set<std::string>>();
  for (auto& [y, n] : j.at("per_year_counts").items()) c.per_year_counts[std::stoi(y)] = n.get<int>();
  c.first_year = j.value("first_year", 0);
  c.first_countries = j.value("first_countries", std::set<std::string>{});
  if (j.contains("origin_discipline") && !j.at("origin_discipline").is_null())
    c.origin_discipline = j.at("origin_discipline").get<std::string>();
  return c;
}

std::string serialize_candidates(const CandidateSet& candidates) {
  std::string out;
  for (const auto& c : candidates) {
    out += candidate_to_json(c).dump();
    out += '\n';
  }
  return out;
}

CandidateSet parse_candidates(std::string_view jsonl) {
  CandidateSet out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(candidate_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse, "candidates line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void save_candidates(const CandidateSet& candidates, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_candidates(candidates));
}

CandidateSet load_candidates(const std::filesystem::path& path) { return parse_candidates(read_file(path)); }

std::map<std::string, std::vector<std::size_t>> doc_form_index(const CandidateSet& forms) {
  std::map<std::string, std::vector<std::size_t>> idx;
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (const auto& d : forms[i].doc_set) idx[d].push_back(i);
  return idx;
}

}  // namespace segmap
