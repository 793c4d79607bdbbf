// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "segmap/corpus.hpp"

namespace segmap {

enum class FieldKind { title, abstract_text, keyword };

/// Which stream of a record a token came from. Each keyword entry is its own
/// stream so n-grams never join two keywords.
struct FieldTag {
  FieldKind kind = FieldKind::title;
  int index = 0;  // keyword ordinal; 0 otherwise

  std::string to_string() const;
  static FieldTag parse(std::string_view s);
  auto operator<=>(const FieldTag&) const = default;
};

struct TokenStream {
  std::vector<std::vector<std::string>> tokens;
  std::vector<FieldTag> field_tags;  // parallel to tokens
};

TokenStream tokenize(const DocumentRecord& record);

/// Named sets of tokens that disqualify an n-gram qualifier.
class StopLexicon {
 public:
  static const std::vector<std::string>& category_names();

  /// Reads <category>.txt for every category name; '#' starts a comment.
  /// Missing files leave the category empty.
  static StopLexicon load_dir(const std::filesystem::path& dir);

  void add(const std::string& category, std::string_view token);
  bool blocks(std::string_view token) const;
  bool contains(const std::string& category, std::string_view token) const;
  const std::map<std::string, std::set<std::string>>& categories() const { return categories_; }
  std::size_t size() const { return all_.size(); }

 private:
  std::map<std::string, std::set<std::string>> categories_;
  std::set<std::string, std::less<>> all_;
};

struct Occurrence {
  std::string doc_id;
  FieldTag field;
  int position = 0;  // token index of the anchor within its stream

  auto operator<=>(const Occurrence&) const = default;
};

struct NGramCandidate {
  std::vector<std::string> terms;  // 2 or 3 tokens, last is the anchor
  std::vector<Occurrence> occurrences;
  std::set<std::string> doc_set;
  std::map<int, int> per_year_counts;  // year -> distinct documents
  int first_year = 0;
  std::set<std::string> first_countries;
  std::optional<std::string> origin_discipline;

  int arity() const { return static_cast<int>(terms.size()); }
  std::string term() const;
};

/// Candidates ordered by term().
using CandidateSet = std::vector<NGramCandidate>;

/// Bigram/trigram capture with trigram-over-bigram subsumption. Fills
/// occurrences, doc_set and per_year_counts; firsts are left to
/// aggregate_firsts. `threads` = 0 picks the hardware concurrency.
CandidateSet extract_candidates(const CorpusStore& store, std::string_view anchor, const StopLexicon& lexicon,
                                unsigned threads = 0);

void aggregate_firsts(CandidateSet& candidates, const CorpusStore& store);

/// Merges trigram twins whose qualifiers are swapped ("vertical residential"
/// vs "residential vertical") under one canonical order.
CandidateSet canonicalize_reversed(CandidateSet candidates, const CorpusStore& store);

/// extract_candidates -> aggregate_firsts -> canonicalize_reversed.
CandidateSet run_extraction(const CorpusStore& store, std::string_view anchor, const StopLexicon& lexicon,
                            unsigned threads = 0);

/// Occurrence totals per document, independent of candidate aggregation.
std::size_t total_occurrences(const CandidateSet& candidates);

void write_candidate_csv(std::ostream& os, const CandidateSet& candidates);
std::string candidate_csv(const CandidateSet& candidates);

nlohmann::json candidate_to_json(const NGramCandidate& c);
NGramCandidate candidate_from_json(const nlohmann::json& j);
std::string serialize_candidates(const CandidateSet& candidates);
CandidateSet parse_candidates(std::string_view jsonl);
void save_candidates(const CandidateSet& candidates, const std::filesystem::path& path);
CandidateSet load_candidates(const std::filesystem::path& path);

/// doc_id -> indices into the candidate set, ascending.
std::map<std::string, std::vector<std::size_t>> doc_form_index(const CandidateSet& forms);

}  // namespace segmap
