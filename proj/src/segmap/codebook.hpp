// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "segmap/extract.hpp"

namespace segmap {

enum class Verdict { valid, invalid, discuss };
enum class Consensus { valid, invalid, unresolved };

std::string_view to_string(Verdict v);
std::string_view to_string(Consensus c);
Verdict parse_verdict(std::string_view s);

struct CodingDecision {
  std::string term;
  std::string coder_id;
  int round = 1;
  Verdict verdict = Verdict::valid;
  std::string comment;
  std::string timestamp;  // ISO-8601 UTC; stamped on record when empty

  bool operator==(const CodingDecision&) const = default;
};

/// A team decision that settles a candidate regardless of coder verdicts.
struct Override {
  std::string term;
  int round = 1;
  Verdict verdict = Verdict::valid;  // valid or invalid
  std::string note;

  bool operator==(const Override&) const = default;
};

struct Deferral {
  std::string term;
  int round = 1;
  std::string note;

  bool operator==(const Deferral&) const = default;
};

struct RoundClosed {
  int round = 1;
  int version = 1;  // codebook version after the close
  std::string changelog;

  bool operator==(const RoundClosed&) const = default;
};

using JournalEntry = std::variant<CodingDecision, Override, Deferral, RoundClosed>;

nlohmann::json entry_to_json(const JournalEntry& e);
JournalEntry entry_from_json(const nlohmann::json& j);

struct ConsensusPolicy {
  /// Minimum number of coders whose latest verdicts must exist.
  std::size_t min_coders = 1;
  /// When set, every coder who has ever decided anything must have decided
  /// this candidate before it can reach consensus.
  bool require_all_registered = false;

  nlohmann::json to_json() const;
  static ConsensusPolicy from_json(const nlohmann::json& j);
};

struct Resolution {
  std::string term;
  Verdict verdict = Verdict::valid;
  std::string note;
};

/// Pure state machine over journal entries: the same entry sequence always
/// yields the same state.
class ValidationState {
 public:
  ValidationState() = default;
  ValidationState(std::set<std::string> known_terms, ConsensusPolicy policy);

  /// Throws if `entry` would be rejected; does not mutate.
  void check(const JournalEntry& entry) const;
  void apply(const JournalEntry& entry);

  int open_round() const { return open_round_; }
  int version() const { return version_; }
  const std::set<std::string>& coders() const { return coders_; }
  bool knows(const std::string& term) const { return known_.count(term) > 0; }

  Consensus consensus(const std::string& term) const;
  /// Candidates with a "discuss" verdict or disagreeing latest verdicts and
  /// no standing override, sorted by term.
  std::vector<std::string> discrepancies() const;
  std::vector<std::string> valid_terms() const;

  /// Latest decision per coder for `term` (empty when undecided).
  std::map<std::string, CodingDecision> latest(const std::string& term) const;
  std::size_t decision_count(const std::string& term) const;
  bool has_override(const std::string& term) const;

  /// Canonical serialization; equal states produce identical text.
  nlohmann::json to_json() const;
  nlohmann::json progress() const;

 private:
  struct TermState {
    std::vector<CodingDecision> history;              // every accepted write
    std::map<std::string, CodingDecision> latest;     // coder -> latest
    std::optional<Override> override_entry;
    std::optional<Deferral> deferral;
  };

  int max_decision_round(const TermState& ts) const;
  bool override_stands(const TermState& ts) const;

  std::set<std::string> known_;
  ConsensusPolicy policy_;
  std::map<std::string, TermState> terms_;
  std::set<std::string> coders_;
  int open_round_ = 1;
  int version_ = 1;
  std::vector<RoundClosed> changelog_;
};

/// Journal-backed codebook. All mutations append to the JSON-lines journal
/// before they touch the in-memory state; instances are safe to share
/// between threads.
class Codebook {
 public:
  Codebook(std::filesystem::path journal, const CandidateSet& candidates, ConsensusPolicy policy = {});

  void record(CodingDecision decision);
  /// Closes the open round. Every current discrepancy must be resolved or
  /// deferred.
  void resolve_round(const std::vector<Resolution>& resolutions, const std::vector<std::string>& deferred,
                     const std::string& changelog = "");
  /// Marks each term valid through an "imported" override without opening
  /// a new round.
  std::size_t import_valid(const std::vector<std::string>& terms, const std::string& note);

  ValidationState snapshot() const;
  std::vector<std::string> discrepancies() const;
  nlohmann::json state_json() const;
  nlohmann::json progress() const;
  /// Candidate listing for review clients. Filters: status
  /// (valid|invalid|unresolved|undecided), arity, substring query.
  nlohmann::json list(const std::optional<std::string>& status, std::optional<int> arity,
                      const std::string& query, std::size_t page, std::size_t page_size) const;

  CandidateSet export_validated() const;
  const std::filesystem::path& journal_path() const { return journal_; }

 private:
  void append(const std::vector<JournalEntry>& entries);

  std::filesystem::path journal_;
  CandidateSet candidates_;
  mutable std::mutex mu_;
  ValidationState state_;
};

std::vector<JournalEntry> read_journal(const std::filesystem::path& path);
ValidationState replay(const std::vector<JournalEntry>& entries, std::set<std::string> known_terms,
                       ConsensusPolicy policy);

/// Candidates whose consensus is valid, in candidate order, with their
/// extraction aggregates.
CandidateSet export_validated(const ValidationState& state, const CandidateSet& candidates);

/// Columns: form, first_year, first_countries, n_publications.
std::string validated_forms_csv(const CandidateSet& forms);

std::string utc_timestamp_now();

}  // namespace segmap
