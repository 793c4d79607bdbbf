// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/codebook.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "segmap/csv.hpp"
#include "segmap/error.hpp"
#include "segmap/hashing.hpp"
#include "segmap/text.hpp"

namespace segmap {

using nlohmann::json;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::valid: return "valid";
    case Verdict::invalid: return "invalid";
    case Verdict::discuss: return "discuss";
  }
  return "discuss";
}

std::string_view to_string(Consensus c) {
  switch (c) {
    case Consensus::valid: return "valid";
    case Consensus::invalid: return "invalid";
    case Consensus::unresolved: return "unresolved";
  }
  return "unresolved";
}

Verdict parse_verdict(std::string_view s) {
  if (s == "valid") return Verdict::valid;
  if (s == "invalid") return Verdict::invalid;
  if (s == "discuss") return Verdict::discuss;
  throw Error(ErrorKind::invalid_argument, "unknown verdict: " + std::string(s));
}

std::string utc_timestamp_now() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------
// Journal entries

namespace {

json decision_json(const CodingDecision& d) {
  return {{"term", d.term},         {"coder_id", d.coder_id}, {"round", d.round},
          {"verdict", to_string(d.verdict)}, {"comment", d.comment}, {"timestamp", d.timestamp}};
}

}  // namespace

json entry_to_json(const JournalEntry& e) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CodingDecision>) {
          auto j = decision_json(v);
          j["kind"] = "decision";
          return j;
        } else if constexpr (std::is_same_v<T, Override>) {
          return {{"kind", "override"}, {"term", v.term}, {"round", v.round},
                  {"verdict", to_string(v.verdict)}, {"note", v.note}};
        } else if constexpr (std::is_same_v<T, Deferral>) {
          return {{"kind", "defer"}, {"term", v.term}, {"round", v.round}, {"note", v.note}};
        } else {
          return {{"kind", "round_closed"}, {"round", v.round}, {"version", v.version}, {"changelog", v.changelog}};
        }
      },
      e);
}

JournalEntry entry_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "decision") {
    return CodingDecision{j.at("term").get<std::string>(), j.at("coder_id").get<std::string>(),
                          j.at("round").get<int>(),        parse_verdict(j.at("verdict").get<std::string>()),
                          j.value("comment", ""),          j.value("timestamp", "")};
  }
  if (kind == "override")
    return Override{j.at("term").get<std::string>(), j.at("round").get<int>(),
                    parse_verdict(j.at("verdict").get<std::string>()), j.value("note", "")};
  if (kind == "defer") return Deferral{j.at("term").get<std::string>(), j.at("round").get<int>(), j.value("note", "")};
  if (kind == "round_closed")
    return RoundClosed{j.at("round").get<int>(), j.at("version").get<int>(), j.value("changelog", "")};
  throw Error(ErrorKind::parse, "unknown journal entry kind: " + kind);
}

json ConsensusPolicy::to_json() const {
  return {{"min_coders", min_coders}, {"require_all_registered", require_all_registered}};
}

ConsensusPolicy ConsensusPolicy::from_json(const json& j) {
  ConsensusPolicy p;
  if (j.is_null()) return p;
  p.min_coders = j.value("min_coders", std::size_t{1});
  p.require_all_registered = j.value("require_all_registered", false);
  if (p.min_coders == 0) throw Error(ErrorKind::invalid_argument, "min_coders must be positive");
  return p;
}

// ---------------------------------------------------------------------------
// ValidationState

ValidationState::ValidationState(std::set<std::string> known_terms, ConsensusPolicy policy)
    : known_(std::move(known_terms)), policy_(policy) {}

void ValidationState::check(const JournalEntry& entry) const {
  auto require_known = [&](const std::string& term) {
    if (!knows(term)) throw Error(ErrorKind::not_found, "unknown candidate: " + term);
  };
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CodingDecision>) {
          require_known(v.term);
          if (v.coder_id.empty()) throw Error(ErrorKind::invalid_argument, "coder_id must not be empty");
          if (v.round < open_round_)
            throw Error(ErrorKind::conflict, "round " + std::to_string(v.round) + " is closed; open round is " +
                                                 std::to_string(open_round_));
          if (v.round > open_round_)
            throw Error(ErrorKind::precondition, "round " + std::to_string(v.round) + " is not open yet; open round is " +
                                                     std::to_string(open_round_));
        } else if constexpr (std::is_same_v<T, Override>) {
          require_known(v.term);
          if (v.verdict == Verdict::discuss)
            throw Error(ErrorKind::invalid_argument, "a resolution must be valid or invalid: " + v.term);
          if (v.round != open_round_) throw Error(ErrorKind::conflict, "override outside the open round");
        } else if constexpr (std::is_same_v<T, Deferral>) {
          require_known(v.term);
          if (v.round != open_round_) throw Error(ErrorKind::conflict, "deferral outside the open round");
        } else {
          if (v.round != open_round_ || v.version != version_ + 1)
            throw Error(ErrorKind::conflict, "round close out of sequence");
        }
      },
      entry);
}

void ValidationState::apply(const JournalEntry& entry) {
  check(entry);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CodingDecision>) {
          auto& ts = terms_[v.term];
          std::erase_if(ts.history, [&](const CodingDecision& d) {
            return d.coder_id == v.coder_id && d.round == v.round;
          });
          ts.history.push_back(v);
          ts.latest[v.coder_id] = v;
          coders_.insert(v.coder_id);
        } else if constexpr (std::is_same_v<T, Override>) {
          terms_[v.term].override_entry = v;
        } else if constexpr (std::is_same_v<T, Deferral>) {
          terms_[v.term].deferral = v;
        } else {
          open_round_ = v.round + 1;
          version_ = v.version;
          changelog_.push_back(v);
        }
      },
      entry);
}

int ValidationState::max_decision_round(const TermState& ts) const {
  int r = 0;
  for (const auto& [_, d] : ts.latest) r = std::max(r, d.round);
  return r;
}

bool ValidationState::override_stands(const TermState& ts) const {
  return ts.override_entry && ts.override_entry->round >= max_decision_round(ts);
}

Consensus ValidationState::consensus(const std::string& term) const {
  auto it = terms_.find(term);
  if (it == terms_.end()) return Consensus::unresolved;
  const auto& ts = it->second;
  if (override_stands(ts)) return ts.override_entry->verdict == Verdict::valid ? Consensus::valid : Consensus::invalid;
  if (ts.latest.empty() || ts.latest.size() < policy_.min_coders) return Consensus::unresolved;
  if (policy_.require_all_registered) {
    for (const auto& c : coders_)
      if (!ts.latest.count(c)) return Consensus::unresolved;
  }
  bool all_valid = true;
  bool all_invalid = true;
  for (const auto& [_, d] : ts.latest) {
    all_valid = all_valid && d.verdict == Verdict::valid;
    all_invalid = all_invalid && d.verdict == Verdict::invalid;
  }
  if (all_valid) return Consensus::valid;
  if (all_invalid) return Consensus::invalid;
  return Consensus::unresolved;
}

std::vector<std::string> ValidationState::discrepancies() const {
  std::vector<std::string> out;
  for (const auto& [term, ts] : terms_) {
    if (override_stands(ts) || ts.latest.empty()) continue;
    std::set<Verdict> seen;
    for (const auto& [_, d] : ts.latest) seen.insert(d.verdict);
    if (seen.count(Verdict::discuss) || seen.size() > 1) out.push_back(term);
  }
  return out;  // std::map iteration is already sorted by term
}

std::vector<std::string> ValidationState::valid_terms() const {
  std::vector<std::string> out;
  for (const auto& t : known_)
    if (consensus(t) == Consensus::valid) out.push_back(t);
  return out;
}

std::map<std::string, CodingDecision> ValidationState::latest(const std::string& term) const {
  auto it = terms_.find(term);
  return it == terms_.end() ? std::map<std::string, CodingDecision>{} : it->second.latest;
}

std::size_t ValidationState::decision_count(const std::string& term) const {
  auto it = terms_.find(term);
  return it == terms_.end() ? 0 : it->second.latest.size();
}

bool ValidationState::has_override(const std::string& term) const {
  auto it = terms_.find(term);
  return it != terms_.end() && it->second.override_entry.has_value();
}

json ValidationState::to_json() const {
  json terms = json::object();
  for (const auto& [term, ts] : terms_) {
    json hist = json::array();
    for (const auto& d : ts.history) hist.push_back(decision_json(d));
    json latest = json::object();
    for (const auto& [c, d] : ts.latest) latest[c] = decision_json(d);
    json t = {{"history", hist}, {"latest", latest}, {"consensus", to_string(consensus(term))}};
    t["override"] = ts.override_entry ? entry_to_json(*ts.override_entry) : json(nullptr);
    t["deferral"] = ts.deferral ? entry_to_json(*ts.deferral) : json(nullptr);
    terms[term] = t;
  }
  json log = json::array();
  for (const auto& c : changelog_) log.push_back(entry_to_json(c));
  return {{"open_round", open_round_}, {"version", version_}, {"coders", coders_},
          {"changelog", log},          {"policy", policy_.to_json()}, {"terms", terms}};
}

json ValidationState::progress() const {
  std::map<std::string, std::size_t> per_coder;
  for (const auto& c : coders_) per_coder[c] = 0;
  std::map<std::string, std::size_t> by_status = {{"valid", 0}, {"invalid", 0}, {"unresolved", 0}, {"undecided", 0}};
  for (const auto& term : known_) {
    auto it = terms_.find(term);
    bool decided = it != terms_.end() && (!it->second.latest.empty() || it->second.override_entry);
    if (it != terms_.end())
      for (const auto& [c, _] : it->second.latest) ++per_coder[c];
    if (!decided) {
      ++by_status["undecided"];
    } else {
      ++by_status[std::string(to_string(consensus(term)))];
    }
  }
  return {{"open_round", open_round_},
          {"version", version_},
          {"candidates", known_.size()},
          {"per_coder", per_coder},
          {"by_status", by_status},
          {"discrepancies", discrepancies().size()}};
}

// ---------------------------------------------------------------------------
// Journal I/O

std::vector<JournalEntry> read_journal(const std::filesystem::path& path) {
  std::vector<JournalEntry> out;
  if (!std::filesystem::exists(path)) return out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(entry_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse, path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

ValidationState replay(const std::vector<JournalEntry>& entries, std::set<std::string> known_terms,
                       ConsensusPolicy policy) {
  ValidationState state(std::move(known_terms), policy);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    try {
      state.apply(entries[i]);
    } catch (const Error& e) {
      throw Error(e.kind(), "journal entry " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return state;
}

CandidateSet export_validated(const ValidationState& state, const CandidateSet& candidates) {
  CandidateSet out;
  for (const auto& c : candidates)
    if (state.consensus(c.term()) == Consensus::valid) out.push_back(c);
  return out;
}

std::string validated_forms_csv(const CandidateSet& forms) {
  std::vector<const NGramCandidate*> order;
  for (const auto& f : forms) order.push_back(&f);
  std::sort(order.begin(), order.end(), [](const NGramCandidate* a, const NGramCandidate* b) {
    return std::pair(a->first_year, a->term()) < std::pair(b->first_year, b->term());
  });
  std::ostringstream os;
  write_csv_row(os, std::vector<std::string>{"form", "first_year", "first_countries", "n_publications"});
  for (const auto* f : order) {
    std::vector<std::string> countries(f->first_countries.begin(), f->first_countries.end());
    write_csv_row(os, std::vector<std::string>{f->term(), std::to_string(f->first_year), join(countries, ";"),
                                               std::to_string(f->doc_set.size())});
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Codebook

namespace {

std::set<std::string> terms_of(const CandidateSet& cs) {
  std::set<std::string> out;
  for (const auto& c : cs) out.insert(c.term());
  return out;
}

}  // namespace

Codebook::Codebook(std::filesystem::path journal, const CandidateSet& candidates, ConsensusPolicy policy)
    : journal_(std::move(journal)),
      candidates_(candidates),
      state_(replay(read_journal(journal_), terms_of(candidates), policy)) {}

void Codebook::append(const std::vector<JournalEntry>& entries) {
  std::string text;
  for (const auto& e : entries) {
    text += entry_to_json(e).dump();
    text += '\n';
  }
  if (journal_.has_parent_path()) std::filesystem::create_directories(journal_.parent_path());
  std::FILE* f = std::fopen(journal_.c_str(), "ab");
  if (!f) throw Error(ErrorKind::io, "cannot open journal: " + journal_.string());
  bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size() && std::fflush(f) == 0 &&
            ::fsync(::fileno(f)) == 0;
  std::fclose(f);
  if (!ok) throw Error(ErrorKind::io, "journal write failed: " + journal_.string());
}

void Codebook::record(CodingDecision decision) {
  std::lock_guard lock(mu_);
  if (decision.timestamp.empty()) decision.timestamp = utc_timestamp_now();
  JournalEntry e = decision;
  state_.check(e);
  append({e});
  state_.apply(e);
}

void Codebook::resolve_round(const std::vector<Resolution>& resolutions, const std::vector<std::string>& deferred,
                             const std::string& changelog) {
  std::lock_guard lock(mu_);
  const int round = state_.open_round();
  std::set<std::string> covered;
  std::vector<JournalEntry> entries;
  for (const auto& r : resolutions) {
    entries.push_back(Override{r.term, round, r.verdict, r.note});
    covered.insert(r.term);
  }
  for (const auto& t : deferred) {
    entries.push_back(Deferral{t, round, "deferred"});
    covered.insert(t);
  }
  std::vector<std::string> missing;
  for (const auto& t : state_.discrepancies())
    if (!covered.count(t)) missing.push_back(t);
  if (!missing.empty())
    throw Error(ErrorKind::precondition, "unresolved discrepancies must be resolved or deferred: " + join(missing, ", "));
  entries.push_back(RoundClosed{round, state_.version() + 1, changelog});

  auto trial = state_;
  for (const auto& e : entries) trial.apply(e);
  append(entries);
  state_ = std::move(trial);
}

std::size_t Codebook::import_valid(const std::vector<std::string>& terms, const std::string& note) {
  std::lock_guard lock(mu_);
  std::vector<JournalEntry> entries;
  auto trial = state_;
  for (const auto& t : terms) {
    JournalEntry e = Override{t, state_.open_round(), Verdict::valid, note};
    trial.apply(e);
    entries.push_back(std::move(e));
  }
  if (!entries.empty()) append(entries);
  state_ = std::move(trial);
  return entries.size();
}

ValidationState Codebook::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::vector<std::string> Codebook::discrepancies() const {
  std::lock_guard lock(mu_);
  return state_.discrepancies();
}

json Codebook::state_json() const {
  std::lock_guard lock(mu_);
  return state_.to_json();
}

json Codebook::progress() const {
  std::lock_guard lock(mu_);
  return state_.progress();
}

json Codebook::list(const std::optional<std::string>& status, std::optional<int> arity, const std::string& query,
                    std::size_t page, std::size_t page_size) const {
  std::lock_guard lock(mu_);
  if (page == 0) page = 1;
  if (page_size == 0) page_size = 50;
  const auto q = fold_lower(query);
  json items = json::array();
  std::size_t total = 0;
  for (const auto& c : candidates_) {
    const auto term = c.term();
    if (arity && c.arity() != *arity) continue;
    if (!q.empty() && term.find(q) == std::string::npos) continue;
    auto latest = state_.latest(term);
    std::string st = (latest.empty() && !state_.has_override(term)) ? "undecided" : std::string(to_string(state_.consensus(term)));
    if (status && *status != st) continue;
    ++total;
    if (total <= (page - 1) * page_size || total > page * page_size) continue;
    json decisions = json::array();
    for (const auto& [coder, d] : latest)
      decisions.push_back({{"coder_id", coder}, {"round", d.round}, {"verdict", to_string(d.verdict)},
                           {"comment", d.comment}, {"timestamp", d.timestamp}});
    items.push_back({{"term", term},
                     {"arity", c.arity()},
                     {"n_docs", c.doc_set.size()},
                     {"n_occurrences", c.occurrences.size()},
                     {"first_year", c.first_year},
                     {"status", st},
                     {"decisions", decisions}});
  }
  return {{"total", total}, {"page", page}, {"page_size", page_size}, {"round", state_.open_round()}, {"items", items}};
}

CandidateSet Codebook::export_validated() const {
  std::lock_guard lock(mu_);
  return segmap::export_validated(state_, candidates_);
}

}  // namespace segmap
