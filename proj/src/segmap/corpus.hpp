// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace segmap {

enum class DocType { article, chapter, book, conference_paper, editorial, review, other };

std::string_view to_string(DocType t);
/// Accepts both the enum spelling and export labels such as "Book Chapter".
DocType parse_doc_type(std::string_view label);

inline constexpr int kMinYear = 1500;
inline constexpr int kMaxYear = 2100;

struct DocumentRecord {
  std::string doc_id;
  std::string title;
  std::string abstract_text;
  std::vector<std::string> keywords;
  int year = 0;
  std::string source_title;
  DocType doc_type = DocType::other;
  std::vector<std::string> asjc_fields;  // position 0 is the primary discipline
  std::vector<std::string> authors;
  std::set<std::string> countries;
  std::vector<std::string> references;
  std::string language;
  int cited_by = 0;

  bool operator==(const DocumentRecord&) const = default;
};

/// Export column names for each record field. An unset field is simply not
/// ingested; a set field naming a column that is absent from the header is
/// an error.
struct ColumnMap {
  std::optional<std::string> doc_id;
  std::optional<std::string> title;
  std::optional<std::string> abstract_text;
  std::vector<std::string> keywords;
  std::optional<std::string> year;
  std::optional<std::string> source_title;
  std::optional<std::string> doc_type;
  std::optional<std::string> asjc;
  std::optional<std::string> authors;
  std::optional<std::string> affiliations;
  std::optional<std::string> references;
  std::optional<std::string> language;
  std::optional<std::string> cited_by;

  static ColumnMap scopus();
  /// The Scopus defaults restricted to columns present in `header`.
  static ColumnMap detect(const std::vector<std::string>& header);
  static ColumnMap from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct IngestManifest {
  std::string source;
  std::string source_sha256;
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::size_t rows_rejected = 0;
  std::vector<RejectedRow> rejects;
  std::vector<std::string> unmatched_affiliations;
  std::optional<std::string> filter_anchor;
  std::size_t filtered_out = 0;

  nlohmann::json to_json() const;
  static IngestManifest from_json(const nlohmann::json& j);
};

/// Immutable after construction; records are ordered by doc_id.
class CorpusStore {
 public:
  CorpusStore() = default;
  CorpusStore(std::vector<DocumentRecord> records, IngestManifest manifest);

  const std::vector<DocumentRecord>& records() const { return records_; }
  const IngestManifest& manifest() const { return manifest_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const DocumentRecord* find(std::string_view doc_id) const;

 private:
  std::vector<DocumentRecord> records_;
  IngestManifest manifest_;
  std::unordered_map<std::string, std::size_t> index_;
};

CorpusStore ingest_csv(const std::filesystem::path& path, const ColumnMap& columns);
/// Same as ingest_csv over in-memory text. A nullopt column map means
/// ColumnMap::detect on the header.
CorpusStore ingest_csv_text(std::string_view text, const std::optional<ColumnMap>& columns,
                            std::string source_label = "<memory>");

/// Records whose title, abstract or any keyword contains `anchor` as a whole
/// token (case-insensitive).
CorpusStore filter_by_anchor(const CorpusStore& store, std::string_view anchor);

struct CorpusStats {
  std::size_t records = 0;
  std::map<std::string, std::size_t> by_doc_type;
  std::map<int, std::size_t> by_year;
  std::map<std::string, std::size_t> by_country;
  std::size_t distinct_sources = 0;
  std::size_t distinct_authors = 0;
  std::size_t total_references = 0;

  nlohmann::json to_json() const;
};

CorpusStats corpus_stats(const CorpusStore& store);

nlohmann::json record_to_json(const DocumentRecord& r);
DocumentRecord record_from_json(const nlohmann::json& j);

/// Newline-delimited JSON, one record per line, keys sorted.
std::string serialize_records(const CorpusStore& store);
void save_store(const CorpusStore& store, const std::filesystem::path& records_path,
                const std::filesystem::path& manifest_path);
CorpusStore load_store(const std::filesystem::path& records_path,
                       const std::filesystem::path& manifest_path);

}  // namespace segmap
