// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "segmap/countries.hpp"
#include "segmap/csv.hpp"
#include "segmap/error.hpp"
#include "segmap/hashing.hpp"
#include "segmap/parallel.hpp"
#include "segmap/text.hpp"

namespace segmap {

using nlohmann::json;

std::string_view to_string(DocType t) {
  switch (t) {
    case DocType::article: return "article";
    case DocType::chapter: return "chapter";
    case DocType::book: return "book";
    case DocType::conference_paper: return "conference_paper";
    case DocType::editorial: return "editorial";
    case DocType::review: return "review";
    case DocType::other: return "other";
  }
  return "other";
}

DocType parse_doc_type(std::string_view label) {
  auto key = normalize_label(label);
  if (key == "article") return DocType::article;
  if (key == "chapter" || key == "book chapter") return DocType::chapter;
  if (key == "book") return DocType::book;
  if (key == "conference paper" || key == "conference_paper") return DocType::conference_paper;
  if (key == "editorial") return DocType::editorial;
  if (key == "review") return DocType::review;
  return DocType::other;
}

// ---------------------------------------------------------------------------
// ColumnMap

ColumnMap ColumnMap::scopus() {
  ColumnMap m;
  m.doc_id = "EID";
  m.title = "Title";
  m.abstract_text = "Abstract";
  m.keywords = {"Author Keywords", "Index Keywords"};
  m.year = "Year";
  m.source_title = "Source title";
  m.doc_type = "Document Type";
  m.asjc = "ASJC";
  m.authors = "Authors";
  m.affiliations = "Affiliations";
  m.references = "References";
  m.language = "Language of Original Document";
  m.cited_by = "Cited by";
  return m;
}

ColumnMap ColumnMap::detect(const std::vector<std::string>& header) {
  auto present = [&](const std::optional<std::string>& c) -> std::optional<std::string> {
    if (c && std::find(header.begin(), header.end(), *c) != header.end()) return c;
    return std::nullopt;
  };
  auto m = scopus();
  for (auto* f : {&m.doc_id, &m.title, &m.abstract_text, &m.year, &m.source_title, &m.doc_type,
                  &m.asjc, &m.authors, &m.affiliations, &m.references, &m.language, &m.cited_by}) {
    *f = present(*f);
  }
  std::erase_if(m.keywords, [&](const std::string& k) {
    return std::find(header.begin(), header.end(), k) == header.end();
  });
  return m;
}

namespace {

struct FieldSlot {
  const char* key;
  std::optional<std::string> ColumnMap::*member;
};

constexpr FieldSlot kSlots[] = {
    {"doc_id", &ColumnMap::doc_id},
    {"title", &ColumnMap::title},
    {"abstract", &ColumnMap::abstract_text},
    {"year", &ColumnMap::year},
    {"source_title", &ColumnMap::source_title},
    {"doc_type", &ColumnMap::doc_type},
    {"asjc", &ColumnMap::asjc},
    {"authors", &ColumnMap::authors},
    {"affiliations", &ColumnMap::affiliations},
    {"references", &ColumnMap::references},
    {"language", &ColumnMap::language},
    {"cited_by", &ColumnMap::cited_by},
};

}  // namespace

ColumnMap ColumnMap::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, "column map must be a JSON object");
  ColumnMap m;
  for (auto& [key, value] : j.items()) {
    if (key == "keywords") {
      if (value.is_string()) {
        m.keywords = split_trimmed(value.get<std::string>(), ';');
      } else if (value.is_array()) {
        for (auto& v : value) m.keywords.push_back(v.get<std::string>());
      } else {
        throw Error(ErrorKind::invalid_argument, "column map key 'keywords' must be a string or array");
      }
      continue;
    }
    auto slot = std::find_if(std::begin(kSlots), std::end(kSlots),
                             [&](const FieldSlot& s) { return key == s.key; });
    if (slot == std::end(kSlots)) throw Error(ErrorKind::invalid_argument, "unknown column map key: " + key);
    if (!value.is_string()) throw Error(ErrorKind::invalid_argument, "column map key '" + key + "' must be a string");
    m.*(slot->member) = value.get<std::string>();
  }
  return m;
}

json ColumnMap::to_json() const {
  json j = json::object();
  for (const auto& s : kSlots) {
    if (this->*(s.member)) j[s.key] = *(this->*(s.member));
  }
  if (!keywords.empty()) j["keywords"] = keywords;
  return j;
}

// ---------------------------------------------------------------------------
// Manifest

json IngestManifest::to_json() const {
  json rej = json::array();
  for (const auto& r : rejects) rej.push_back({{"line", r.line}, {"reason", r.reason}});
  json j = {{"source", source},
            {"source_sha256", source_sha256},
            {"rows_read", rows_read},
            {"rows_accepted", rows_accepted},
            {"rows_rejected", rows_rejected},
            {"rejects", rej},
            {"unmatched_affiliations", unmatched_affiliations}};
  if (filter_anchor) {
    j["filter_anchor"] = *filter_anchor;
    j["filtered_out"] = filtered_out;
  }
  return j;
}

IngestManifest IngestManifest::from_json(const json& j) {
  IngestManifest m;
  m.source = j.value("source", "");
  m.source_sha256 = j.value("source_sha256", "");
  m.rows_read = j.value("rows_read", std::size_t{0});
  m.rows_accepted = j.value("rows_accepted", std::size_t{0});
  m.rows_rejected = j.value("rows_rejected", std::size_t{0});
  for (const auto& r : j.value("rejects", json::array()))
    m.rejects.push_back({r.at("line").get<std::size_t>(), r.at("reason").get<std::string>()});
  m.unmatched_affiliations = j.value("unmatched_affiliations", std::vector<std::string>{});
  if (j.contains("filter_anchor")) {
    m.filter_anchor = j.at("filter_anchor").get<std::string>();
    m.filtered_out = j.value("filtered_out", std::size_t{0});
  }
  return m;
}

// ---------------------------------------------------------------------------
// Store

CorpusStore::CorpusStore(std::vector<DocumentRecord> records, IngestManifest manifest)
    : records_(std::move(records)), manifest_(std::move(manifest)) {
  std::sort(records_.begin(), records_.end(),
            [](const DocumentRecord& a, const DocumentRecord& b) { return a.doc_id < b.doc_id; });
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].doc_id, i).second)
      throw Error(ErrorKind::invalid_argument, "duplicate doc_id in store: " + records_[i].doc_id);
  }
}

const DocumentRecord* CorpusStore::find(std::string_view doc_id) const {
  auto it = index_.find(std::string(doc_id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

// ---------------------------------------------------------------------------
// Ingest

namespace {

struct ResolvedColumns {
  std::optional<std::size_t> doc_id, title, abstract_text, year, source_title, doc_type, asjc, authors,
      affiliations, references, language, cited_by;
  std::vector<std::size_t> keywords;
};

ResolvedColumns resolve(const ColumnMap& m, const std::vector<std::string>& header) {
  auto find = [&](const std::optional<std::string>& name) -> std::optional<std::size_t> {
    if (!name) return std::nullopt;
    auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw Error(ErrorKind::invalid_argument, "column map references absent column: " + *name);
    return static_cast<std::size_t>(it - header.begin());
  };
  ResolvedColumns r;
  r.doc_id = find(m.doc_id);
  r.title = find(m.title);
  r.abstract_text = find(m.abstract_text);
  r.year = find(m.year);
  r.source_title = find(m.source_title);
  r.doc_type = find(m.doc_type);
  r.asjc = find(m.asjc);
  r.authors = find(m.authors);
  r.affiliations = find(m.affiliations);
  r.references = find(m.references);
  r.language = find(m.language);
  r.cited_by = find(m.cited_by);
  for (const auto& k : m.keywords) r.keywords.push_back(*find(k));
  if (!r.year) throw Error(ErrorKind::invalid_argument, "column map must name the year column");
  if (!r.title && !r.abstract_text && r.keywords.empty())
    throw Error(ErrorKind::invalid_argument, "column map must name at least one of title, abstract, keywords");
  return r;
}

std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

struct RowOutcome {
  std::optional<DocumentRecord> record;
  std::string reject_reason;
  std::vector<std::string> unmatched;
};

RowOutcome parse_row(const std::vector<std::string>& row, std::size_t header_size, std::size_t data_index,
                     const ResolvedColumns& c) {
  RowOutcome out;
  if (row.size() != header_size) {
    out.reject_reason = "field count " + std::to_string(row.size()) + " != header " + std::to_string(header_size);
    return out;
  }
  auto cell = [&](const std::optional<std::size_t>& i) -> std::string {
    return i ? std::string(trim(row[*i])) : std::string();
  };

  DocumentRecord r;
  auto year = parse_int(row[*c.year]);
  if (!year) {
    out.reject_reason = "unparseable year";
    return out;
  }
  if (*year < kMinYear || *year > kMaxYear) {
    out.reject_reason = "year out of range: " + std::to_string(*year);
    return out;
  }
  r.year = *year;
  r.title = cell(c.title);
  r.abstract_text = cell(c.abstract_text);
  for (auto k : c.keywords)
    for (auto& kw : split_trimmed(row[k], ';')) r.keywords.push_back(std::move(kw));
  if (r.title.empty() && r.abstract_text.empty() && r.keywords.empty()) {
    out.reject_reason = "missing title, abstract and keywords";
    return out;
  }
  r.doc_id = cell(c.doc_id);
  if (r.doc_id.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "row-%06zu", data_index + 1);
    r.doc_id = buf;
  }
  r.source_title = cell(c.source_title);
  r.doc_type = parse_doc_type(cell(c.doc_type));
  if (c.asjc) r.asjc_fields = split_trimmed(row[*c.asjc], ';');
  if (c.authors) r.authors = split_trimmed(row[*c.authors], ';');
  if (c.references) r.references = split_trimmed(row[*c.references], ';');
  r.language = cell(c.language);
  if (c.cited_by) r.cited_by = parse_int(row[*c.cited_by]).value_or(0);
  if (c.affiliations) {
    for (const auto& aff : split_trimmed(row[*c.affiliations], ';')) {
      if (auto country = country_of_affiliation(aff)) {
        r.countries.insert(*country);
      } else {
        out.unmatched.push_back(aff);
      }
    }
  }
  out.record = std::move(r);
  return out;
}

}  // namespace

CorpusStore ingest_csv_text(std::string_view text, const std::optional<ColumnMap>& columns,
                            std::string source_label) {
  auto table = read_delimited(text, detect_delimiter(text));
  IngestManifest manifest;
  manifest.source = std::move(source_label);
  manifest.source_sha256 = sha256_hex(text);
  manifest.rows_read = table.rows.size();
  if (table.header.empty()) return CorpusStore({}, manifest);

  const auto map = columns ? *columns : ColumnMap::detect(table.header);
  const auto resolved = resolve(map, table.header);

  std::vector<RowOutcome> outcomes(table.rows.size());
  parallel_chunks(table.rows.size(), 256, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) outcomes[i] = parse_row(table.rows[i], table.header.size(), i, resolved);
  });

  std::vector<DocumentRecord> records;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    for (auto& u : o.unmatched) manifest.unmatched_affiliations.push_back(std::move(u));
    if (o.record && !seen.insert(o.record->doc_id).second) {
      o.reject_reason = "duplicate doc_id: " + o.record->doc_id;
      o.record.reset();
    }
    if (o.record) {
      records.push_back(std::move(*o.record));
    } else {
      manifest.rejects.push_back({table.line_numbers[i], o.reject_reason});
    }
  }
  std::sort(manifest.unmatched_affiliations.begin(), manifest.unmatched_affiliations.end());
  manifest.unmatched_affiliations.erase(
      std::unique(manifest.unmatched_affiliations.begin(), manifest.unmatched_affiliations.end()),
      manifest.unmatched_affiliations.end());
  manifest.rows_accepted = records.size();
  manifest.rows_rejected = manifest.rejects.size();
  return CorpusStore(std::move(records), std::move(manifest));
}

CorpusStore ingest_csv(const std::filesystem::path& path, const ColumnMap& columns) {
  return ingest_csv_text(read_file(path), columns, path.filename().string());
}

// ---------------------------------------------------------------------------
// Filter and stats

namespace {

bool has_token(std::string_view text, const std::string& anchor) {
  for (const auto& t : tokenize_text(text))
    if (t == anchor) return true;
  return false;
}

}  // namespace

CorpusStore filter_by_anchor(const CorpusStore& store, std::string_view anchor) {
  const auto key = fold_lower(anchor);
  std::vector<DocumentRecord> kept;
  for (const auto& r : store.records()) {
    bool hit = has_token(r.title, key) || has_token(r.abstract_text, key) ||
               std::any_of(r.keywords.begin(), r.keywords.end(),
                           [&](const std::string& k) { return has_token(k, key); });
    if (hit) kept.push_back(r);
  }
  auto manifest = store.manifest();
  manifest.filter_anchor = key;
  manifest.filtered_out += store.size() - kept.size();
  manifest.rows_accepted = kept.size();
  return CorpusStore(std::move(kept), std::move(manifest));
}

CorpusStats corpus_stats(const CorpusStore& store) {
  CorpusStats s;
  s.records = store.size();
  std::set<std::string> sources;
  std::set<std::string> authors;
  for (const auto& r : store.records()) {
    ++s.by_doc_type[std::string(to_string(r.doc_type))];
    ++s.by_year[r.year];
    for (const auto& c : r.countries) ++s.by_country[c];
    if (!r.source_title.empty()) sources.insert(normalize_label(r.source_title));
    authors.insert(r.authors.begin(), r.authors.end());
    s.total_references += r.references.size();
  }
  s.distinct_sources = sources.size();
  s.distinct_authors = authors.size();
  return s;
}

json CorpusStats::to_json() const {
  json years = json::object();
  for (auto [y, n] : by_year) years[std::to_string(y)] = n;
  return {{"records", records},
          {"by_doc_type", by_doc_type},
          {"by_year", years},
          {"by_country", by_country},
          {"distinct_sources", distinct_sources},
          {"distinct_authors", distinct_authors},
          {"total_references", total_references}};
}

// ---------------------------------------------------------------------------
// Serialization

json record_to_json(const DocumentRecord& r) {
  return {{"doc_id", r.doc_id},
          {"title", r.title},
          {"abstract", r.abstract_text},
          {"keywords", r.keywords},
          {"year", r.year},
          {"source_title", r.source_title},
          {"doc_type", to_string(r.doc_type)},
          {"asjc_fields", r.asjc_fields},
          {"authors", r.authors},
          {"countries", r.countries},
          {"references", r.references},
          {"language", r.language},
          {"cited_by", r.cited_by}};
}

DocumentRecord record_from_json(const json& j) {
  DocumentRecord r;
  r.doc_id = j.at("doc_id").get<std::string>();
  r.title = j.value("title", "");
  r.abstract_text = j.value("abstract", "");
  r.keywords = j.value("keywords", std::vector<std::string>{});
  r.year = j.at("year").get<int>();
  r.source_title = j.value("source_title", "");
  r.doc_type = parse_doc_type(j.value("doc_type", "other"));
  r.asjc_fields = j.value("asjc_fields", std::vector<std::string>{});
  r.authors = j.value("authors", std::vector<std::string>{});
  r.countries = j.value("countries", std::set<std::string>{});
  r.references = j.value("references", std::vector<std::string>{});
  r.language = j.value("language", "");
  r.cited_by = j.value("cited_by", 0);
  return r;
}

std::string serialize_records(const CorpusStore& store) {
  std::string out;
  for (const auto& r : store.records()) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

void save_store(const CorpusStore& store, const std::filesystem::path& records_path,
                const std::filesystem::path& manifest_path) {
  write_file_atomic(records_path, serialize_records(store));
  write_file_atomic(manifest_path, store.manifest().to_json().dump(2) + "\n");
}

CorpusStore load_store(const std::filesystem::path& records_path, const std::filesystem::path& manifest_path) {
  std::vector<DocumentRecord> records;
  std::istringstream in(read_file(records_path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      records.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse, records_path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  auto manifest = IngestManifest::from_json(json::parse(read_file(manifest_path)));
  if (manifest.rows_accepted != records.size())
    throw Error(ErrorKind::parse, "manifest accepted-row count " + std::to_string(manifest.rows_accepted) +
                                      " does not match " + std::to_string(records.size()) + " stored records");
  return CorpusStore(std::move(records), std::move(manifest));
}

}  // namespace segmap
