// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace segmap::cli {

namespace {

std::string data_file(const char* rel) { return (std::filesystem::path(SEGMAP_DATA_DIR) / rel).string(); }

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Strips a trailing comment and unquotes a value.
std::string file_value(const std::string& raw, const std::string& key, const std::string& where) {
  std::string v = trim(raw);
  if (!v.empty() && v.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < v.size() && v[i] != '"'; ++i) {
      if (v[i] == '\\' && i + 1 < v.size()) {
        ++i;
        out += v[i] == 'n' ? '\n' : v[i] == 't' ? '\t' : v[i];
      } else {
        out += v[i];
      }
    }
    if (i >= v.size()) bad(key, "unterminated string at " + where);
    std::string rest = trim(v.substr(i + 1));
    if (!rest.empty() && rest.front() != '#') bad(key, "unexpected text after string at " + where);
    return out;
  }
  if (auto h = v.find('#'); h != std::string::npos) v = trim(v.substr(0, h));
  return v;
}

}  // namespace

const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys = {
      {"anchor", ValueType::string, "segregation", {}, "final token of every candidate n-gram"},
      {"cluster_labels", ValueType::path, "", {}, "CSV cluster,label with the default type per cluster"},
      {"cocitation_exclude", ValueType::path, "", {}, "references to drop from co-citation, one per line"},
      {"column_map", ValueType::path, "", {}, "JSON column map; header names are detected when unset"},
      {"conet_min_weight", ValueType::positive_int, "1", {}, "minimum co-occurrence count kept in the form network"},
      {"corpus", ValueType::path, "", {}, "bibliographic CSV export"},
      {"country_min_docs", ValueType::positive_int, "5", {}, "minimum documents per country node"},
      {"coupling_min", ValueType::positive_int, "5", {}, "minimum citations per coupling node"},
      {"cut_distance", ValueType::real, "", {}, "cut the dendrogram at this distance instead of n_clusters"},
      {"discipline_universe", ValueType::positive_int, "169", {}, "number of disciplinary fields"},
      {"embeddings", ValueType::path, "", {}, "JSON-lines embedding file; lexical distances when unset"},
      {"forms_source", ValueType::choice, "validated", {"validated", "candidates"}, "form set used downstream"},
      {"host", ValueType::string, "127.0.0.1", {}, "serve bind address"},
      {"journal", ValueType::path, "", {}, "coding journal; defaults to <out_dir>/code/journal.jsonl"},
      {"label_overrides", ValueType::path, "", {}, "CSV form,label1..label8 of per-form labels"},
      {"lexicon_dir", ValueType::path, data_file("lexicon"), {}, "stop lexicon directory"},
      {"min_cocitations", ValueType::positive_int, "10", {}, "minimum co-citation count per edge"},
      {"min_coders", ValueType::positive_int, "1", {}, "decisions needed before consensus"},
      {"min_degree", ValueType::nonneg_int, "0", {}, "export filter: minimum node degree"},
      {"min_edge_weight", ValueType::real, "0", {}, "export filter: minimum edge weight"},
      {"moving_average_window", ValueType::positive_int, "6", {}, "trailing window of smoothed series"},
      {"n_clusters", ValueType::positive_int, "32", {}, "flat clusters cut from the dendrogram"},
      {"out_dir", ValueType::path, "segmap-out", {}, "artifact directory"},
      {"port", ValueType::nonneg_int, "8765", {}, "serve port (0 picks a free port)"},
      {"positions", ValueType::path, data_file("positions.txt"), {}, "position lexicon for intersectionality"},
      {"require_all_registered", ValueType::boolean, "false", {}, "consensus needs every registered coder"},
      {"resolution", ValueType::positive_real, "1.0", {}, "modularity resolution"},
      {"seed", ValueType::u64, "42", {}, "community detection seed"},
      {"slice_years", ValueType::int_list, "", {}, "comma-separated years for cumulative network slices"},
      {"threads", ValueType::nonneg_int, "0", {}, "worker threads (0 = all cores)"},
      {"token", ValueType::string, "", {}, "shared token required by serve when set"},
      {"top_k", ValueType::positive_int, "1000", {}, "maximum nodes per scholarly network"},
      {"types", ValueType::path, "", {}, "type universe, one label per line"},
  };
  return keys;
}

Config::Config() {
  for (const auto& k : config_keys()) {
    if (!k.default_value.empty()) values_[k.name] = k.default_value;
  }
}

const KeySpec& Config::spec(const std::string& key) const {
  for (const auto& k : config_keys()) {
    if (k.name == key) return k;
  }
  throw ConfigError("config key '" + key + "': unknown key");
}

void Config::set(const std::string& key, const std::string& value) {
  const KeySpec& k = spec(key);
  if (value.empty() && k.default_value.empty()) {
    values_.erase(key);
    return;
  }
  switch (k.type) {
    case ValueType::path:
    case ValueType::string:
      if (key == "anchor") {
        if (value.empty() || value.find_first_of(" \t") != std::string::npos) bad(key, "must be a single nonempty token");
      }
      if (key == "host" && value.empty()) bad(key, "must not be empty");
      break;
    case ValueType::positive_int:
    case ValueType::nonneg_int: {
      long long n = 0;
      if (!parse_number(value, n)) bad(key, "expected an integer, got '" + value + "'");
      if (k.type == ValueType::positive_int && n <= 0) bad(key, "must be positive, got " + value);
      if (n < 0) bad(key, "must be nonnegative, got " + value);
      if (key == "port" && n > 65535) bad(key, "must be at most 65535");
      if (key == "discipline_universe" && n < 2) bad(key, "must be at least 2");
      break;
    }
    case ValueType::real:
    case ValueType::positive_real: {
      double d = 0;
      if (!parse_real(value, d)) bad(key, "expected a number, got '" + value + "'");
      if (k.type == ValueType::positive_real && d <= 0) bad(key, "must be positive, got " + value);
      if (d < 0) bad(key, "must be nonnegative, got " + value);
      break;
    }
    case ValueType::boolean:
      if (value != "true" && value != "false") bad(key, "expected true or false, got '" + value + "'");
      break;
    case ValueType::u64: {
      std::uint64_t n = 0;
      if (!parse_number(value, n)) bad(key, "expected an unsigned integer, got '" + value + "'");
      break;
    }
    case ValueType::choice:
      if (std::find(k.choices.begin(), k.choices.end(), value) == k.choices.end()) {
        std::string opts;
        for (const auto& c : k.choices) opts += (opts.empty() ? "" : ", ") + c;
        bad(key, "expected one of " + opts + ", got '" + value + "'");
      }
      break;
    case ValueType::int_list:
      for (const auto& item : split_commas(value)) {
        int y = 0;
        if (!parse_number(item, y)) bad(key, "expected comma-separated integers, got '" + item + "'");
      }
      break;
  }
  if (value.empty()) {
    values_.erase(key);
  } else {
    values_[key] = value;
  }
}

void Config::set_assignment(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::load_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), file.parent_path(), file.string());
}

void Config::load_text(const std::string& text, const std::filesystem::path& base_dir, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, int> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("malformed section header at " + where);
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at " + where);
    std::string key = trim(t.substr(0, eq));
    if (auto prev = seen.find(key); prev != seen.end()) {
      bad(key, "set twice (lines " + std::to_string(prev->second) + " and " + std::to_string(lineno) + ") in " + origin);
    }
    seen[key] = lineno;
    std::string value = file_value(t.substr(eq + 1), key, where);
    if (spec(key).type == ValueType::path && !value.empty() && std::filesystem::path(value).is_relative()) {
      value = (base_dir / value).lexically_normal().string();
    }
    set(key, value);
  }
}

bool Config::has(const std::string& key) const {
  spec(key);
  return values_.count(key) > 0;
}

std::string Config::str(const std::string& key) const {
  spec(key);
  auto it = values_.find(key);
  return it == values_.end() ? std::string() : it->second;
}

std::optional<std::filesystem::path> Config::path(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return std::filesystem::path(str(key));
}

long long Config::integer(const std::string& key) const {
  long long n = 0;
  parse_number(str(key), n);
  return n;
}

double Config::real(const std::string& key) const {
  double d = 0;
  parse_real(str(key), d);
  return d;
}

bool Config::boolean(const std::string& key) const { return str(key) == "true"; }

std::uint64_t Config::u64(const std::string& key) const {
  std::uint64_t n = 0;
  parse_number(str(key), n);
  return n;
}

std::vector<int> Config::int_list(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : split_commas(str(key))) {
    int y = 0;
    parse_number(item, y);
    out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

nlohmann::json Config::effective() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& k : config_keys()) {
    auto it = values_.find(k.name);
    if (it == values_.end()) {
      out[k.name] = nullptr;
    } else {
      out[k.name] = k.name == "token" ? "<redacted>" : it->second;
    }
  }
  return out;
}

}  // namespace segmap::cli
