// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace segmap::cli {

/// Raised for any invalid configuration; the message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { path, string, positive_int, nonneg_int, real, positive_real, boolean, u64, choice, int_list };

struct KeySpec {
  std::string name;
  ValueType type;
  std::string default_value;  // empty = unset
  std::vector<std::string> choices;
  std::string help;
};

const std::vector<KeySpec>& config_keys();

/// Flat key/value configuration. Layers, lowest first: defaults, the config
/// file, then command-line overrides.
class Config {
 public:
  Config();

  /// `key = value` lines; `#` comments; `[section]` headers group keys but
  /// do not namespace them. Relative paths resolve against the file's
  /// directory.
  void load_file(const std::filesystem::path& file);
  void load_text(const std::string& text, const std::filesystem::path& base_dir, const std::string& origin);
  /// Validates and stores one value; throws ConfigError naming the key.
  void set(const std::string& key, const std::string& value);
  /// Parses "key=value".
  void set_assignment(const std::string& assignment);

  bool has(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::optional<std::filesystem::path> path(const std::string& key) const;
  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  std::vector<int> int_list(const std::string& key) const;

  /// Every key with its effective value (null when unset), sorted by key.
  nlohmann::json effective() const;

 private:
  const KeySpec& spec(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

}  // namespace segmap::cli
