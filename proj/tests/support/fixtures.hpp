// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

#include "segmap/corpus.hpp"
#include "segmap/extract.hpp"
#include "segmap/hashing.hpp"

namespace segmap::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(SEGMAP_FIXTURE_DIR) / name; }
inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(SEGMAP_DATA_DIR) / name; }

inline const StopLexicon& default_lexicon() {
  static const StopLexicon lex = StopLexicon::load_dir(data_path("lexicon"));
  return lex;
}

inline CorpusStore fixture_corpus() {
  return filter_by_anchor(ingest_csv_text(read_file(fixture("abstracts20.csv")), std::nullopt, "abstracts20.csv"),
                          "segregation");
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline TempDir::TempDir() {
  static int counter = 0;
  auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / ("segmap-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    if (std::filesystem::create_directory(path_)) break;
  }
}

inline TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace segmap::testing
