// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "builders.hpp"
#include "fixtures.hpp"

namespace segmap::testing {

/// Lexicon read straight from the data files, without StopLexicon.
inline std::set<std::string> lexicon_words() {
  std::set<std::string> words;
  for (const auto& entry : std::filesystem::directory_iterator(data_path("lexicon"))) {
    std::ifstream in(entry.path());
    for (std::string line; std::getline(in, line);) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ws(line);
      for (std::string w; ws >> w;) words.insert(w);
    }
  }
  return words;
}

/// A seeded random corpus over anchor, stop and content tokens, with the
/// anchor occurrences counted directly from the generated token streams.
struct SyntheticCorpus {
  CorpusStore store;
  std::size_t qualifying = 0;          // anchor preceded by a non-stop token
  std::size_t qualifying_trigram = 0;  // ... and by a second non-stop token
};

inline SyntheticCorpus synthetic_corpus(std::uint64_t seed, const std::string& anchor) {
  static const std::set<std::string> blocked = lexicon_words();
  static const std::vector<std::string> stop = [] {
    std::vector<std::string> out;
    for (const auto& w : blocked)
      if (std::all_of(w.begin(), w.end(), [](char ch) { return std::islower(ch) || std::isdigit(ch); })) out.push_back(w);
    return out;
  }();
  const std::vector<std::string> content = {"urban", "racial", "residential", "school", "gender", "spatial",
                                            "income", "ethnic", "vertical", "digital", "occupational"};
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<DocumentRecord> docs;
  std::size_t expected = 0, expected_tri = 0;
  const std::size_t n_docs = 1 + pick(30);
  for (std::size_t d = 0; d < n_docs; ++d) {
    Doc doc("d" + std::to_string(d), 1950 + static_cast<int>(pick(70)));
    auto make_stream = [&] {
      std::vector<std::string> toks;
      const std::size_t len = 1 + pick(12);
      for (std::size_t i = 0; i < len; ++i) {
        auto r = pick(10);
        toks.push_back(r < 3 ? anchor : r < 6 ? stop[pick(stop.size())] : content[pick(content.size())]);
      }
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i] != anchor || blocked.count(toks[i - 1])) continue;
        ++expected;
        if (i >= 2 && !blocked.count(toks[i - 2])) ++expected_tri;
      }
      std::string text;
      for (const auto& t : toks) text += (text.empty() ? "" : " ") + t;
      return text;
    };
    doc.title(make_stream()).abstract_text(make_stream());
    std::vector<std::string> kws;
    for (std::size_t k = pick(3); k > 0; --k) kws.push_back(make_stream());
    doc.keywords(kws);
    docs.push_back(doc);
  }
  return {make_store(docs), expected, expected_tri};
}

}  // namespace segmap::testing
