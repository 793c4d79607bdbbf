// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "segmap/segmap.h"

namespace segmap::cli {

/// A failed library call; carries the status for the exit code.
class ApiError : public std::runtime_error {
 public:
  ApiError(sm_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  sm_status status;
};

/// An artifact produced by an earlier subcommand is absent.
class MissingArtifact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(sm_status s);
/// Takes ownership of a library-allocated string.
std::string take(char* s);

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <class T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Corpus = Handle<sm_corpus, sm_corpus_free>;
using Lexicon = Handle<sm_lexicon, sm_lexicon_free>;
using Candidates = Handle<sm_candidates, sm_candidates_free>;
using CodebookH = Handle<sm_codebook, sm_codebook_free>;
using Graph = Handle<sm_graph, sm_graph_free>;
using Partition = Handle<sm_partition, sm_partition_free>;
using Embeddings = Handle<sm_embeddings, sm_embeddings_free>;
using DendrogramH = Handle<sm_dendrogram, sm_dendrogram_free>;
using Labeling = Handle<sm_labeling, sm_labeling_free>;
using Server = Handle<sm_server, sm_server_free>;

std::string read_text(const std::filesystem::path& p);
/// Writes through a temporary file and a rename.
void write_text(const std::filesystem::path& p, const std::string& content);
std::string sha256_of(const std::filesystem::path& p);

/// Input and output hashes of one subcommand run, written as
/// <out_dir>/manifests/<name>.json. Outputs are recorded relative to out_dir.
class RunManifest {
 public:
  RunManifest(std::string subcommand, std::filesystem::path out_dir, nlohmann::json config);

  void input(const std::filesystem::path& p);
  /// Writes `content` under out_dir and records its hash.
  std::filesystem::path output(const std::filesystem::path& rel, const std::string& content);
  /// Records a file already written under out_dir.
  void produced(const std::filesystem::path& rel);
  std::filesystem::path path(const std::filesystem::path& rel) const { return out_dir_ / rel; }
  void seed(const std::string& name, std::uint64_t value);
  void note(const std::string& key, nlohmann::json value);
  void write() const;

 private:
  std::string subcommand_;
  std::filesystem::path out_dir_;
  nlohmann::json config_;
  nlohmann::json inputs_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
  nlohmann::json seeds_ = nlohmann::json::object();
  nlohmann::json notes_ = nlohmann::json::object();
};

/// Errors with MissingArtifact naming `producer` when `p` does not exist.
void require_artifact(const std::filesystem::path& p, const std::string& producer);

/// One entry per nonblank line; '#' starts a comment line.
std::vector<std::string> read_lines(const std::filesystem::path& p);

}  // namespace segmap::cli
