// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "segmap/codebook.hpp"
#include "segmap/error.hpp"
#include "segmap/corpus.hpp"
#include "segmap/ontology.hpp"

namespace segmap {

inline constexpr const char* kTokenHeader = "X-Segmap-Token";

struct ServeContext {
  Codebook* codebook = nullptr;           // required
  LabelingStore* labeling = nullptr;      // optional; /labeling answers 404 without it
  const CorpusStore* store = nullptr;     // optional; enables sample contexts
  CandidateSet candidates;
  std::optional<std::string> token;       // required in kTokenHeader when set
};

/// HTTP JSON API over the codebook and the labeling state.
class ReviewServer {
 public:
  explicit ReviewServer(ServeContext ctx);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  /// Binds and returns the port (an ephemeral one when `port` is 0).
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Status code and body for a failure of `kind`.
int http_status_for(ErrorKind kind);
nlohmann::json error_body(std::string_view error, std::string_view detail);

}  // namespace segmap
