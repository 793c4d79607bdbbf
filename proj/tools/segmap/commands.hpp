// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace segmap::cli {

struct CodeArgs {
  std::string action;  // import, export, stats, decide, resolve, discrepancies
  std::string terms_file;
  bool all = false;
  std::string note = "imported";
  std::string term, coder, verdict, comment, changelog;
  std::optional<int> round;
  std::vector<std::string> accept;  // term=verdict
  std::vector<std::string> defer;
};

struct ExportArgs {
  std::string graph;
  std::string format = "graphml";
  std::string plot;
  std::string ontology;
  bool forms = false;
  std::string output;
};

void run_ingest(const Config& cfg);
void run_extract(const Config& cfg);
void run_code(const Config& cfg, const CodeArgs& args);
void run_metrics(const Config& cfg);
void run_conet(const Config& cfg);
void run_schol(const Config& cfg);
void run_ontology(const Config& cfg);
void run_serve(const Config& cfg);
void run_export(const Config& cfg, const ExportArgs& args);

}  // namespace segmap::cli
