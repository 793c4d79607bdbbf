// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "segmap/corpus.hpp"
#include "segmap/extract.hpp"
#include "segmap/metrics.hpp"

namespace segmap {

struct MetricsOptions {
  std::optional<PositionLexicon> positions;  // intersectionality skipped without it
  int discipline_universe = 169;
  int moving_average_window = 6;

  static MetricsOptions from_json(const nlohmann::json& j);
};

/// Every index over one form set: yearly series, fits and growth rates,
/// per-form disciplinarity, intersectionality and precedence statistics.
/// Steps whose preconditions fail are reported as null with a reason under
/// "notes" instead of aborting the report.
nlohmann::json metrics_report(const CandidateSet& forms, const CorpusStore& store, const MetricsOptions& opt);

nlohmann::json series_to_json(const YearSeries& s);
YearSeries series_from_json(const nlohmann::json& j);

}  // namespace segmap
