// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace segmap {

/// Maps an affiliation's trailing segment ("Chicago, USA" -> "USA") onto a
/// canonical country name, or nullopt when the segment is not a country.
std::optional<std::string> match_country(std::string_view segment);

/// Applies match_country to the last comma-separated segment of one
/// affiliation string.
std::optional<std::string> country_of_affiliation(std::string_view affiliation);

}  // namespace segmap
