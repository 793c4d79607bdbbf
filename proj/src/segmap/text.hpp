// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace segmap {

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

/// Splits on `sep`, trims each piece and drops empty pieces.
std::vector<std::string> split_trimmed(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Lowercases and folds Latin diacritics to their ASCII base letters
/// ("São" -> "sao"). Code points outside the folding table pass through.
std::string fold_lower(std::string_view utf8);

/// Word tokenizer shared by extraction and anchor filtering. Splits on
/// whitespace and punctuation (including intra-word hyphens and
/// apostrophes); keeps digit-only tokens; never yields empty tokens.
std::vector<std::string> tokenize_text(std::string_view utf8);

/// Case-folds, replaces punctuation runs with single spaces and collapses
/// whitespace.
std::string normalize_label(std::string_view utf8);

}  // namespace segmap
