// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace segmap {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based physical line on which each row starts.
  std::vector<std::size_t> line_numbers;
};

/// Tab if the first line contains a tab, comma otherwise.
char detect_delimiter(std::string_view text);

/// RFC 4180 reader: quoted fields may span lines, "" escapes a quote, CRLF
/// and a leading UTF-8 BOM are accepted. Rows keep whatever field count they
/// have; callers decide what a short or long row means. An unterminated
/// quote throws ErrorKind::parse.
CsvTable read_delimited(std::string_view text, char delimiter);

std::string csv_escape(std::string_view field, char delimiter = ',');
void write_csv_row(std::ostream& os, std::span<const std::string> fields, char delimiter = ',');

}  // namespace segmap
