// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/csv.hpp"

#include "segmap/error.hpp"

namespace segmap {

char detect_delimiter(std::string_view text) {
  auto eol = text.find('\n');
  auto first = text.substr(0, eol);
  return first.find('\t') != std::string_view::npos ? '\t' : ',';
}

CsvTable read_delimited(std::string_view text, char delimiter) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  CsvTable table;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  std::size_t quote_line = 0;
  bool have_header = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    bool blank = row.size() == 1 && row[0].empty();
    if (!blank) {
      if (!have_header) {
        table.header = std::move(row);
        have_header = true;
      } else {
        table.rows.push_back(std::move(row));
        table.line_numbers.push_back(row_line);
      }
    }
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
      quote_line = line;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // swallowed; the '\n' ends the row
    } else if (c == '\n') {
      end_row();
      ++line;
      row_line = line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorKind::parse, "malformed delimiter structure: unterminated quote opened on line " +
                                      std::to_string(quote_line));
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return table;
}

std::string csv_escape(std::string_view field, char delimiter) {
  bool needs = field.find_first_of("\"\r\n") != std::string_view::npos ||
               field.find(delimiter) != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& os, std::span<const std::string> fields, char delimiter) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << delimiter;
    os << csv_escape(fields[i], delimiter);
  }
  os << '\n';
}

}  // namespace segmap
