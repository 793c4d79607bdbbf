// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "segmap/csv.hpp"
#include "segmap/error.hpp"
#include "segmap/text.hpp"

using namespace segmap;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize_text splits on hyphens and punctuation") {
  CHECK(tokenize_text("Self-Segregation in cities.") == Tokens{"self", "segregation", "in", "cities"});
  CHECK(tokenize_text("women's  work, 1970s") == Tokens{"women", "s", "work", "1970s"});
  CHECK(tokenize_text("  ...  ").empty());
  CHECK(tokenize_text("") .empty());
}

TEST_CASE("tokenize_text folds diacritics") {
  CHECK(tokenize_text("São Paulo ségrégation") == Tokens{"sao", "paulo", "segregation"});
}

TEST_CASE("fold_lower and normalize_label") {
  CHECK(fold_lower("Ångström ÉCOLE") == "angstrom ecole");
  CHECK(normalize_label("  Book   Chapter ") == "book chapter");
  CHECK(normalize_label("Conference--Paper!") == "conference paper");
}

TEST_CASE("split_trimmed drops empty pieces") {
  CHECK(split_trimmed(" a ; ;b;  c ", ';') == Tokens{"a", "b", "c"});
  CHECK(split_trimmed("", ';').empty());
  CHECK(join({"a", "b", "c"}, "|") == "a|b|c");
}

TEST_CASE("read_delimited handles quotes, embedded newlines, BOM and CRLF") {
  const std::string text = "\xEF\xBB\xBFid,text\r\n1,\"a, \"\"quoted\"\"\r\nline\"\r\n2,plain\r\n";
  auto t = read_delimited(text, ',');
  CHECK(t.header == Tokens{"id", "text"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "a, \"quoted\"\r\nline");
  CHECK(t.rows[1] == Tokens{"2", "plain"});
  CHECK(t.line_numbers == std::vector<std::size_t>{2, 4});
}

TEST_CASE("read_delimited keeps ragged rows and rejects an unterminated quote") {
  auto t = read_delimited("a,b\n1\n1,2,3\n", ',');
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].size() == 1);
  CHECK(t.rows[1].size() == 3);
  try {
    read_delimited("a,b\n1,\"open\n", ',');
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
  }
}

TEST_CASE("detect_delimiter picks tab only from the first line") {
  CHECK(detect_delimiter("a\tb\n1\t2") == '\t');
  CHECK(detect_delimiter("a,b\n1\t2") == ',');
}

TEST_CASE("csv_escape round-trips through read_delimited") {
  const Tokens fields{"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  std::ostringstream os;
  os << "h1,h2,h3,h4,h5\n";
  write_csv_row(os, fields);
  auto t = read_delimited(os.str(), ',');
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0] == fields);
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
}
