// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "segmap/text.hpp"

#include <array>
#include <cctype>
#include <cstdint>

namespace segmap {
namespace {

// ASCII folding for U+00C0..U+017F. nullptr marks a separator (× and ÷).
constexpr std::array<const char*, 0x180 - 0xC0> kFold = {
    // U+00C0
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    // U+00D0
    "d", "n", "o", "o", "o", "o", "o", nullptr, "o", "u", "u", "u", "u", "y", "th", "ss",
    // U+00E0
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    // U+00F0
    "d", "n", "o", "o", "o", "o", "o", nullptr, "o", "u", "u", "u", "u", "y", "th", "y",
    // U+0100
    "a", "a", "a", "a", "a", "a", "c", "c", "c", "c", "c", "c", "c", "c", "d", "d",
    // U+0110
    "d", "d", "e", "e", "e", "e", "e", "e", "e", "e", "e", "e", "g", "g", "g", "g",
    // U+0120
    "g", "g", "g", "g", "h", "h", "h", "h", "i", "i", "i", "i", "i", "i", "i", "i",
    // U+0130
    "i", "i", "ij", "ij", "j", "j", "k", "k", "k", "l", "l", "l", "l", "l", "l", "l",
    // U+0140
    "l", "l", "l", "n", "n", "n", "n", "n", "n", "n", "n", "n", "o", "o", "o", "o",
    // U+0150
    "o", "o", "oe", "oe", "r", "r", "r", "r", "r", "r", "s", "s", "s", "s", "s", "s",
    // U+0160
    "s", "s", "t", "t", "t", "t", "t", "t", "u", "u", "u", "u", "u", "u", "u", "u",
    // U+0170
    "u", "u", "u", "u", "w", "w", "y", "y", "y", "z", "z", "z", "z", "z", "z", "s",
};

struct CodePoint {
  std::uint32_t value;
  std::size_t length;
};

// Malformed sequences decode byte-wise as Latin-1 so that nothing is lost.
CodePoint decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  auto cont = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  auto tail = [&](std::size_t k) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F);
  };
  if ((b0 & 0xE0) == 0xC0 && cont(1)) return {((b0 & 0x1Fu) << 6) | tail(1), 2};
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2))
    return {((b0 & 0x0Fu) << 12) | (tail(1) << 6) | tail(2), 3};
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3))
    return {((b0 & 0x07u) << 18) | (tail(1) << 12) | (tail(2) << 6) | tail(3), 4};
  return {b0, 1};
}

bool is_separator(std::uint32_t cp) {
  if (cp < 0x80) return !std::isalnum(static_cast<int>(cp));
  if (cp >= 0xA0 && cp <= 0xBF) return true;
  if (cp == 0xD7 || cp == 0xF7) return true;
  if (cp >= 0x2000 && cp <= 0x206F) return true;
  if (cp >= 0x3000 && cp <= 0x303F) return true;
  return cp == 0xFEFF;
}

// Appends the folded form of `cp` (given its raw bytes) to `out`.
void append_folded(std::string& out, std::uint32_t cp, std::string_view raw) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
  } else if (cp >= 0xC0 && cp < 0x180 && kFold[cp - 0xC0] != nullptr) {
    out += kFold[cp - 0xC0];
  } else {
    out.append(raw);
  }
}

}  // namespace

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_trimmed(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    auto piece = trim(s.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string fold_lower(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size();) {
    auto cp = decode(utf8, i);
    if (cp.value >= 0xC0 && cp.value < 0x180 && kFold[cp.value - 0xC0] == nullptr) {
      out.append(utf8.substr(i, cp.length));
    } else {
      append_folded(out, cp.value, utf8.substr(i, cp.length));
    }
    i += cp.length;
  }
  return out;
}

std::vector<std::string> tokenize_text(std::string_view utf8) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < utf8.size();) {
    auto cp = decode(utf8, i);
    if (is_separator(cp.value)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      append_folded(current, cp.value, utf8.substr(i, cp.length));
    }
    i += cp.length;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string normalize_label(std::string_view utf8) {
  return join(tokenize_text(utf8), " ");
}

}  // namespace segmap
