// Copyright 2026 The segmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace segmap {

enum class ErrorKind {
  invalid_argument,
  io,
  parse,
  not_found,
  precondition,
  conflict,
};

/// Every failure raised by the core carries a kind so the C boundary can map
/// it onto a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace segmap
