// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rankdiv {

enum class ErrorKind {
  invalid_item,
  usage,
  parse,
  validation,
  degenerate,
  io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_item: return "invalid-item";
    case ErrorKind::usage: return "usage";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Base exception for every failure raised by the library. The kind decides
/// the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error usage_error(const std::string& what) { return Error(ErrorKind::usage, what); }
inline Error degenerate_error(const std::string& what) { return Error(ErrorKind::degenerate, what); }

}  // namespace rankdiv
