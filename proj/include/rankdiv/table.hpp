// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

/*!
 * \file
 * \brief Deterministic tabular output. Every report artifact is a Table that
 * renders to CSV or to a JSON array of row objects with identical cell text.
 */

#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rankdiv/error.hpp"

namespace rankdiv {

/// Fixed six-decimal rendering. printf rounds the exact binary value and
/// breaks exact ties to even; negative zero prints as 0.000000.
inline std::string format_fixed(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

/// Shortest text that parses back to exactly v.
inline std::string format_shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

enum class OutputFormat { csv, json };

inline OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw usage_error("unknown output format '" + std::string(s) + "' (expected csv|json)");
}

inline const char* extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".json"; }

/// A cell is text, an already-formatted number, or null (undefined value).
class Cell {
 public:
  Cell() = default;
  Cell(std::string text) : kind_(Kind::text), text_(std::move(text)) {}  // NOLINT
  Cell(const char* text) : kind_(Kind::text), text_(text) {}            // NOLINT
  Cell(double v) : kind_(Kind::number), text_(format_fixed(v)) {}       // NOLINT
  Cell(std::optional<double> v) {                                       // NOLINT
    if (v) *this = Cell(*v);
  }
  Cell(std::size_t v) : kind_(Kind::number), text_(std::to_string(v)) {}  // NOLINT
  Cell(int v) : kind_(Kind::number), text_(std::to_string(v)) {}          // NOLINT

  static Cell raw_number(std::string text) {
    Cell c;
    c.kind_ = Kind::number;
    c.text_ = std::move(text);
    return c;
  }

  bool is_null() const { return kind_ == Kind::null; }
  bool is_number() const { return kind_ == Kind::number; }
  const std::string& text() const { return text_; }

 private:
  enum class Kind { null, text, number };
  Kind kind_ = Kind::null;
  std::string text_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw usage_error("table row width does not match header");
    rows.push_back(std::move(row));
  }
};

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(t.columns[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (!row[i].is_null()) out += csv_escape(row[i].text());
    }
    out += '\n';
  }
  return out;
}

inline std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

/// JSON array of objects, one per row, one row per line. Numbers keep their
/// fixed textual form.
inline std::string to_json(const Table& t) {
  std::string out = "[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += r ? ",\n  {" : "\n  {";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (i) out += ", ";
      out += json_string(t.columns[i]);
      out += ": ";
      const auto& c = t.rows[r][i];
      if (c.is_null()) {
        out += "null";
      } else if (c.is_number() && c.text() != "nan" && c.text() != "inf" && c.text() != "-inf") {
        out += c.text();
      } else {
        out += json_string(c.text());
      }
    }
    out += "}";
  }
  out += t.rows.empty() ? "]\n" : "\n]\n";
  return out;
}

inline std::string render(const Table& t, OutputFormat f) { return f == OutputFormat::csv ? to_csv(t) : to_json(t); }

}  // namespace rankdiv
