// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

/*!
 * \file
 * \brief Reading raw per-model results, validating them into a BenchmarkRun
 * and flattening a run back into one consolidated table.
 *
 * Accepted inputs:
 *  - JSON: an object {"model", "task", "results": [{"rank", "api_name",
 *    "relevance", ...}]}, an array of such objects, or an array of flat rows
 *    {"model", "task", "rank", "api_name", "relevance"}.
 *  - CSV with header columns model,task,rank,api_name[,relevance] in any
 *    order; other columns are kept as extra attributes.
 *
 * Relevance is read as a percentage and stored as a fraction.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rankdiv/core.hpp"
#include "rankdiv/table.hpp"

namespace rankdiv {

struct RawRecord {
  std::string model;
  std::string task;
  std::int64_t rank = 0;
  std::string api_name;
  std::optional<double> relevance_percent;
  nlohmann::json extra = nlohmann::json::object();
  std::string location;  // where the record came from, for reports
};

enum class InputFormat { json, csv };

inline InputFormat parse_input_format(std::string_view s) {
  if (s == "json") return InputFormat::json;
  if (s == "csv") return InputFormat::csv;
  throw usage_error("unknown input format '" + std::string(s) + "' (expected json|csv)");
}

namespace detail {

inline std::size_t line_of(std::string_view content, std::size_t offset) {
  offset = std::min(offset, content.size());
  return 1 + static_cast<std::size_t>(std::count(content.begin(), content.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline Error parse_failure(const std::string& source, const std::string& what) {
  return Error(ErrorKind::parse, source + ": " + what);
}

inline std::string_view strip_bom(std::string_view s) {
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
  return s;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.back() == '%') s = trim(s.substr(0, s.size() - 1));
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key, const std::string& where,
                                           const std::string& source) {
  auto it = obj.find(key);
  if (it == obj.end()) throw parse_failure(source, where + ": missing field '" + key + "'");
  return *it;
}

inline std::string json_text(const nlohmann::json& v, const char* key, const std::string& where,
                             const std::string& source) {
  if (!v.is_string()) throw parse_failure(source, where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline std::int64_t json_rank(const nlohmann::json& v, const std::string& where, const std::string& source) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 1e15) return static_cast<std::int64_t>(d);
  }
  if (v.is_string()) {
    if (auto r = parse_int(v.get<std::string>())) return *r;
  }
  throw parse_failure(source, where + ".rank: expected an integer");
}

inline std::optional<double> json_relevance(const nlohmann::json& obj, const std::string& where,
                                            const std::string& source) {
  auto it = obj.find("relevance");
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) {
    if (it->get<std::string>().empty()) return std::nullopt;
    if (auto r = parse_real(it->get<std::string>())) return r;
  }
  throw parse_failure(source, where + ".relevance: expected a number");
}

inline RawRecord record_from_entry(const nlohmann::json& entry, std::string model, std::string task,
                                   const std::string& where, const std::string& source,
                                   std::initializer_list<const char*> consumed) {
  if (!entry.is_object()) throw parse_failure(source, where + ": expected an object");
  RawRecord r;
  r.model = std::move(model);
  r.task = std::move(task);
  r.rank = json_rank(require_field(entry, "rank", where, source), where, source);
  r.api_name = json_text(require_field(entry, "api_name", where, source), "api_name", where, source);
  r.relevance_percent = json_relevance(entry, where, source);
  for (const auto& [key, value] : entry.items()) {
    if (key == "rank" || key == "api_name" || key == "relevance") continue;
    if (std::find_if(consumed.begin(), consumed.end(), [&](const char* c) { return key == c; }) != consumed.end()) {
      continue;
    }
    r.extra[key] = value;
  }
  r.location = source + ":" + where;
  return r;
}

inline void parse_json_object(const nlohmann::json& obj, const std::string& where, const std::string& source,
                              std::vector<RawRecord>& out) {
  if (!obj.is_object()) throw parse_failure(source, where + ": expected an object");
  const auto model = json_text(require_field(obj, "model", where, source), "model", where, source);
  const auto task = json_text(require_field(obj, "task", where, source), "task", where, source);
  auto results = obj.find("results");
  if (results == obj.end()) {
    // flat row
    out.push_back(record_from_entry(obj, model, task, where, source, {"model", "task"}));
    return;
  }
  if (!results->is_array()) throw parse_failure(source, where + ".results: expected an array");
  for (std::size_t i = 0; i < results->size(); ++i) {
    out.push_back(
        record_from_entry((*results)[i], model, task, where + ".results[" + std::to_string(i) + "]", source, {}));
  }
}

inline std::vector<RawRecord> parse_json(std::string_view content, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content.begin(), content.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_failure(source, "malformed JSON at byte " + std::to_string(e.byte) + " (line " +
                                    std::to_string(line_of(content, e.byte)) + "): " + e.what());
  }
  std::vector<RawRecord> out;
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) parse_json_object(doc[i], "$[" + std::to_string(i) + "]", source, out);
  } else {
    parse_json_object(doc, "$", source, out);
  }
  return out;
}

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line;
};

/// RFC 4180 reader: quoted fields may hold commas, quotes ("") and newlines.
inline std::vector<CsvRow> read_csv(std::string_view s, const std::string& source) {
  std::vector<CsvRow> rows;
  CsvRow row{{}, 1};
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool any = false;
  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    if (!(row.fields.size() == 1 && row.fields[0].empty())) rows.push_back(std::move(row));
    row = CsvRow{{}, line};
    any = false;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (c == '"' && field.empty() && !any) {
      const std::size_t open = i;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '"') {
          if (i + 1 < s.size() && s[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (s[i] == '\n') ++line;
        field += s[i++];
      }
      if (!closed) {
        throw parse_failure(source, "unterminated quoted field starting at byte " + std::to_string(open) + " (line " +
                                        std::to_string(line_of(s, open)) + ")");
      }
      any = true;
      if (i < s.size() && s[i] != ',' && s[i] != '\n' && s[i] != '\r') {
        throw parse_failure(source, "unexpected character after closing quote at byte " + std::to_string(i) +
                                        " (line " + std::to_string(line) + ")");
      }
      continue;
    }
    if (c == ',') {
      end_field();
      any = false;
      ++i;
      continue;
    }
    if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') {
      ++i;
      continue;
    }
    if (c == '\n') {
      ++line;
      end_row();
      ++i;
      continue;
    }
    field += c;
    any = true;
    ++i;
  }
  if (!field.empty() || !row.fields.empty() || any) end_row();
  return rows;
}

inline std::vector<RawRecord> parse_csv(std::string_view content, const std::string& source) {
  const auto rows = read_csv(content, source);
  if (rows.empty()) throw parse_failure(source, "missing CSV header");
  const auto& header = rows.front().fields;
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(std::string(trim(header[i])), i);
  for (const char* required : {"model", "task", "rank", "api_name"}) {
    if (!col.contains(required)) throw parse_failure(source, std::string("CSV header lacks column '") + required + "'");
  }
  const std::optional<std::size_t> rel_col =
      col.contains("relevance") ? std::optional<std::size_t>(col.at("relevance")) : std::nullopt;
  std::vector<RawRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const auto where = "line " + std::to_string(rows[r].line);
    if (f.size() != header.size()) {
      throw parse_failure(source, where + ": expected " + std::to_string(header.size()) + " fields, found " +
                                      std::to_string(f.size()));
    }
    RawRecord rec;
    rec.model = f[col.at("model")];
    rec.task = f[col.at("task")];
    rec.api_name = f[col.at("api_name")];
    const auto rank = parse_int(f[col.at("rank")]);
    if (!rank) throw parse_failure(source, where + ": rank '" + f[col.at("rank")] + "' is not an integer");
    rec.rank = *rank;
    if (rel_col && !trim(f[*rel_col]).empty()) {
      rec.relevance_percent = parse_real(f[*rel_col]);
      if (!rec.relevance_percent) {
        throw parse_failure(source, where + ": relevance '" + f[*rel_col] + "' is not a finite number");
      }
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
      const auto name = std::string(trim(header[i]));
      if (name == "model" || name == "task" || name == "rank" || name == "api_name" || name == "relevance") continue;
      rec.extra[name] = f[i];
    }
    rec.location = source + ":" + where;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace detail

inline std::vector<RawRecord> parse_raw(std::string_view content, InputFormat format,
                                        const std::string& source = "<input>") {
  content = detail::strip_bom(content);
  return format == InputFormat::json ? detail::parse_json(content, source) : detail::parse_csv(content, source);
}

inline std::vector<RawRecord> parse_raw(std::string_view content, std::string_view format,
                                        const std::string& source = "<input>") {
  return parse_raw(content, parse_input_format(format), source);
}

// --- validation -------------------------------------------------------------

enum class Severity { warn, error };

struct ValidationIssue {
  Severity severity;
  std::string code;
  std::string location;
  std::string message;
  std::size_t dropped_records = 0;  // input records this issue removed from the output
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  std::size_t input_records = 0;
  std::size_t output_items = 0;

  void add(Severity s, std::string code, std::string location, std::string message, std::size_t dropped = 0) {
    issues.push_back({s, std::move(code), std::move(location), std::move(message), dropped});
  }

  std::map<std::string, std::size_t> counts() const {
    std::map<std::string, std::size_t> c;
    for (const auto& i : issues) ++c[i.code];
    return c;
  }

  std::size_t count(std::string_view code) const {
    return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [&](const auto& i) { return i.code == code; }));
  }

  bool has_errors() const {
    return std::any_of(issues.begin(), issues.end(), [](const auto& i) { return i.severity == Severity::error; });
  }

  std::size_t dropped_records() const {
    std::size_t n = 0;
    for (const auto& i : issues) n += i.dropped_records;
    return n;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["input_records"] = input_records;
    j["output_items"] = output_items;
    j["dropped_records"] = dropped_records();
    j["has_errors"] = has_errors();
    j["counts"] = nlohmann::ordered_json::object();
    for (const auto& [code, n] : counts()) j["counts"][code] = n;
    j["issues"] = nlohmann::ordered_json::array();
    for (const auto& i : issues) {
      j["issues"].push_back({{"severity", i.severity == Severity::warn ? "warn" : "error"},
                             {"code", i.code},
                             {"location", i.location},
                             {"message", i.message},
                             {"dropped_records", i.dropped_records}});
    }
    return j;
  }
};

namespace codes {
inline constexpr const char* dup_item = "DUP_ITEM";
inline constexpr const char* rank_gap = "RANK_GAP";
inline constexpr const char* rank_tie = "RANK_TIE";
inline constexpr const char* relevance_clamp = "RELEVANCE_CLAMP";
inline constexpr const char* truncated = "TRUNCATED";
inline constexpr const char* invalid_item = "INVALID_ITEM";
inline constexpr const char* invalid_label = "INVALID_LABEL";
inline constexpr const char* invalid_rank = "INVALID_RANK";
inline constexpr const char* no_records = "NO_RECORDS";
}  // namespace codes

enum class TiePolicy { error, file_order };

inline TiePolicy parse_tie_policy(std::string_view s) {
  if (s == "error") return TiePolicy::error;
  if (s == "order") return TiePolicy::file_order;
  throw usage_error("unknown tie policy '" + std::string(s) + "' (expected error|order)");
}

struct ValidateOptions {
  std::size_t k = 10;
  TiePolicy ties = TiePolicy::error;
};

/// Thrown when validation finds error-severity issues; carries the report.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(ValidationReport report)
      : Error(ErrorKind::validation, summary(report)), report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  static std::string summary(const ValidationReport& r) {
    for (const auto& i : r.issues) {
      if (i.severity == Severity::error) return "validation failed: " + i.location + ": " + i.message;
    }
    return "validation failed";
  }
  ValidationReport report_;
};

struct Validated {
  BenchmarkRun run;
  ValidationReport report;
};

/// Normalizes records into a BenchmarkRun. Per (model, task): canonicalize
/// names, drop duplicates keeping the lowest declared rank, order by declared
/// rank, renumber densely, clamp relevance to [0,100] and truncate to k.
/// Every mutation is a warn issue; error issues make the call throw
/// ValidationFailed.
inline Validated validate(const std::vector<RawRecord>& records, const ValidateOptions& opts = {}) {
  if (opts.k < 1) throw usage_error("validation depth k must be >= 1");
  ValidationReport report;
  report.input_records = records.size();
  if (records.empty()) {
    report.add(Severity::error, codes::no_records, "<input>", "no records to validate");
    throw ValidationFailed(std::move(report));
  }

  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) groups[{records[i].model, records[i].task}].push_back(i);

  struct Candidate {
    ItemId item;
    std::int64_t rank;
    std::size_t order;  // input order
    std::optional<double> relevance_percent;
    const RawRecord* rec;
  };

  std::vector<RankedList> lists;
  for (const auto& [key, idxs] : groups) {
    const auto where = "(" + key.first + ", " + key.second + ")";
    if (key.first.empty() || key.second.empty()) {
      report.add(Severity::error, codes::invalid_label, where, "model and task labels must be non-empty",
                 idxs.size());
      continue;
    }
    std::vector<Candidate> cands;
    bool group_ok = true;
    for (auto i : idxs) {
      const auto& r = records[i];
      if (r.rank < 1) {
        report.add(Severity::error, codes::invalid_rank, r.location, "rank " + std::to_string(r.rank) + " is not positive",
                   1);
        group_ok = false;
        continue;
      }
      try {
        cands.push_back({ItemId::canonicalize(r.api_name), r.rank, i, r.relevance_percent, &r});
      } catch (const Error&) {
        report.add(Severity::error, codes::invalid_item, r.location, "api_name is empty or whitespace-only", 1);
        group_ok = false;
      }
    }
    if (!group_ok) continue;

    // duplicates: keep the lowest declared rank, first in input order on equal ranks
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.rank, a.order) < std::tie(b.rank, b.order);
    });
    std::vector<Candidate> kept;
    std::map<ItemId, std::int64_t> kept_rank;
    for (auto& c : cands) {
      if (auto it = kept_rank.find(c.item); it != kept_rank.end()) {
        report.add(Severity::warn, codes::dup_item, c.rec->location,
                   "duplicate of '" + c.item.str() + "' (rank " + std::to_string(it->second) + ") dropped from rank " +
                       std::to_string(c.rank),
                   1);
        continue;
      }
      kept_rank.emplace(c.item, c.rank);
      kept.push_back(std::move(c));
    }

    // ties between distinct items
    std::string tied;
    for (std::size_t i = 1; i < kept.size(); ++i) {
      if (kept[i].rank != kept[i - 1].rank) continue;
      const auto msg = "rank " + std::to_string(kept[i].rank) + " declared for both '" + kept[i - 1].item.str() +
                       "' and '" + kept[i].item.str() + "'";
      if (opts.ties == TiePolicy::file_order) {
        report.add(Severity::warn, codes::rank_tie, where, msg + "; kept input order");
      } else {
        tied += (tied.empty() ? "" : "; ") + msg;
      }
    }
    if (!tied.empty()) {
      report.add(Severity::error, codes::rank_tie, where, "ambiguous ordering: " + tied, kept.size());
      continue;
    }

    std::vector<std::int64_t> declared;
    for (const auto& c : kept) {
      if (declared.empty() || declared.back() != c.rank) declared.push_back(c.rank);
    }
    bool gap = false;
    for (std::size_t i = 0; i < declared.size(); ++i) gap = gap || declared[i] != static_cast<std::int64_t>(i + 1);
    if (gap) {
      std::string text;
      for (auto r : declared) text += (text.empty() ? "" : ",") + std::to_string(r);
      report.add(Severity::warn, codes::rank_gap, where,
                 "declared ranks [" + text + "] renumbered 1.." + std::to_string(kept.size()));
    }

    if (kept.size() > opts.k) {
      const auto dropped = kept.size() - opts.k;
      report.add(Severity::warn, codes::truncated, where,
                 "list of " + std::to_string(kept.size()) + " items truncated to k=" + std::to_string(opts.k), dropped);
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(opts.k), kept.end());
    }

    std::vector<RankedEntry> entries;
    for (const auto& c : kept) {
      std::optional<double> rel;
      if (c.relevance_percent) {
        double pct = *c.relevance_percent;
        if (pct < 0.0 || pct > 100.0) {
          report.add(Severity::warn, codes::relevance_clamp, c.rec->location,
                     "relevance " + format_shortest(pct) + " clamped to [0,100]");
          pct = std::clamp(pct, 0.0, 100.0);
        }
        rel = pct / 100.0;
      }
      entries.push_back({c.item, rel});
    }
    lists.emplace_back(ModelId(key.first), TaskId(key.second), std::move(entries), opts.k);
  }

  if (report.has_errors()) throw ValidationFailed(std::move(report));
  BenchmarkRun run(std::move(lists));
  report.output_items = run.item_count();
  return Validated{std::move(run), std::move(report)};
}

// --- summarization ----------------------------------------------------------

struct SummaryRow {
  std::string model;
  std::string task;
  std::size_t rank;
  std::string item;
  std::optional<double> relevance;  // fraction
};

/// One row per ranked item, ordered by (task, model, rank).
inline std::vector<SummaryRow> summarize(const BenchmarkRun& run) {
  std::vector<SummaryRow> rows;
  for (const auto& task : run.tasks()) {
    for (const auto* l : run.lists_for_task(task)) {
      for (std::size_t i = 0; i < l->size(); ++i) {
        const auto& e = l->entries()[i];
        rows.push_back({l->model().str(), l->task().str(), i + 1, e.item.str(), e.relevance});
      }
    }
  }
  return rows;
}

/// Percentage text p with p/100 == fraction exactly, so a summary table
/// re-ingests to the identical run.
inline std::string relevance_percent_text(double fraction) {
  // some fractions have no percentage p with p / 100 == fraction; fall back to the closest
  double p = fraction * 100.0;
  double best = p;
  for (int step = 0; step < 64; ++step) {
    const double back = p / 100.0;
    if (back == fraction) return format_shortest(p);
    if (std::fabs(back - fraction) < std::fabs(best / 100.0 - fraction)) best = p;
    p = std::nextafter(p, (back < fraction) ? 1e308 : -1e308);
  }
  return format_shortest(best);
}

/// Summary in the ingest schema (relevance as a percentage).
inline Table summary_table(const BenchmarkRun& run) {
  Table t{{"model", "task", "rank", "api_name", "relevance"}, {}};
  for (const auto& r : summarize(run)) {
    Cell rel = r.relevance ? Cell::raw_number(relevance_percent_text(*r.relevance)) : Cell();
    t.add({r.model, r.task, r.rank, r.item, rel});
  }
  return t;
}

/// Serializes a run as the grouped JSON document ingest reads.
inline std::string run_to_json(const BenchmarkRun& run) {
  std::string out = "[";
  bool first = true;
  for (const auto& task : run.tasks()) {
    for (const auto* l : run.lists_for_task(task)) {
      out += first ? "\n" : ",\n";
      first = false;
      out += "  {\"model\": " + json_string(l->model().str()) + ", \"task\": " + json_string(l->task().str()) +
             ", \"results\": [";
      for (std::size_t i = 0; i < l->size(); ++i) {
        const auto& e = l->entries()[i];
        out += i ? ",\n    " : "\n    ";
        out += "{\"rank\": " + std::to_string(i + 1) + ", \"api_name\": " + json_string(e.item.str());
        if (e.relevance) out += ", \"relevance\": " + relevance_percent_text(*e.relevance);
        out += "}";
      }
      out += "\n  ]}";
    }
  }
  out += first ? "]\n" : "\n]\n";
  return out;
}

}  // namespace rankdiv
