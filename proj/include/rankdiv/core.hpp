// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

/*!
 * \file
 * \brief Domain types shared by every metric: canonical item identifiers,
 * model/task labels, ranked lists and the benchmark run that groups them.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rankdiv/error.hpp"

namespace rankdiv {

namespace detail {

constexpr bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

constexpr char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace detail

/// Canonical API identifier: lowercase, trimmed, internal whitespace runs
/// collapsed to one space. Punctuation and non-ASCII bytes are kept as-is.
class ItemId {
 public:
  /// Canonicalizes arbitrary text. Throws ErrorKind::invalid_item when the
  /// text is empty or whitespace-only.
  static ItemId canonicalize(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
      if (detail::is_space(c)) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(detail::ascii_lower(c));
    }
    if (out.empty()) throw Error(ErrorKind::invalid_item, "item identifier is empty or whitespace-only");
    return ItemId(std::move(out));
  }

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const ItemId&, const ItemId&) = default;
  friend auto operator<=>(const ItemId&, const ItemId&) = default;

 private:
  explicit ItemId(std::string value) : value_(std::move(value)) {}
  std::string value_;
};

inline ItemId canonicalize_item(std::string_view raw) { return ItemId::canonicalize(raw); }

/// Opaque non-empty text label; Tag keeps model and task labels apart.
template <typename Tag>
class Label {
 public:
  explicit Label(std::string value) : value_(std::move(value)) {
    if (value_.empty()) throw usage_error(std::string(Tag::kind) + " label must be non-empty");
  }

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;

 private:
  std::string value_;
};

struct ModelTag { static constexpr const char* kind = "model"; };
struct TaskTag { static constexpr const char* kind = "task"; };

using ModelId = Label<ModelTag>;
using TaskId = Label<TaskTag>;

struct RankedEntry {
  ItemId item;
  std::optional<double> relevance;  // fraction in [0,1]
};

/// One model's ordered, duplicate-free answer for one task. Position is rank.
class RankedList {
 public:
  RankedList(ModelId model, TaskId task, std::vector<RankedEntry> entries, std::size_t depth)
      : model_(std::move(model)), task_(std::move(task)), entries_(std::move(entries)), depth_(depth) {
    if (depth_ < 1) throw usage_error("list depth k must be >= 1");
    if (entries_.empty()) throw usage_error("ranked list for " + describe() + " is empty");
    if (entries_.size() > depth_) {
      throw usage_error("ranked list for " + describe() + " is longer than its depth " + std::to_string(depth_));
    }
    index_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (e.relevance && !(*e.relevance >= 0.0 && *e.relevance <= 1.0)) {
        throw usage_error("relevance outside [0,1] in " + describe());
      }
      if (!index_.emplace(e.item.str(), i + 1).second) {
        throw usage_error("duplicate item '" + e.item.str() + "' in " + describe());
      }
    }
  }

  /// Convenience constructor from raw names with no relevance.
  static RankedList from_names(std::string model, std::string task, std::initializer_list<std::string_view> names,
                               std::optional<std::size_t> depth = std::nullopt) {
    std::vector<RankedEntry> entries;
    for (auto n : names) entries.push_back({ItemId::canonicalize(n), std::nullopt});
    const auto k = depth.value_or(entries.size());
    return RankedList(ModelId(std::move(model)), TaskId(std::move(task)), std::move(entries), k);
  }

  const ModelId& model() const noexcept { return model_; }
  const TaskId& task() const noexcept { return task_; }
  const std::vector<RankedEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t depth() const noexcept { return depth_; }

  const ItemId& item_at(std::size_t rank) const { return entries_.at(rank - 1).item; }

  std::vector<ItemId> items() const {
    std::vector<ItemId> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.item);
    return out;
  }

  /// 1-based rank of item, or nullopt when absent.
  std::optional<std::size_t> rank_of(const ItemId& item) const {
    auto it = index_.find(item.str());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const ItemId& item) const { return index_.contains(item.str()); }

  friend bool operator==(const RankedList& a, const RankedList& b) {
    if (a.model_ != b.model_ || a.task_ != b.task_ || a.depth_ != b.depth_ || a.entries_.size() != b.entries_.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      if (a.entries_[i].item != b.entries_[i].item || a.entries_[i].relevance != b.entries_[i].relevance) return false;
    }
    return true;
  }

 private:
  std::string describe() const { return "(" + model_.str() + ", " + task_.str() + ")"; }

  ModelId model_;
  TaskId task_;
  std::vector<RankedEntry> entries_;
  std::size_t depth_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline std::optional<std::size_t> rank_of(const RankedList& list, const ItemId& item) { return list.rank_of(item); }

/// Every ranked list of a benchmark, keyed by (model, task). Models and tasks
/// are kept in lexicographic order so every derived output is deterministic.
class BenchmarkRun {
 public:
  explicit BenchmarkRun(std::vector<RankedList> lists) : lists_(std::move(lists)) {
    std::sort(lists_.begin(), lists_.end(), [](const RankedList& a, const RankedList& b) {
      return std::tie(a.model(), a.task()) < std::tie(b.model(), b.task());
    });
    for (std::size_t i = 0; i < lists_.size(); ++i) {
      const auto& l = lists_[i];
      if (i > 0 && lists_[i - 1].model() == l.model() && lists_[i - 1].task() == l.task()) {
        throw usage_error("more than one list for (" + l.model().str() + ", " + l.task().str() + ")");
      }
      index_.emplace(std::make_pair(l.model().str(), l.task().str()), i);
      if (std::find(models_.begin(), models_.end(), l.model()) == models_.end()) models_.push_back(l.model());
      if (std::find(tasks_.begin(), tasks_.end(), l.task()) == tasks_.end()) tasks_.push_back(l.task());
    }
    std::sort(models_.begin(), models_.end());
    std::sort(tasks_.begin(), tasks_.end());
  }

  const std::vector<RankedList>& lists() const noexcept { return lists_; }
  const std::vector<ModelId>& models() const noexcept { return models_; }
  const std::vector<TaskId>& tasks() const noexcept { return tasks_; }

  const RankedList* find(const ModelId& model, const TaskId& task) const {
    auto it = index_.find({model.str(), task.str()});
    return it == index_.end() ? nullptr : &lists_[it->second];
  }

  /// Lists for one task in model order.
  std::vector<const RankedList*> lists_for_task(const TaskId& task) const {
    std::vector<const RankedList*> out;
    for (const auto& m : models_) {
      if (const auto* l = find(m, task)) out.push_back(l);
    }
    return out;
  }

  std::size_t item_count() const {
    std::size_t n = 0;
    for (const auto& l : lists_) n += l.size();
    return n;
  }

  friend bool operator==(const BenchmarkRun& a, const BenchmarkRun& b) { return a.lists_ == b.lists_; }

 private:
  std::vector<RankedList> lists_;
  std::vector<ModelId> models_;
  std::vector<TaskId> tasks_;
  std::map<std::pair<std::string, std::string>, std::size_t> index_;
};

struct Range {
  double lo;
  double hi;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// A named metric value with its definitional range. Values outside the range
/// are kept and flagged, never clamped.
struct MetricValue {
  std::string name;
  double value;
  Range range;
  std::string provenance;
  bool out_of_range = false;

  static MetricValue make(std::string name, double value, Range range, std::string provenance) {
    const bool bad = !std::isfinite(value) || !range.contains(value);
    return MetricValue{std::move(name), value, range, std::move(provenance), bad};
  }
};

}  // namespace rankdiv

template <>
struct std::hash<rankdiv::ItemId> {
  std::size_t operator()(const rankdiv::ItemId& id) const noexcept { return std::hash<std::string>{}(id.str()); }
};
