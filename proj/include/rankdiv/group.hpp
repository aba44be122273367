// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

/*!
 * \file
 * \brief Group reliability across all models for one task: Kendall's W and
 * Cronbach's alpha.
 *
 * Both statistics need every model to score every item. Lists rarely share
 * the same items, so a missing-item policy completes the table first:
 *
 *  - k_plus_1: the universe is the union of all items; an item a model did
 *    not return gets rank k+1 (all such items tied). W then uses the
 *    tie-corrected denominator.
 *  - intersection: the universe is the items every model returned; each
 *    model's ranks are re-numbered 1..n over that universe.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankdiv/core.hpp"

namespace rankdiv {

enum class MissingPolicy { k_plus_1, intersection };

inline MissingPolicy parse_missing_policy(std::string_view s) {
  if (s == "kplus1" || s == "k_plus_1") return MissingPolicy::k_plus_1;
  if (s == "intersection") return MissingPolicy::intersection;
  throw usage_error("unknown missing-item policy '" + std::string(s) + "' (expected kplus1|intersection)");
}

inline const char* to_string(MissingPolicy p) { return p == MissingPolicy::k_plus_1 ? "kplus1" : "intersection"; }

/// m × n table of ranks (rows = models, columns = universe items).
struct RankTable {
  MissingPolicy policy;
  std::vector<ModelId> models;
  std::vector<ItemId> items;
  std::vector<double> ranks;         // row-major m × n
  std::vector<double> tie_terms;     // per model Σ(t³ - t) over tie groups

  std::size_t m() const { return models.size(); }
  std::size_t n() const { return items.size(); }
  double at(std::size_t model, std::size_t item) const { return ranks[model * items.size() + item]; }

  std::vector<double> column_sums() const {
    std::vector<double> sums(n(), 0.0);
    for (std::size_t i = 0; i < m(); ++i) {
      for (std::size_t j = 0; j < n(); ++j) sums[j] += at(i, j);
    }
    return sums;
  }
};

/// Union (or intersection) of the items in lists, in canonical order.
inline std::vector<ItemId> item_universe(std::span<const RankedList* const> lists, MissingPolicy policy) {
  std::map<ItemId, std::size_t> counts;
  for (const auto* l : lists) {
    for (const auto& e : l->entries()) ++counts[e.item];
  }
  std::vector<ItemId> out;
  for (const auto& [item, c] : counts) {
    if (policy == MissingPolicy::k_plus_1 || c == lists.size()) out.push_back(item);
  }
  return out;
}

inline RankTable rank_table(std::span<const RankedList* const> lists, MissingPolicy policy = MissingPolicy::k_plus_1) {
  if (lists.size() < 2) throw usage_error("rank table needs at least 2 lists");
  RankTable t{policy, {}, item_universe(lists, policy), {}, {}};
  const auto n = t.items.size();
  t.ranks.reserve(lists.size() * n);
  for (const auto* l : lists) {
    t.models.push_back(l->model());
    if (policy == MissingPolicy::k_plus_1) {
      std::size_t missing = 0;
      const auto fill = static_cast<double>(l->depth() + 1);
      for (const auto& item : t.items) {
        if (auto r = l->rank_of(item)) {
          t.ranks.push_back(static_cast<double>(*r));
        } else {
          t.ranks.push_back(fill);
          ++missing;
        }
      }
      const auto tm = static_cast<double>(missing);
      t.tie_terms.push_back(missing > 1 ? tm * tm * tm - tm : 0.0);
    } else {
      // relative order among the shared items, renumbered 1..n
      std::vector<std::pair<std::size_t, std::size_t>> order;  // (original rank, column)
      for (std::size_t j = 0; j < n; ++j) order.emplace_back(*l->rank_of(t.items[j]), j);
      std::sort(order.begin(), order.end());
      std::vector<double> row(n);
      for (std::size_t r = 0; r < n; ++r) row[order[r].second] = static_cast<double>(r + 1);
      t.ranks.insert(t.ranks.end(), row.begin(), row.end());
      t.tie_terms.push_back(0.0);
    }
  }
  return t;
}

struct KendallW {
  std::optional<double> w;  // nullopt when the (tie-corrected) denominator vanishes
  std::size_t m = 0;
  std::size_t n = 0;
  double s = 0.0;  // Σ (R_i - R̄)²
};

/// W = 12 S / (m²(n³ - n) - m ΣT) on a completed rank table.
inline KendallW kendall_w(const RankTable& t) {
  const auto m = static_cast<double>(t.m());
  const auto n = static_cast<double>(t.n());
  if (t.n() < 2) throw usage_error("Kendall's W needs at least 2 items in the universe");
  const auto sums = t.column_sums();
  double mean = 0.0;
  for (double r : sums) mean += r;
  mean /= n;
  double s = 0.0;
  for (double r : sums) s += (r - mean) * (r - mean);
  double ties = 0.0;
  for (double tt : t.tie_terms) ties += tt;
  const double denom = m * m * (n * n * n - n) - m * ties;
  KendallW out{std::nullopt, t.m(), t.n(), s};
  if (denom > 0.0) out.w = 12.0 * s / denom;
  return out;
}

inline KendallW kendall_w(std::span<const RankedList* const> lists, MissingPolicy policy = MissingPolicy::k_plus_1) {
  return kendall_w(rank_table(lists, policy));
}

enum class ScoreMode { relevance, rank_derived };

inline ScoreMode parse_score_mode(std::string_view s) {
  if (s == "relevance") return ScoreMode::relevance;
  if (s == "rank" || s == "rank_derived") return ScoreMode::rank_derived;
  throw usage_error("unknown score source '" + std::string(s) + "' (expected relevance|rank)");
}

inline const char* to_string(ScoreMode s) { return s == ScoreMode::relevance ? "relevance" : "rank_derived"; }

/// Per-item scores of one list over a universe: relevance when present (and
/// mode allows), else (k+1-rank)/k when ranked, else 0.
inline std::vector<double> score_vector(const RankedList& list, std::span<const ItemId> universe,
                                        ScoreMode mode = ScoreMode::relevance, bool* used_relevance = nullptr) {
  const auto k = static_cast<double>(list.depth());
  std::vector<double> out;
  out.reserve(universe.size());
  for (const auto& item : universe) {
    const auto r = list.rank_of(item);
    if (!r) {
      out.push_back(0.0);
      continue;
    }
    const auto& rel = list.entries()[*r - 1].relevance;
    if (mode == ScoreMode::relevance && rel) {
      out.push_back(*rel);
      if (used_relevance) *used_relevance = true;
    } else {
      out.push_back((k + 1.0 - static_cast<double>(*r)) / k);
    }
  }
  return out;
}

namespace detail {

inline double population_variance(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size());
}

}  // namespace detail

/// Cronbach's alpha over raters (outer) scoring the same items (inner), with
/// population variances. nullopt when the total-score variance is zero.
inline std::optional<double> cronbach_alpha(std::span<const std::vector<double>> raters) {
  if (raters.size() < 2) throw usage_error("Cronbach's alpha needs at least 2 raters");
  const auto n = raters.front().size();
  for (const auto& r : raters) {
    if (r.size() != n) throw usage_error("Cronbach's alpha: raters scored different item counts");
  }
  std::vector<double> totals(n, 0.0);
  double item_var_sum = 0.0;
  for (const auto& r : raters) {
    item_var_sum += detail::population_variance(r);
    for (std::size_t j = 0; j < n; ++j) totals[j] += r[j];
  }
  const double total_var = detail::population_variance(totals);
  if (!(total_var > 0.0)) return std::nullopt;
  const auto k = static_cast<double>(raters.size());
  return k / (k - 1.0) * (1.0 - item_var_sum / total_var);
}

struct GroupReliability {
  TaskId task;
  std::optional<double> w;
  std::optional<double> alpha;
  std::size_t m;
  std::size_t n_items;
  ScoreMode score_source;
  bool w_out_of_range = false;
};

inline GroupReliability group_reliability(std::span<const RankedList* const> lists,
                                          MissingPolicy policy = MissingPolicy::k_plus_1,
                                          ScoreMode mode = ScoreMode::relevance) {
  const auto table = rank_table(lists, policy);
  const auto kw = kendall_w(table);
  std::vector<std::vector<double>> scores;
  bool used_relevance = false;
  for (const auto* l : lists) scores.push_back(score_vector(*l, table.items, mode, &used_relevance));
  GroupReliability g{lists.front()->task(), kw.w, cronbach_alpha(scores), table.m(), table.n(),
                     used_relevance ? ScoreMode::relevance : ScoreMode::rank_derived};
  g.w_out_of_range = kw.w && !(*kw.w >= 0.0 && *kw.w <= 1.0);
  return g;
}

}  // namespace rankdiv
