// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

/*!
 * \file
 * \brief Per-task uncertainty and consensus: rank volatility, average ranking
 * volatility (ARV), Kemeny-Young consensus distance and consensus orderings.
 *
 * Two consensus distances are reported. kemeny_distance_tau is 1 - mean
 * pairwise tau and spans [0,2]. kemeny_distance_literal evaluates
 * 1 - (1/N_pairs) Σ_{i<j} (1 - |r_i - r_j|/(n-1)) on average ranks exactly as
 * written; note that it is 0 when all average ranks coincide.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankdiv/core.hpp"
#include "rankdiv/group.hpp"
#include "rankdiv/pairwise.hpp"

namespace rankdiv {

struct VolatilityEntry {
  ItemId item;
  std::vector<std::pair<ModelId, double>> ranks_observed;
  double variance;
  std::size_t support;
};

/// Population variance of the ranks item receives from the lists containing
/// it. With impute_missing, lists lacking it contribute rank k+1.
inline VolatilityEntry volatility(const ItemId& item, std::span<const RankedList* const> lists,
                                  bool impute_missing = false) {
  VolatilityEntry e{item, {}, 0.0, 0};
  std::vector<double> ranks;
  for (const auto* l : lists) {
    if (auto r = l->rank_of(item)) {
      ranks.push_back(static_cast<double>(*r));
      e.ranks_observed.emplace_back(l->model(), static_cast<double>(*r));
      ++e.support;
    } else if (impute_missing) {
      ranks.push_back(static_cast<double>(l->depth() + 1));
    }
  }
  if (e.support == 0) throw usage_error("item '" + item.str() + "' appears in no list");
  e.variance = detail::population_variance(ranks);
  return e;
}

inline std::vector<VolatilityEntry> volatility_table(std::span<const RankedList* const> lists,
                                                     bool impute_missing = false) {
  std::vector<VolatilityEntry> out;
  for (const auto& item : item_universe(lists, MissingPolicy::k_plus_1)) {
    out.push_back(volatility(item, lists, impute_missing));
  }
  return out;
}

struct ArvResult {
  std::optional<double> arv;  // nullopt when no item meets min_support
  std::size_t items = 0;
};

inline ArvResult arv(std::span<const VolatilityEntry> entries, std::size_t min_support = 2) {
  ArvResult r;
  double sum = 0.0;
  for (const auto& e : entries) {
    if (e.support < min_support) continue;
    sum += e.variance;
    ++r.items;
  }
  if (r.items > 0) r.arv = sum / static_cast<double>(r.items);
  return r;
}

inline ArvResult arv(std::span<const RankedList* const> lists, std::size_t min_support = 2,
                     bool impute_missing = false) {
  if (lists.size() < 2) throw usage_error("ARV needs at least 2 lists");
  const auto table = volatility_table(lists, impute_missing);
  return arv(table, min_support);
}

struct TauConsensus {
  std::optional<double> distance;  // 1 - tau_bar, in [0,2]
  std::optional<double> tau_bar;
  std::size_t defined_pairs = 0;
  std::size_t undefined_pairs = 0;
};

inline TauConsensus kemeny_distance_tau(std::span<const RankedList* const> lists) {
  if (lists.size() < 2) throw usage_error("consensus distance needs at least 2 lists");
  TauConsensus r;
  double sum = 0.0;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (std::size_t j = i + 1; j < lists.size(); ++j) {
      const auto t = kendall_tau(*lists[i], *lists[j]);
      if (t.tau) {
        sum += *t.tau;
        ++r.defined_pairs;
      } else {
        ++r.undefined_pairs;
      }
    }
  }
  if (r.defined_pairs > 0) {
    r.tau_bar = sum / static_cast<double>(r.defined_pairs);
    r.distance = 1.0 - *r.tau_bar;
  }
  return r;
}

/// The printed pairwise average-rank formula over n = avg_ranks.size() items.
inline double kemeny_distance_literal(std::span<const double> avg_ranks) {
  const auto n = avg_ranks.size();
  if (n < 2) throw usage_error("literal consensus distance needs at least 2 items");
  const double span = static_cast<double>(n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += 1.0 - std::abs(avg_ranks[i] - avg_ranks[j]) / span;
  }
  const double pairs = 0.5 * static_cast<double>(n) * span;
  return 1.0 - sum / pairs;
}

/// Mean rank of every universe item over the models that ranked it.
inline std::vector<std::pair<ItemId, double>> observed_mean_ranks(std::span<const RankedList* const> lists) {
  std::vector<std::pair<ItemId, double>> out;
  for (const auto& item : item_universe(lists, MissingPolicy::k_plus_1)) {
    double sum = 0.0;
    std::size_t c = 0;
    for (const auto* l : lists) {
      if (auto r = l->rank_of(item)) {
        sum += static_cast<double>(*r);
        ++c;
      }
    }
    out.emplace_back(item, sum / static_cast<double>(c));
  }
  return out;
}

inline double kemeny_distance_literal(std::span<const RankedList* const> lists) {
  std::vector<double> ranks;
  for (const auto& [item, r] : observed_mean_ranks(lists)) ranks.push_back(r);
  return kemeny_distance_literal(ranks);
}

/// Items ascending by mean rank over the completed rank table; ties by ItemId.
inline std::vector<ItemId> consensus_order_borda(std::span<const RankedList* const> lists,
                                                 MissingPolicy policy = MissingPolicy::k_plus_1) {
  const auto table = rank_table(lists, policy);
  const auto sums = table.column_sums();
  std::vector<std::size_t> idx(table.n());
  std::iota(idx.begin(), idx.end(), 0);
  // items are already in ItemId order, so a stable sort on sums breaks ties lexicographically
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sums[a] < sums[b]; });
  std::vector<ItemId> out;
  for (auto i : idx) out.push_back(table.items[i]);
  return out;
}

/// Σ over lists of pairs ordered oppositely by ranking and by the list.
/// Pairs where the list ranks neither or only one item do not count.
inline std::size_t kemeny_objective(std::span<const ItemId> ranking, std::span<const RankedList* const> lists) {
  std::size_t total = 0;
  for (const auto* l : lists) {
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      const auto ri = l->rank_of(ranking[i]);
      if (!ri) continue;
      for (std::size_t j = i + 1; j < ranking.size(); ++j) {
        const auto rj = l->rank_of(ranking[j]);
        if (rj && *rj < *ri) ++total;
      }
    }
  }
  return total;
}

struct KemenyResult {
  std::vector<ItemId> ranking;
  std::size_t total_disagreement = 0;
  double normalized = 0.0;  // total / (m · n(n-1)/2)
  bool unique = true;       // no other permutation attains the optimum
};

inline constexpr std::size_t kKemenyExactMaxItems = 8;

/// Exact Kemeny median of conjoint lists by branch and bound over prefix
/// placements. The lexicographically first optimal ranking is returned.
inline KemenyResult kemeny_exact(std::span<const RankedList* const> lists) {
  if (lists.empty()) throw usage_error("Kemeny solver needs at least 1 list");
  const auto items = item_universe(lists, MissingPolicy::k_plus_1);
  const auto n = items.size();
  if (n > kKemenyExactMaxItems) {
    throw usage_error("exact Kemeny refused: " + std::to_string(n) + " items exceeds the limit of " +
                      std::to_string(kKemenyExactMaxItems));
  }
  for (const auto* l : lists) {
    if (l->size() != n) throw usage_error("exact Kemeny requires conjoint lists (identical item sets)");
  }
  // before[i][j] = number of lists ranking item i ahead of item j
  std::vector<std::size_t> before(n * n, 0);
  for (const auto* l : lists) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && *l->rank_of(items[i]) < *l->rank_of(items[j])) ++before[i * n + j];
      }
    }
  }
  // lower bound for the unplaced set: each pair costs at least min(before[i][j], before[j][i])
  std::vector<std::size_t> pair_floor(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pair_floor[i * n + j] = std::min(before[i * n + j], before[j * n + i]);
  }

  std::vector<std::size_t> best;
  std::size_t best_cost = static_cast<std::size_t>(-1);
  std::size_t optimal_count = 0;
  std::vector<std::size_t> prefix;
  std::vector<bool> used(n, false);

  auto remaining_floor = [&]() {
    std::size_t lb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!used[j]) lb += pair_floor[i * n + j];
      }
    }
    return lb;
  };

  auto search = [&](auto&& self, std::size_t cost) -> void {
    if (prefix.size() == n) {
      if (cost < best_cost) {
        best_cost = cost;
        best = prefix;
        optimal_count = 1;
      } else if (cost == best_cost) {
        ++optimal_count;
      }
      return;
    }
    // keep ties reachable so uniqueness is decided exactly
    if (best_cost != static_cast<std::size_t>(-1) && cost + remaining_floor() > best_cost) return;
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      // placing c next: every other unplaced item that some list puts ahead of c disagrees
      std::size_t add = 0;
      for (std::size_t o = 0; o < n; ++o) {
        if (!used[o] && o != c) add += before[o * n + c];
      }
      used[c] = true;
      prefix.push_back(c);
      self(self, cost + add);
      prefix.pop_back();
      used[c] = false;
    }
  };
  search(search, 0);

  KemenyResult r;
  for (auto i : best) r.ranking.push_back(items[i]);
  r.total_disagreement = best_cost;
  const double max_pairs = static_cast<double>(lists.size()) * 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  r.normalized = n < 2 ? 0.0 : static_cast<double>(best_cost) / max_pairs;
  r.unique = optimal_count == 1;
  return r;
}

struct ConsensusOptions {
  std::size_t min_support = 2;
  bool impute_missing = false;
  MissingPolicy policy = MissingPolicy::k_plus_1;
};

struct ConsensusReport {
  TaskId task;
  std::vector<VolatilityEntry> entries;
  std::optional<double> arv;
  std::size_t arv_items = 0;
  std::optional<double> d_k_tau;
  std::optional<double> tau_bar;
  std::size_t tau_pairs = 0;
  std::size_t tau_undefined_pairs = 0;
  std::optional<double> d_k_literal;  // absent when the universe has < 2 items
  std::vector<ItemId> consensus_order;
};

inline ConsensusReport consensus_report(std::span<const RankedList* const> lists, const ConsensusOptions& opts = {}) {
  if (lists.size() < 2) throw usage_error("consensus report needs at least 2 lists");
  ConsensusReport rep{lists.front()->task(), {}, {}, 0, {}, {}, 0, 0, {}, {}};
  rep.entries = volatility_table(lists, opts.impute_missing);
  const auto a = arv(rep.entries, opts.min_support);
  rep.arv = a.arv;
  rep.arv_items = a.items;
  const auto t = kemeny_distance_tau(lists);
  rep.d_k_tau = t.distance;
  rep.tau_bar = t.tau_bar;
  rep.tau_pairs = t.defined_pairs;
  rep.tau_undefined_pairs = t.undefined_pairs;
  if (rep.entries.size() >= 2) rep.d_k_literal = kemeny_distance_literal(lists);
  rep.consensus_order = consensus_order_borda(lists, opts.policy);
  return rep;
}

}  // namespace rankdiv
