// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

/*!
 * \file
 * \brief Similarity between two ranked lists (average overlap, Jaccard,
 * rank-biased overlap, Kendall's tau) and their aggregation over a run.
 *
 * Prefixes deeper than a list's length are the whole list; no phantom items
 * are padded in. Kendall's tau is the no-ties form restricted to the items
 * both lists share.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rankdiv/core.hpp"

namespace rankdiv {

namespace detail {

inline void require_depth(std::size_t k) {
  if (k < 1) throw usage_error("depth k must be >= 1");
}

inline void require_persistence(double p) {
  if (!(p > 0.0 && p < 1.0)) throw usage_error("RBO persistence p must lie in (0,1)");
}

/// Calls visit(d, |A_{1:d} ∩ B_{1:d}|) for d = 1..k.
template <typename Visit>
void for_each_prefix_overlap(std::span<const ItemId> a, std::span<const ItemId> b, std::size_t k, Visit&& visit) {
  std::unordered_set<ItemId> seen_a;
  std::unordered_set<ItemId> seen_b;
  std::size_t overlap = 0;
  for (std::size_t d = 1; d <= k; ++d) {
    if (d <= a.size()) {
      const auto& x = a[d - 1];
      seen_a.insert(x);
      if (seen_b.contains(x)) ++overlap;
    }
    if (d <= b.size()) {
      const auto& y = b[d - 1];
      seen_b.insert(y);
      if (seen_a.contains(y)) ++overlap;
    }
    visit(d, overlap);
  }
}

}  // namespace detail

/// Per-depth agreement |A_{1:d} ∩ B_{1:d}| / d for d = 1..k.
inline std::vector<double> ao_profile(std::span<const ItemId> a, std::span<const ItemId> b, std::size_t k) {
  detail::require_depth(k);
  std::vector<double> out;
  out.reserve(k);
  detail::for_each_prefix_overlap(a, b, k, [&](std::size_t d, std::size_t ov) {
    out.push_back(static_cast<double>(ov) / static_cast<double>(d));
  });
  return out;
}

inline double average_overlap(std::span<const ItemId> a, std::span<const ItemId> b, std::size_t k) {
  detail::require_depth(k);
  double sum = 0.0;
  detail::for_each_prefix_overlap(a, b, k, [&](std::size_t d, std::size_t ov) {
    sum += static_cast<double>(ov) / static_cast<double>(d);
  });
  return sum / static_cast<double>(k);
}

/// |A ∩ B| / |A ∪ B| over the top-k items. Two empty sets score 1.
inline double jaccard(std::span<const ItemId> a, std::span<const ItemId> b, std::size_t k) {
  detail::require_depth(k);
  a = a.first(std::min(k, a.size()));
  b = b.first(std::min(k, b.size()));
  std::unordered_set<ItemId> set_a(a.begin(), a.end());
  std::unordered_set<ItemId> set_b(b.begin(), b.end());
  std::size_t shared = 0;
  for (const auto& x : set_a) shared += set_b.contains(x) ? 1 : 0;
  const auto uni = set_a.size() + set_b.size() - shared;
  if (uni == 0) return 1.0;
  return static_cast<double>(shared) / static_cast<double>(uni);
}

/// Finite-depth RBO, (1-p) Σ p^{d-1} overlap(d)/d. Identical lists reach only 1 - p^k.
inline double rbo_truncated(std::span<const ItemId> a, std::span<const ItemId> b, double p, std::size_t k) {
  detail::require_persistence(p);
  detail::require_depth(k);
  double sum = 0.0;
  double weight = 1.0;
  detail::for_each_prefix_overlap(a, b, k, [&](std::size_t d, std::size_t ov) {
    sum += weight * static_cast<double>(ov) / static_cast<double>(d);
    weight *= p;
  });
  return (1.0 - p) * sum;
}

/// Truncated RBO plus the tail assuming depth-k agreement persists forever.
inline double rbo_extrapolated(std::span<const ItemId> a, std::span<const ItemId> b, double p, std::size_t k) {
  detail::require_persistence(p);
  detail::require_depth(k);
  double sum = 0.0;
  double weight = 1.0;
  double last = 0.0;
  detail::for_each_prefix_overlap(a, b, k, [&](std::size_t d, std::size_t ov) {
    last = static_cast<double>(ov) / static_cast<double>(d);
    sum += weight * last;
    weight *= p;
  });
  return (1.0 - p) * sum + weight * last;
}

struct TauResult {
  std::optional<double> tau;  // nullopt when support < 2
  std::size_t support = 0;
  std::size_t concordant = 0;
  std::size_t discordant = 0;
};

/// Kendall's tau-a over the shared items, each list's order restricted to them.
inline TauResult kendall_tau(std::span<const ItemId> a, std::span<const ItemId> b) {
  std::unordered_map<ItemId, std::size_t> pos_b;
  for (std::size_t i = 0; i < b.size(); ++i) pos_b.emplace(b[i], i);
  // positions in b of shared items, taken in a's order
  std::vector<std::size_t> seq;
  for (const auto& x : a) {
    if (auto it = pos_b.find(x); it != pos_b.end()) seq.push_back(it->second);
  }
  TauResult r;
  r.support = seq.size();
  if (r.support < 2) return r;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      (seq[i] < seq[j] ? r.concordant : r.discordant) += 1;
    }
  }
  const double s = static_cast<double>(r.support);
  r.tau = (static_cast<double>(r.concordant) - static_cast<double>(r.discordant)) / (0.5 * s * (s - 1.0));
  return r;
}

inline double average_overlap(const RankedList& a, const RankedList& b, std::size_t k) {
  return average_overlap(a.items(), b.items(), k);
}
inline std::vector<double> ao_profile(const RankedList& a, const RankedList& b, std::size_t k) {
  return ao_profile(a.items(), b.items(), k);
}
inline double jaccard(const RankedList& a, const RankedList& b, std::size_t k) { return jaccard(a.items(), b.items(), k); }
inline double rbo_truncated(const RankedList& a, const RankedList& b, double p, std::size_t k) {
  return rbo_truncated(a.items(), b.items(), p, k);
}
inline double rbo_extrapolated(const RankedList& a, const RankedList& b, double p, std::size_t k) {
  return rbo_extrapolated(a.items(), b.items(), p, k);
}
inline TauResult kendall_tau(const RankedList& a, const RankedList& b) { return kendall_tau(a.items(), b.items()); }

// --- run-level aggregation --------------------------------------------------

enum class Metric { ao, jaccard, rbo, tau };
enum class RboVariant { truncated, extrapolated };

inline constexpr Metric kAllMetrics[] = {Metric::ao, Metric::jaccard, Metric::rbo, Metric::tau};

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::ao: return "ao";
    case Metric::jaccard: return "jaccard";
    case Metric::rbo: return "rbo";
    case Metric::tau: return "tau";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "ao") return Metric::ao;
  if (name == "jaccard") return Metric::jaccard;
  if (name == "rbo") return Metric::rbo;
  if (name == "tau") return Metric::tau;
  throw usage_error("unknown metric '" + std::string(name) + "' (expected ao|jaccard|rbo|tau)");
}

inline RboVariant parse_rbo_variant(std::string_view name) {
  if (name == "trunc") return RboVariant::truncated;
  if (name == "extra") return RboVariant::extrapolated;
  throw usage_error("unknown RBO variant '" + std::string(name) + "' (expected trunc|extra)");
}

inline const char* to_string(RboVariant v) { return v == RboVariant::truncated ? "trunc" : "extra"; }

struct PairwiseParams {
  std::size_t k = 10;
  double rbo_p = 0.9;
  RboVariant rbo_variant = RboVariant::truncated;
};

struct PairwiseScores {
  ModelId model_a;
  ModelId model_b;
  TaskId task;
  double ao;
  double jaccard;
  double rbo;
  std::optional<double> tau;
  std::size_t tau_support;

  std::optional<double> get(Metric m) const {
    switch (m) {
      case Metric::ao: return ao;
      case Metric::jaccard: return jaccard;
      case Metric::rbo: return rbo;
      case Metric::tau: return tau;
    }
    return std::nullopt;
  }
};

inline PairwiseScores score_pair(const RankedList& a, const RankedList& b, const PairwiseParams& params) {
  const auto ia = a.items();
  const auto ib = b.items();
  const auto t = kendall_tau(ia, ib);
  const double rbo = params.rbo_variant == RboVariant::truncated ? rbo_truncated(ia, ib, params.rbo_p, params.k)
                                                                 : rbo_extrapolated(ia, ib, params.rbo_p, params.k);
  return PairwiseScores{a.model(), b.model(), a.task(),
                        average_overlap(ia, ib, params.k), jaccard(ia, ib, params.k), rbo, t.tau, t.support};
}

/// Unordered model pairs (i < j) in the run's model order.
inline std::vector<std::pair<ModelId, ModelId>> model_pairs(const BenchmarkRun& run) {
  std::vector<std::pair<ModelId, ModelId>> out;
  const auto& ms = run.models();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i + 1; j < ms.size(); ++j) out.emplace_back(ms[i], ms[j]);
  }
  return out;
}

/// Scores for every (pair, task) cell where both models answered, ordered by
/// pair then task.
inline std::vector<PairwiseScores> score_all_pairs(const BenchmarkRun& run, const PairwiseParams& params) {
  std::vector<PairwiseScores> out;
  for (const auto& [ma, mb] : model_pairs(run)) {
    for (const auto& t : run.tasks()) {
      const auto* la = run.find(ma, t);
      const auto* lb = run.find(mb, t);
      if (la && lb) out.push_back(score_pair(*la, *lb, params));
    }
  }
  return out;
}

inline double self_value(Metric m, const PairwiseParams& params) {
  if (m == Metric::rbo && params.rbo_variant == RboVariant::truncated) {
    return 1.0 - std::pow(params.rbo_p, static_cast<double>(params.k));
  }
  return 1.0;
}

/// Symmetric model × model matrix of per-pair task means.
struct PairwiseMatrix {
  Metric metric;
  std::vector<ModelId> models;
  std::vector<std::optional<double>> cells;      // row-major, models.size()^2
  std::vector<std::size_t> task_counts;          // tasks contributing per cell
  std::vector<std::size_t> undefined_counts;     // tasks excluded (undefined tau)

  std::size_t size() const { return models.size(); }
  std::optional<double> at(std::size_t i, std::size_t j) const { return cells[i * models.size() + j]; }
  std::size_t index_of(const ModelId& m) const {
    for (std::size_t i = 0; i < models.size(); ++i) {
      if (models[i] == m) return i;
    }
    throw usage_error("model '" + m.str() + "' not in matrix");
  }
};

inline PairwiseMatrix pairwise_matrix(const BenchmarkRun& run, Metric metric, const PairwiseParams& params,
                                      std::span<const PairwiseScores> scores) {
  if (run.models().size() < 2) throw usage_error("pairwise matrix needs at least 2 models");
  PairwiseMatrix mx{metric, run.models(), {}, {}, {}};
  const auto n = mx.size();
  mx.cells.assign(n * n, std::nullopt);
  mx.task_counts.assign(n * n, 0);
  mx.undefined_counts.assign(n * n, 0);
  std::vector<double> sums(n * n, 0.0);
  for (const auto& s : scores) {
    const auto i = mx.index_of(s.model_a);
    const auto j = mx.index_of(s.model_b);
    if (auto v = s.get(metric)) {
      sums[i * n + j] += *v;
      ++mx.task_counts[i * n + j];
    } else {
      ++mx.undefined_counts[i * n + j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    mx.cells[i * n + i] = self_value(metric, params);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto c = i * n + j;
      const auto cnt = mx.task_counts[c];
      std::optional<double> v;
      if (cnt > 0) v = sums[c] / static_cast<double>(cnt);
      mx.cells[c] = v;
      mx.cells[j * n + i] = v;
      mx.task_counts[j * n + i] = cnt;
      mx.undefined_counts[j * n + i] = mx.undefined_counts[c];
    }
  }
  return mx;
}

inline PairwiseMatrix pairwise_matrix(const BenchmarkRun& run, Metric metric, const PairwiseParams& params) {
  const auto scores = score_all_pairs(run, params);
  return pairwise_matrix(run, metric, params, scores);
}

}  // namespace rankdiv
