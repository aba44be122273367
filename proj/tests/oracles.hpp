// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Brute-force reference computations used only by the tests. Nothing here
// calls into the library's metric code; each routine recomputes its quantity
// directly from the definition.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>

#include "rankdiv/core.hpp"

namespace oracle {

using Names = std::vector<std::string>;

inline rankdiv::RankedList make_list(const std::string& model, const std::string& task, const Names& names,
                                     std::size_t depth = 0) {
  std::vector<rankdiv::RankedEntry> entries;
  for (const auto& n : names) entries.push_back({rankdiv::ItemId::canonicalize(n), std::nullopt});
  return rankdiv::RankedList(rankdiv::ModelId(model), rankdiv::TaskId(task), std::move(entries),
                             depth ? depth : names.size());
}

inline std::vector<rankdiv::ItemId> ids(const Names& names) {
  std::vector<rankdiv::ItemId> out;
  for (const auto& n : names) out.push_back(rankdiv::ItemId::canonicalize(n));
  return out;
}

inline std::set<std::string> prefix(const Names& xs, std::size_t d) {
  return std::set<std::string>(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(std::min(d, xs.size())));
}

inline double overlap_at(const Names& a, const Names& b, std::size_t d) {
  const auto pa = prefix(a, d);
  const auto pb = prefix(b, d);
  std::vector<std::string> inter;
  std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(inter));
  return static_cast<double>(inter.size()) / static_cast<double>(d);
}

inline double ao(const Names& a, const Names& b, std::size_t k) {
  double s = 0;
  for (std::size_t d = 1; d <= k; ++d) s += overlap_at(a, b, d);
  return s / static_cast<double>(k);
}

inline double rbo_trunc(const Names& a, const Names& b, double p, std::size_t k) {
  double s = 0;
  for (std::size_t d = 1; d <= k; ++d) s += std::pow(p, static_cast<double>(d - 1)) * overlap_at(a, b, d);
  return (1 - p) * s;
}

inline double rbo_extra(const Names& a, const Names& b, double p, std::size_t k) {
  return rbo_trunc(a, b, p, k) + std::pow(p, static_cast<double>(k)) * overlap_at(a, b, k);
}

inline double jaccard(const Names& a, const Names& b) {
  std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end()), u;
  std::vector<std::string> inter;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
  std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(u, u.begin()));
  return u.empty() ? 1.0 : static_cast<double>(inter.size()) / static_cast<double>(u.size());
}

/// tau over shared items by enumerating every unordered pair.
inline std::optional<double> tau(const Names& a, const Names& b) {
  auto pos = [](const Names& xs, const std::string& x) { return std::find(xs.begin(), xs.end(), x) - xs.begin(); };
  Names shared;
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) shared.push_back(x);
  }
  const auto s = shared.size();
  if (s < 2) return std::nullopt;
  long c = 0, d = 0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      const auto sa = (pos(a, shared[i]) - pos(a, shared[j])) > 0 ? 1 : -1;
      const auto sb = (pos(b, shared[i]) - pos(b, shared[j])) > 0 ? 1 : -1;
      (sa == sb ? c : d) += 1;
    }
  }
  return static_cast<double>(c - d) / (0.5 * static_cast<double>(s) * static_cast<double>(s - 1));
}

/// Kendall's W from its definition on complete rankings: ranks[model][item].
inline double kendall_w(const std::vector<std::vector<double>>& ranks) {
  const auto m = static_cast<double>(ranks.size());
  const auto n = ranks.front().size();
  std::vector<double> r(n, 0);
  for (const auto& row : ranks) {
    for (std::size_t i = 0; i < n; ++i) r[i] += row[i];
  }
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
  double s = 0;
  for (double x : r) s += (x - mean) * (x - mean);
  const double nn = static_cast<double>(n);
  return 12 * s / (m * m * (nn * nn * nn - nn));
}

/// Kendall distance (pair disagreements) between two orderings of the same items.
inline std::size_t kendall_distance(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<int, std::size_t> py;
  for (std::size_t i = 0; i < y.size(); ++i) py[y[i]] = i;
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) d += py[x[i]] > py[x[j]] ? 1 : 0;
  }
  return d;
}

struct KemenyScan {
  std::size_t best = 0;
  std::size_t optimal_count = 0;
};

/// Exhaustive scan of all n! orderings of items 0..n-1.
inline KemenyScan kemeny_scan(const std::vector<std::vector<int>>& rankings) {
  std::vector<int> perm(rankings.front().size());
  std::iota(perm.begin(), perm.end(), 0);
  KemenyScan out{static_cast<std::size_t>(-1), 0};
  do {
    std::size_t cost = 0;
    for (const auto& r : rankings) cost += kendall_distance(perm, r);
    if (cost < out.best) {
      out.best = cost;
      out.optimal_count = 1;
    } else if (cost == out.best) {
      ++out.optimal_count;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// True when the strict majority relation among items is a complete,
/// transitive order (every pair has a strict majority and there is no cycle).
inline bool majority_acyclic(const std::vector<std::vector<int>>& rankings) {
  const auto n = rankings.front().size();
  std::vector<std::vector<int>> wins(n, std::vector<int>(n, 0));
  for (const auto& r : rankings) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) ++wins[static_cast<std::size_t>(r[i])][static_cast<std::size_t>(r[j])];
    }
  }
  std::vector<int> score(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (wins[i][j] == wins[j][i]) return false;
      if (wins[i][j] > wins[j][i]) ++score[i];
    }
  }
  // a tournament is transitive iff its out-degrees are exactly 0..n-1
  std::sort(score.begin(), score.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (score[i] != static_cast<int>(i)) return false;
  }
  return true;
}

// --- statistics ---------------------------------------------------------------

struct Ref {
  double statistic;
  double p;
};

inline Ref anova(const std::vector<std::vector<double>>& g) {
  std::vector<double> all;
  for (const auto& x : g) all.insert(all.end(), x.begin(), x.end());
  const double grand = std::accumulate(all.begin(), all.end(), 0.0) / static_cast<double>(all.size());
  double sst = 0;
  for (double x : all) sst += (x - grand) * (x - grand);
  double ssw = 0;
  for (const auto& x : g) {
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    for (double v : x) ssw += (v - m) * (v - m);
  }
  const double ssb = sst - ssw;
  const double k = static_cast<double>(g.size());
  const double n = static_cast<double>(all.size());
  const double f = (ssb / (k - 1)) / (ssw / (n - k));
  boost::math::fisher_f dist(k - 1, n - k);
  return {f, boost::math::cdf(boost::math::complement(dist, f))};
}

/// H = (N-1) Σ n_j (r̄_j - r̄)² / Σ (r_ij - r̄)², which carries the tie
/// correction implicitly. Ranks by counting.
inline Ref kruskal(const std::vector<std::vector<double>>& g) {
  std::vector<double> all;
  for (const auto& x : g) all.insert(all.end(), x.begin(), x.end());
  auto rank = [&](double v) {
    double less = 0, equal = 0;
    for (double w : all) {
      less += w < v ? 1 : 0;
      equal += w == v ? 1 : 0;
    }
    return less + (equal + 1) / 2;
  };
  const double n = static_cast<double>(all.size());
  const double rbar = (n + 1) / 2;
  double num = 0, den = 0;
  for (const auto& x : g) {
    double s = 0;
    for (double v : x) {
      const double r = rank(v);
      s += r;
      den += (r - rbar) * (r - rbar);
    }
    const double mj = s / static_cast<double>(x.size());
    num += static_cast<double>(x.size()) * (mj - rbar) * (mj - rbar);
  }
  const double h = (n - 1) * num / den;
  boost::math::chi_squared dist(static_cast<double>(g.size()) - 1);
  return {h, boost::math::cdf(boost::math::complement(dist, h))};
}

inline Ref levene(const std::vector<std::vector<double>>& g, bool median) {
  std::vector<std::vector<double>> z;
  for (auto x : g) {
    double c;
    if (median) {
      std::sort(x.begin(), x.end());
      const auto n = x.size();
      c = n % 2 ? x[n / 2] : (x[n / 2 - 1] + x[n / 2]) / 2;
    } else {
      c = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    }
    std::vector<double> d;
    for (double v : x) d.push_back(std::fabs(v - c));
    z.push_back(d);
  }
  return anova(z);
}

/// Random groups of small integers (so ties occur) or reals.
inline std::vector<std::vector<double>> random_groups(std::mt19937_64& gen, bool integers) {
  std::uniform_int_distribution<int> ngroups(2, 5), size(3, 8), small(0, 9);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> g(static_cast<std::size_t>(ngroups(gen)));
  for (auto& x : g) {
    const int n = size(gen);
    const double shift = normal(gen) * 0.5;
    for (int i = 0; i < n; ++i) x.push_back(integers ? small(gen) : normal(gen) + shift);
  }
  return g;
}

}  // namespace oracle
