// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

/*!
 * \file
 * \brief One-way ANOVA, Kruskal-Wallis and Levene (Brown-Forsythe) tests
 * with analytic p-values and an optional seeded permutation mode.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "rankdiv/error.hpp"
#include "rankdiv/random.hpp"
#include "rankdiv/special.hpp"

namespace rankdiv::stats {

using Groups = std::span<const std::vector<double>>;

struct TestResult {
  std::string test;
  double statistic = 0.0;
  double df1 = 0.0;
  std::optional<double> df2;  // absent for chi-squared based tests
  double p_value = 1.0;
  std::vector<std::size_t> group_sizes;
  std::optional<std::size_t> permutations;  // set when p_value came from resampling
};

enum class Center { median, mean };

inline Center parse_center(std::string_view s) {
  if (s == "median") return Center::median;
  if (s == "mean") return Center::mean;
  throw usage_error("unknown Levene center '" + std::string(s) + "' (expected median|mean)");
}

namespace detail {

inline std::vector<std::size_t> sizes(Groups groups) {
  std::vector<std::size_t> out;
  for (const auto& g : groups) out.push_back(g.size());
  return out;
}

inline void require_groups(Groups groups, std::size_t min_size, const char* test) {
  if (groups.size() < 2) throw usage_error(std::string(test) + " needs at least 2 groups");
  for (const auto& g : groups) {
    if (g.size() < min_size) {
      throw usage_error(std::string(test) + " needs at least " + std::to_string(min_size) + " values per group");
    }
    for (double x : g) {
      if (!std::isfinite(x)) throw usage_error(std::string(test) + " received a non-finite value");
    }
  }
}

inline double mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

struct FParts {
  double ssb = 0.0;
  double ssw = 0.0;
  bool constant_groups = true;  // every group has zero spread
};

inline FParts f_parts(Groups groups) {
  FParts p;
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    total += std::accumulate(g.begin(), g.end(), 0.0);
    n += g.size();
  }
  const double grand = total / static_cast<double>(n);
  for (const auto& g : groups) {
    const double m = mean(g);
    p.ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) {
      p.ssw += (x - m) * (x - m);
      if (x != g.front()) p.constant_groups = false;
    }
  }
  return p;
}

// F without precondition checks; +inf when the within-group spread vanishes.
inline double f_statistic(Groups groups) {
  const auto p = f_parts(groups);
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  const double k = static_cast<double>(groups.size());
  if (p.constant_groups) return p.ssb > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return (p.ssb / (k - 1.0)) / (p.ssw / (static_cast<double>(n) - k));
}

inline std::vector<std::vector<double>> abs_deviations(Groups groups, Center center) {
  std::vector<std::vector<double>> out;
  for (const auto& g : groups) {
    const double c = center == Center::median ? median(g) : mean(g);
    std::vector<double> z;
    for (double x : g) z.push_back(std::abs(x - c));
    out.push_back(std::move(z));
  }
  return out;
}

struct KwParts {
  double h = 0.0;
  double tie_correction = 1.0;
};

inline KwParts kw_parts(Groups groups) {
  struct Obs {
    double value;
    std::size_t group;
  };
  std::vector<Obs> all;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (double x : groups[gi]) all.push_back({x, gi});
  }
  std::sort(all.begin(), all.end(), [](const Obs& a, const Obs& b) { return a.value < b.value; });
  const auto n = static_cast<double>(all.size());
  std::vector<double> rank_sums(groups.size(), 0.0);
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    const double t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    for (std::size_t q = i; q < j; ++q) rank_sums[all[q].group] += midrank;
    i = j;
  }
  KwParts p;
  p.tie_correction = 1.0 - tie_sum / (n * n * n - n);
  double acc = 0.0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    acc += rank_sums[gi] * rank_sums[gi] / static_cast<double>(groups[gi].size());
  }
  const double h = 12.0 / (n * (n + 1.0)) * acc - 3.0 * (n + 1.0);
  p.h = p.tie_correction > 0.0 ? std::max(0.0, h / p.tie_correction) : 0.0;
  return p;
}

}  // namespace detail

inline TestResult anova_oneway(Groups groups) {
  detail::require_groups(groups, 2, "ANOVA");
  const auto parts = detail::f_parts(groups);
  if (parts.constant_groups) throw degenerate_error("ANOVA: within-group variance is zero");
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  const double k = static_cast<double>(groups.size());
  const double df1 = k - 1.0;
  const double df2 = static_cast<double>(n) - k;
  const double f = (parts.ssb / df1) / (parts.ssw / df2);
  return TestResult{"anova", f, df1, df2, special::f_upper_tail(f, df1, df2), detail::sizes(groups), std::nullopt};
}

inline TestResult kruskal_wallis(Groups groups) {
  detail::require_groups(groups, 1, "Kruskal-Wallis");
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  if (n < 3) throw usage_error("Kruskal-Wallis needs at least 3 observations");
  const auto parts = detail::kw_parts(groups);
  if (!(parts.tie_correction > 0.0)) throw degenerate_error("Kruskal-Wallis: all values are identical");
  const double df = static_cast<double>(groups.size()) - 1.0;
  return TestResult{"kruskal_wallis", parts.h, df, std::nullopt, special::chi2_upper_tail(parts.h, df),
                    detail::sizes(groups), std::nullopt};
}

inline TestResult levene(Groups groups, Center center = Center::median) {
  detail::require_groups(groups, 2, "Levene");
  const auto z = detail::abs_deviations(groups, center);
  auto r = anova_oneway(z);
  r.test = center == Center::median ? "levene_median" : "levene_mean";
  r.group_sizes = detail::sizes(groups);
  return r;
}

enum class TestKind { anova, kruskal_wallis, levene };

inline const char* to_string(TestKind t) {
  switch (t) {
    case TestKind::anova: return "anova";
    case TestKind::kruskal_wallis: return "kruskal_wallis";
    case TestKind::levene: return "levene";
  }
  return "?";
}

inline TestResult run_test(TestKind kind, Groups groups, Center center = Center::median) {
  switch (kind) {
    case TestKind::anova: return anova_oneway(groups);
    case TestKind::kruskal_wallis: return kruskal_wallis(groups);
    case TestKind::levene: return levene(groups, center);
  }
  throw usage_error("unknown test");
}

/// Test statistic only, without precondition checks (used on permuted data).
inline double statistic(TestKind kind, Groups groups, Center center = Center::median) {
  switch (kind) {
    case TestKind::anova: return detail::f_statistic(groups);
    case TestKind::kruskal_wallis: return detail::kw_parts(groups).h;
    case TestKind::levene: return detail::f_statistic(detail::abs_deviations(groups, center));
  }
  return 0.0;
}

/// Replaces the analytic p-value of result with (1 + #{T* >= T}) / (1 + N)
/// over N label permutations. Resample i draws from Rng(seed).split(i), so
/// the answer does not depend on the thread count.
inline TestResult with_permutation_p(TestResult result, TestKind kind, Groups groups, std::size_t resamples,
                                     std::uint64_t seed, Center center = Center::median,
                                     unsigned threads = std::thread::hardware_concurrency()) {
  if (resamples == 0) throw usage_error("permutation mode needs at least 1 resample");
  std::vector<double> pooled;
  std::vector<std::size_t> sz;
  for (const auto& g : groups) {
    pooled.insert(pooled.end(), g.begin(), g.end());
    sz.push_back(g.size());
  }
  const double observed = result.statistic;
  // relative slack so resamples that tie the observed value up to roundoff count as >=
  const double threshold = observed - 1e-12 * std::max(1.0, std::abs(observed));
  const Rng root(seed);
  threads = std::max(1u, std::min<unsigned>(threads == 0 ? 1 : threads, 64));
  std::vector<std::size_t> hits(threads, 0);
  auto worker = [&](unsigned tid) {
    std::vector<double> buf(pooled.size());
    std::vector<std::vector<double>> parts(sz.size());
    for (std::size_t i = tid; i < resamples; i += threads) {
      buf = pooled;
      auto rng = root.split(i);
      rng.shuffle(std::span<double>(buf));
      std::size_t off = 0;
      for (std::size_t g = 0; g < sz.size(); ++g) {
        parts[g].assign(buf.begin() + static_cast<std::ptrdiff_t>(off),
                        buf.begin() + static_cast<std::ptrdiff_t>(off + sz[g]));
        off += sz[g];
      }
      if (statistic(kind, parts, center) >= threshold) ++hits[tid];
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& th : pool) th.join();
  const auto total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  result.p_value = (1.0 + static_cast<double>(total)) / (1.0 + static_cast<double>(resamples));
  result.permutations = resamples;
  return result;
}

}  // namespace rankdiv::stats
