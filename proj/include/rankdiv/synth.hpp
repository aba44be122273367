// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

/*!
 * \file
 * \brief Synthetic multi-agent benchmark runs with controllable rank noise
 * and retrieval overlap.
 *
 * Each task draws a reference ranking of k items from its universe; every
 * model answers with a noisy copy: Poisson(theta * k) random adjacent
 * transpositions, then each position independently replaced (probability
 * rho) by a universe item outside the reference that is not yet used.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "rankdiv/core.hpp"
#include "rankdiv/random.hpp"

namespace rankdiv {

struct SynthConfig {
  std::size_t models = 5;
  std::size_t tasks = 15;
  std::size_t k = 10;
  std::size_t universe_size = 30;
  double swap_noise = 0.0;         // expected adjacent transpositions per item
  double substitution_rate = 0.0;  // per-position replacement probability
  std::uint64_t seed = 0;

  void check() const {
    if (models < 1) throw usage_error("synth: models must be >= 1");
    if (tasks < 1) throw usage_error("synth: tasks must be >= 1");
    if (k < 1) throw usage_error("synth: k must be >= 1");
    if (universe_size < k) throw usage_error("synth: universe_size must be >= k");
    if (!(swap_noise >= 0.0) || !std::isfinite(swap_noise)) throw usage_error("synth: swap noise must be >= 0");
    if (!(substitution_rate >= 0.0 && substitution_rate <= 1.0)) {
      throw usage_error("synth: substitution rate must lie in [0,1]");
    }
  }
};

/// Applies transposition noise then substitutions to reference.
inline std::vector<ItemId> noisy_ranking(std::span<const ItemId> reference, double swap_noise,
                                         double substitution_rate, std::span<const ItemId> universe, Rng& rng) {
  std::vector<ItemId> out(reference.begin(), reference.end());
  if (out.size() > 1) {
    const auto swaps = rng.poisson(swap_noise * static_cast<double>(out.size()));
    for (std::uint64_t s = 0; s < swaps; ++s) {
      const auto i = static_cast<std::size_t>(rng.below(out.size() - 1));
      std::swap(out[i], out[i + 1]);
    }
  }
  if (substitution_rate > 0.0) {
    std::unordered_set<ItemId> taken(reference.begin(), reference.end());
    std::vector<ItemId> pool;
    for (const auto& u : universe) {
      if (!taken.contains(u)) pool.push_back(u);
    }
    for (auto& slot : out) {
      if (!rng.bernoulli(substitution_rate)) continue;
      if (pool.empty()) throw usage_error("synth: universe too small for the requested substitutions");
      const auto j = static_cast<std::size_t>(rng.below(pool.size()));
      slot = pool[j];
      pool[j] = pool.back();
      pool.pop_back();
    }
  }
  return out;
}

inline RankedList noisy_ranking(const ModelId& model, const TaskId& task, std::span<const ItemId> reference,
                                double swap_noise, double substitution_rate, std::span<const ItemId> universe,
                                Rng& rng) {
  std::vector<RankedEntry> entries;
  for (auto& item : noisy_ranking(reference, swap_noise, substitution_rate, universe, rng)) {
    entries.push_back({std::move(item), std::nullopt});
  }
  const auto k = entries.size();
  return RankedList(model, task, std::move(entries), k);
}

namespace detail {

inline std::string numbered(const char* prefix, std::size_t i, std::size_t count) {
  const int width = static_cast<int>(std::to_string(count).size());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

}  // namespace detail

/// Task t draws from Rng(seed).split(t); model j of task t from that
/// stream's split(j + 1). Output depends only on the config.
inline BenchmarkRun synth_run(const SynthConfig& cfg) {
  cfg.check();
  const Rng root(cfg.seed);
  std::vector<RankedList> lists;
  for (std::size_t t = 0; t < cfg.tasks; ++t) {
    const TaskId task(detail::numbered("task-", t + 1, cfg.tasks));
    std::vector<ItemId> universe;
    for (std::size_t u = 0; u < cfg.universe_size; ++u) {
      universe.push_back(ItemId::canonicalize(task.str() + " api-" + detail::numbered("", u + 1, cfg.universe_size)));
    }
    auto task_rng = root.split(t);
    std::vector<ItemId> shuffled = universe;
    task_rng.shuffle(std::span<ItemId>(shuffled));
    const std::vector<ItemId> reference(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(cfg.k));
    for (std::size_t m = 0; m < cfg.models; ++m) {
      auto rng = task_rng.split(m + 1);
      lists.push_back(noisy_ranking(ModelId(detail::numbered("model-", m + 1, cfg.models)), task, reference,
                                    cfg.swap_noise, cfg.substitution_rate, universe, rng));
    }
  }
  return BenchmarkRun(std::move(lists));
}

}  // namespace rankdiv
