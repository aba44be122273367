// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

/*!
 * \file
 * \brief Everything the `report` command emits: reliability tiers, domain
 * composites, rank-depth curves and the tables behind each artifact.
 *
 * Builders return Tables; build_report assembles them into an ordered list of
 * (file name, content) pairs so that output is byte-identical for identical
 * inputs and options.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rankdiv/consensus.hpp"
#include "rankdiv/core.hpp"
#include "rankdiv/group.hpp"
#include "rankdiv/ingest.hpp"
#include "rankdiv/pairwise.hpp"
#include "rankdiv/stats.hpp"
#include "rankdiv/table.hpp"

namespace rankdiv {

// --- reliability tiers -------------------------------------------------------

enum class Tier { high, moderate, low };

inline const char* to_string(Tier t) {
  switch (t) {
    case Tier::high: return "high";
    case Tier::moderate: return "moderate";
    case Tier::low: return "low";
  }
  return "?";
}

inline constexpr double kHighAo = 0.53;
inline constexpr double kHighTau = 0.60;
inline constexpr double kLowAo = 0.46;
inline constexpr double kLowTau = 0.35;

/// high iff AO >= 0.53 and tau >= 0.60; low iff AO < 0.46 and tau < 0.35.
inline Tier tier_classify(double ao_mean, double tau_mean) {
  if (ao_mean >= kHighAo && tau_mean >= kHighTau) return Tier::high;
  if (ao_mean < kLowAo && tau_mean < kLowTau) return Tier::low;
  return Tier::moderate;
}

struct ReliabilityTier {
  ModelId model_a;
  ModelId model_b;
  std::optional<double> ao_mean;
  std::optional<double> tau_mean;
  std::optional<Tier> tier;  // absent when either mean is undefined
};

inline std::vector<ReliabilityTier> reliability_tiers(const PairwiseMatrix& ao, const PairwiseMatrix& tau) {
  std::vector<ReliabilityTier> out;
  for (std::size_t i = 0; i < ao.size(); ++i) {
    for (std::size_t j = i + 1; j < ao.size(); ++j) {
      ReliabilityTier t{ao.models[i], ao.models[j], ao.at(i, j), tau.at(i, j), std::nullopt};
      if (t.ao_mean && t.tau_mean) t.tier = tier_classify(*t.ao_mean, *t.tau_mean);
      out.push_back(std::move(t));
    }
  }
  return out;
}

// --- domain composites -------------------------------------------------------

struct DomainComposite {
  TaskId task;
  std::optional<double> ao;
  std::optional<double> jaccard;
  std::optional<double> rbo;
  std::optional<double> tau;
  std::optional<double> composite;  // ao + jaccard + rbo + tau, tau signed
};

inline std::vector<DomainComposite> domain_composites(const BenchmarkRun& run, std::span<const PairwiseScores> scores) {
  std::vector<DomainComposite> out;
  for (const auto& task : run.tasks()) {
    DomainComposite d{task, {}, {}, {}, {}, {}};
    std::optional<double>* slots[] = {&d.ao, &d.jaccard, &d.rbo, &d.tau};
    std::size_t mi = 0;
    for (Metric m : kAllMetrics) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& s : scores) {
        if (s.task != task) continue;
        if (auto v = s.get(m)) {
          sum += *v;
          ++n;
        }
      }
      if (n > 0) *slots[mi] = sum / static_cast<double>(n);
      ++mi;
    }
    if (d.ao && d.jaccard && d.rbo && d.tau) d.composite = *d.ao + *d.jaccard + *d.rbo + *d.tau;
    out.push_back(std::move(d));
  }
  return out;
}

// --- rank-depth curves -------------------------------------------------------

struct DepthCurves {
  std::vector<std::pair<ModelId, ModelId>> pairs;
  std::vector<std::vector<double>> per_pair;  // [pair][depth-1], mean over shared tasks
  std::vector<double> mean;                   // across pairs
  std::vector<double> sd;                     // population SD across pairs
};

inline DepthCurves ao_depth_curves(const BenchmarkRun& run, std::size_t k) {
  DepthCurves c;
  for (const auto& [ma, mb] : model_pairs(run)) {
    std::vector<double> acc(k, 0.0);
    std::size_t n = 0;
    for (const auto& t : run.tasks()) {
      const auto* la = run.find(ma, t);
      const auto* lb = run.find(mb, t);
      if (!la || !lb) continue;
      const auto prof = ao_profile(*la, *lb, k);
      for (std::size_t d = 0; d < k; ++d) acc[d] += prof[d];
      ++n;
    }
    if (n == 0) continue;
    for (auto& v : acc) v /= static_cast<double>(n);
    c.pairs.emplace_back(ma, mb);
    c.per_pair.push_back(std::move(acc));
  }
  c.mean.assign(k, 0.0);
  c.sd.assign(k, 0.0);
  if (c.per_pair.empty()) return c;
  const auto np = static_cast<double>(c.per_pair.size());
  for (std::size_t d = 0; d < k; ++d) {
    double s = 0.0;
    for (const auto& p : c.per_pair) s += p[d];
    c.mean[d] = s / np;
    double ss = 0.0;
    for (const auto& p : c.per_pair) ss += (p[d] - c.mean[d]) * (p[d] - c.mean[d]);
    c.sd[d] = std::sqrt(ss / np);
  }
  return c;
}

// --- significance tests on pairwise scores -----------------------------------

enum class StatsGrouping { pairs, tasks };

inline StatsGrouping parse_stats_grouping(std::string_view s) {
  if (s == "pairs") return StatsGrouping::pairs;
  if (s == "tasks") return StatsGrouping::tasks;
  throw usage_error("unknown grouping '" + std::string(s) + "' (expected pairs|tasks)");
}

struct StatsOptions {
  StatsGrouping grouping = StatsGrouping::pairs;
  stats::Center center = stats::Center::median;
  std::size_t permutations = 0;  // 0 = analytic p-values only
  std::uint64_t seed = 0;
};

struct StatsRow {
  Metric metric;
  stats::TestKind test;
  std::optional<stats::TestResult> result;
  std::string note;  // why result is absent
};

inline std::vector<std::vector<double>> metric_groups(std::span<const PairwiseScores> scores, Metric metric,
                                                      StatsGrouping grouping, std::vector<std::string>* labels = nullptr) {
  std::map<std::string, std::size_t> index;
  std::vector<std::string> order;
  std::vector<std::vector<double>> groups;
  for (const auto& s : scores) {
    const auto key = grouping == StatsGrouping::pairs ? s.model_a.str() + "-" + s.model_b.str() : s.task.str();
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) {
      groups.emplace_back();
      order.push_back(key);
    }
    if (auto v = s.get(metric)) groups[it->second].push_back(*v);
  }
  if (labels) *labels = order;
  return groups;
}

inline std::vector<StatsRow> significance_tests(std::span<const PairwiseScores> scores, const StatsOptions& opts) {
  std::vector<StatsRow> rows;
  for (Metric m : kAllMetrics) {
    const auto groups = metric_groups(scores, m, opts.grouping);
    for (auto kind : {stats::TestKind::anova, stats::TestKind::kruskal_wallis, stats::TestKind::levene}) {
      StatsRow row{m, kind, std::nullopt, ""};
      try {
        auto r = stats::run_test(kind, groups, opts.center);
        if (opts.permutations > 0) {
          r = stats::with_permutation_p(std::move(r), kind, groups, opts.permutations, opts.seed, opts.center);
        }
        row.result = std::move(r);
      } catch (const Error& e) {
        row.note = std::string(to_string(e.kind())) + ": " + e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// --- table builders ------------------------------------------------------------

inline std::string pair_label(const ModelId& a, const ModelId& b) { return a.str() + "-" + b.str(); }

inline Table pairwise_scores_table(std::span<const PairwiseScores> scores) {
  Table t{{"model_a", "model_b", "task", "ao", "jaccard", "rbo", "tau", "tau_support"}, {}};
  for (const auto& s : scores) {
    t.add({s.model_a.str(), s.model_b.str(), s.task.str(), s.ao, s.jaccard, s.rbo, s.tau, s.tau_support});
  }
  return t;
}

/// Reads the table written by pairwise_scores_table (CSV or JSON).
inline std::vector<PairwiseScores> read_pairwise_scores(std::string_view content, InputFormat format,
                                                        const std::string& source = "<scores>") {
  std::vector<std::map<std::string, std::string>> rows;
  if (format == InputFormat::csv) {
    const auto csv = detail::read_csv(detail::strip_bom(content), source);
    if (csv.empty()) throw detail::parse_failure(source, "missing CSV header");
    for (std::size_t r = 1; r < csv.size(); ++r) {
      if (csv[r].fields.size() != csv[0].fields.size()) {
        throw detail::parse_failure(source, "line " + std::to_string(csv[r].line) + ": wrong field count");
      }
      std::map<std::string, std::string> row;
      for (std::size_t i = 0; i < csv[0].fields.size(); ++i) row[csv[0].fields[i]] = csv[r].fields[i];
      rows.push_back(std::move(row));
    }
  } else {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(content.begin(), content.end());
    } catch (const nlohmann::json::parse_error& e) {
      throw detail::parse_failure(source, "malformed JSON at byte " + std::to_string(e.byte));
    }
    if (!doc.is_array()) throw detail::parse_failure(source, "expected an array of score rows");
    for (const auto& o : doc) {
      if (!o.is_object()) throw detail::parse_failure(source, "expected score row objects");
      std::map<std::string, std::string> row;
      for (const auto& [key, v] : o.items()) {
        row[key] = v.is_null() ? "" : v.is_string() ? v.get<std::string>() : v.dump();
      }
      rows.push_back(std::move(row));
    }
  }
  std::vector<PairwiseScores> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    const auto where = "row " + std::to_string(i + 1);
    for (const char* c : {"model_a", "model_b", "task", "ao", "jaccard", "rbo", "tau"}) {
      if (!row.contains(c)) throw detail::parse_failure(source, where + ": missing column '" + c + "'");
    }
    auto num = [&](const char* c) {
      auto v = detail::parse_real(row[c]);
      if (!v) throw detail::parse_failure(source, where + ": column '" + c + "' is not a number");
      return *v;
    };
    std::optional<double> tau;
    if (!detail::trim(row["tau"]).empty()) tau = num("tau");
    std::size_t support = 0;
    if (row.contains("tau_support") && !detail::trim(row["tau_support"]).empty()) {
      support = static_cast<std::size_t>(detail::parse_int(row["tau_support"]).value_or(0));
    }
    out.push_back({ModelId(row["model_a"]), ModelId(row["model_b"]), TaskId(row["task"]), num("ao"), num("jaccard"),
                   num("rbo"), tau, support});
  }
  return out;
}

inline Table matrix_table(const PairwiseMatrix& mx) {
  Table t{{"model"}, {}};
  for (const auto& m : mx.models) t.columns.push_back(m.str());
  for (std::size_t i = 0; i < mx.size(); ++i) {
    std::vector<Cell> row{mx.models[i].str()};
    for (std::size_t j = 0; j < mx.size(); ++j) row.emplace_back(mx.at(i, j));
    t.add(std::move(row));
  }
  return t;
}

/// Metric rows × model-pair columns of per-pair task means.
inline Table agreement_summary_table(std::span<const PairwiseMatrix> matrices) {
  Table t{{"metric"}, {}};
  if (matrices.empty()) return t;
  const auto& first = matrices.front();
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = i + 1; j < first.size(); ++j) t.columns.push_back(pair_label(first.models[i], first.models[j]));
  }
  t.columns.push_back("mean");
  for (const auto& mx : matrices) {
    std::vector<Cell> row{to_string(mx.metric)};
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
      for (std::size_t j = i + 1; j < mx.size(); ++j) {
        row.emplace_back(mx.at(i, j));
        if (auto v = mx.at(i, j)) {
          sum += *v;
          ++n;
        }
      }
    }
    row.emplace_back(n ? std::optional<double>(sum / static_cast<double>(n)) : std::nullopt);
    t.add(std::move(row));
  }
  return t;
}

inline Table heatmap_table(std::span<const PairwiseScores> scores) {
  Table t{{"model_a", "model_b", "task", "metric", "value"}, {}};
  for (const auto& s : scores) {
    for (Metric m : kAllMetrics) t.add({s.model_a.str(), s.model_b.str(), s.task.str(), to_string(m), s.get(m)});
  }
  return t;
}

inline Table depth_table(const DepthCurves& c) {
  Table t{{"depth"}, {}};
  for (const auto& [a, b] : c.pairs) t.columns.push_back(pair_label(a, b));
  t.columns.insert(t.columns.end(), {"mean", "sd", "lower", "upper"});
  for (std::size_t d = 0; d < c.mean.size(); ++d) {
    std::vector<Cell> row{d + 1};
    for (const auto& p : c.per_pair) row.emplace_back(p[d]);
    row.emplace_back(c.mean[d]);
    row.emplace_back(c.sd[d]);
    row.emplace_back(c.mean[d] - c.sd[d]);
    row.emplace_back(c.mean[d] + c.sd[d]);
    t.add(std::move(row));
  }
  return t;
}

inline Table group_table(const BenchmarkRun& run, MissingPolicy policy, ScoreMode mode) {
  Table t{{"task", "w", "alpha", "m", "n_items", "score_source", "policy", "note"}, {}};
  for (const auto& task : run.tasks()) {
    const auto lists = run.lists_for_task(task);
    if (lists.size() < 2) {
      t.add({task.str(), Cell(), Cell(), lists.size(), Cell(), Cell(), to_string(policy), "fewer than 2 lists"});
      continue;
    }
    try {
      const auto g = group_reliability(lists, policy, mode);
      std::string note;
      if (!g.w) note = "W undefined (all ranks tied)";
      if (g.w_out_of_range) note = "W outside [0,1]";
      if (!g.alpha) note += std::string(note.empty() ? "" : "; ") + "alpha undefined (constant totals)";
      t.add({task.str(), g.w, g.alpha, g.m, g.n_items, to_string(g.score_source), to_string(policy), note});
    } catch (const Error& e) {
      t.add({task.str(), Cell(), Cell(), lists.size(), Cell(), Cell(), to_string(policy), e.what()});
    }
  }
  return t;
}

inline std::vector<ConsensusReport> consensus_reports(const BenchmarkRun& run, const ConsensusOptions& opts) {
  std::vector<ConsensusReport> out;
  for (const auto& task : run.tasks()) {
    const auto lists = run.lists_for_task(task);
    if (lists.size() < 2) continue;
    ConsensusReport rep{task, {}, {}, 0, {}, {}, 0, 0, {}, {}};
    rep.entries = volatility_table(lists, opts.impute_missing);
    const auto a = arv(rep.entries, opts.min_support);
    rep.arv = a.arv;
    rep.arv_items = a.items;
    const auto tc = kemeny_distance_tau(lists);
    rep.d_k_tau = tc.distance;
    rep.tau_bar = tc.tau_bar;
    rep.tau_pairs = tc.defined_pairs;
    rep.tau_undefined_pairs = tc.undefined_pairs;
    const auto means = observed_mean_ranks(lists);
    if (means.size() >= 2) rep.d_k_literal = kemeny_distance_literal(lists);
    rep.consensus_order = consensus_order_borda(lists, opts.policy);
    out.push_back(std::move(rep));
  }
  return out;
}

inline Table consensus_table(std::span<const ConsensusReport> reports) {
  Table t{{"task", "arv", "arv_items", "d_k_tau", "tau_bar", "tau_pairs", "tau_undefined_pairs", "d_k_literal",
           "consensus_order"},
          {}};
  for (const auto& r : reports) {
    std::string order;
    for (const auto& i : r.consensus_order) order += (order.empty() ? "" : "|") + i.str();
    t.add({r.task.str(), r.arv, r.arv_items, r.d_k_tau, r.tau_bar, r.tau_pairs, r.tau_undefined_pairs, r.d_k_literal,
           order});
  }
  return t;
}

inline Table volatility_output_table(std::span<const ConsensusReport> reports) {
  Table t{{"task", "item", "support", "variance", "ranks"}, {}};
  for (const auto& r : reports) {
    for (const auto& e : r.entries) {
      std::string ranks;
      for (const auto& [m, rank] : e.ranks_observed) {
        ranks += (ranks.empty() ? "" : "|") + m.str() + ":" + std::to_string(static_cast<long long>(rank));
      }
      t.add({r.task.str(), e.item.str(), e.support, e.variance, ranks});
    }
  }
  return t;
}

inline Table tier_table(std::span<const ReliabilityTier> tiers) {
  Table t{{"model_a", "model_b", "ao_mean", "tau_mean", "tier"}, {}};
  for (const auto& r : tiers) {
    t.add({r.model_a.str(), r.model_b.str(), r.ao_mean, r.tau_mean, r.tier ? Cell(to_string(*r.tier)) : Cell()});
  }
  return t;
}

inline Table domain_table(std::span<const DomainComposite> domains) {
  Table t{{"task", "ao", "jaccard", "rbo", "tau", "composite"}, {}};
  std::optional<double> DomainComposite::*fields[] = {&DomainComposite::ao, &DomainComposite::jaccard,
                                                      &DomainComposite::rbo, &DomainComposite::tau,
                                                      &DomainComposite::composite};
  std::vector<Cell> avg{"average"};
  for (auto f : fields) {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& d : domains) {
      if (auto v = d.*f) {
        s += *v;
        ++n;
      }
    }
    avg.emplace_back(n ? std::optional<double>(s / static_cast<double>(n)) : std::nullopt);
  }
  t.add(std::move(avg));
  for (const auto& d : domains) t.add({d.task.str(), d.ao, d.jaccard, d.rbo, d.tau, d.composite});
  return t;
}

inline Table stats_table(std::span<const StatsRow> rows) {
  Table t{{"metric", "test", "statistic", "df1", "df2", "p_value", "permutations", "note"}, {}};
  for (const auto& r : rows) {
    if (!r.result) {
      t.add({to_string(r.metric), to_string(r.test), Cell(), Cell(), Cell(), Cell(), Cell(), r.note});
      continue;
    }
    const auto& x = *r.result;
    t.add({to_string(r.metric), x.test, x.statistic, x.df1, x.df2, x.p_value,
           x.permutations ? Cell(*x.permutations) : Cell(), r.note});
  }
  return t;
}

// --- the bundle ------------------------------------------------------------------

struct ReportOptions {
  PairwiseParams pairwise;
  MissingPolicy policy = MissingPolicy::k_plus_1;
  ScoreMode score_mode = ScoreMode::relevance;
  ConsensusOptions consensus;
  StatsOptions stats;
  OutputFormat format = OutputFormat::csv;
};

struct ReportBundle {
  std::vector<std::pair<std::string, std::string>> files;  // emission order
  std::vector<PairwiseScores> scores;
  std::vector<PairwiseMatrix> matrices;  // ao, jaccard, rbo, tau
  std::vector<ReliabilityTier> tiers;
  std::vector<DomainComposite> domains;
  std::vector<StatsRow> stats;

  const std::string* file(std::string_view name) const {
    for (const auto& [n, c] : files) {
      if (n == name) return &c;
    }
    return nullptr;
  }
};

inline nlohmann::ordered_json options_json(const ReportOptions& o) {
  nlohmann::ordered_json j;
  j["k"] = o.pairwise.k;
  j["rbo_p"] = format_fixed(o.pairwise.rbo_p);
  j["rbo_variant"] = to_string(o.pairwise.rbo_variant);
  j["missing_policy"] = to_string(o.policy);
  j["score_source"] = to_string(o.score_mode);
  j["min_support"] = o.consensus.min_support;
  j["impute_missing"] = o.consensus.impute_missing;
  j["stats_grouping"] = o.stats.grouping == StatsGrouping::pairs ? "pairs" : "tasks";
  j["levene_center"] = o.stats.center == stats::Center::median ? "median" : "mean";
  j["permutations"] = o.stats.permutations;
  j["seed"] = o.stats.seed;
  j["format"] = o.format == OutputFormat::csv ? "csv" : "json";
  return j;
}

inline ReportBundle build_report(const BenchmarkRun& run, const ReportOptions& opts) {
  if (run.models().size() < 2) throw usage_error("report needs at least 2 models");
  ReportBundle b;
  const auto ext = std::string(extension(opts.format));
  auto emit = [&](std::string name, const Table& t) { b.files.emplace_back(name + ext, render(t, opts.format)); };

  b.scores = score_all_pairs(run, opts.pairwise);
  for (Metric m : kAllMetrics) b.matrices.push_back(pairwise_matrix(run, m, opts.pairwise, b.scores));
  b.tiers = reliability_tiers(b.matrices[0], b.matrices[3]);
  b.domains = domain_composites(run, b.scores);
  b.stats = significance_tests(b.scores, opts.stats);
  const auto consensus = consensus_reports(run, opts.consensus);

  emit("summary", summary_table(run));
  emit("agreement_summary", agreement_summary_table(b.matrices));
  for (const auto& mx : b.matrices) emit(std::string("matrix_") + to_string(mx.metric), matrix_table(mx));
  emit("pairwise_scores", pairwise_scores_table(b.scores));
  emit("heatmap", heatmap_table(b.scores));
  emit("ao_depth", depth_table(ao_depth_curves(run, opts.pairwise.k)));
  emit("group", group_table(run, opts.policy, opts.score_mode));
  emit("volatility", volatility_output_table(consensus));
  emit("consensus", consensus_table(consensus));
  emit("tiers", tier_table(b.tiers));
  emit("domain_composite", domain_table(b.domains));
  emit("stats", stats_table(b.stats));
  return b;
}

}  // namespace rankdiv
