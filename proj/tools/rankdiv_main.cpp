// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

// rankdiv: command-line front end for the agreement/divergence metrics.
//
// Exit codes: 0 success, 1 validation (or data) errors, 2 usage error,
// 3 I/O error.

#include <openssl/evp.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rankdiv/rankdiv.hpp"

namespace fs = std::filesystem;
using namespace rankdiv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

constexpr const char* kVersion = "1.0.0";

struct GlobalFlags {
  std::size_t k = 10;
  double rbo_p = 0.9;
  std::string rbo_variant = "trunc";
  std::string missing_policy = "kplus1";
  std::string score_source = "relevance";
  std::size_t min_support = 2;
  bool impute_missing = false;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format = "csv";
  std::string input_format = "auto";
  std::string ties = "error";
  bool manifest = false;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + p.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::io, "failed reading '" + p.string() + "'");
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory '" + p.parent_path().string() + "': " + ec.message());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + p.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorKind::io, "failed writing '" + p.string() + "'");
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::io, "SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

/// Expands directories to their *.json / *.csv files, sorted by path.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p(in);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p, ec)) {
        const auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".json" || ext == ".csv")) found.push_back(e.path());
      }
      if (ec) throw Error(ErrorKind::io, "cannot list directory '" + in + "': " + ec.message());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p, ec)) {
      out.push_back(p);
    } else {
      throw Error(ErrorKind::io, "input '" + in + "' does not exist");
    }
  }
  if (out.empty()) throw usage_error("no input files");
  return out;
}

InputFormat format_for(const fs::path& p, const std::string& flag) {
  if (flag != "auto") return parse_input_format(flag);
  const auto ext = p.extension().string();
  if (ext == ".json") return InputFormat::json;
  if (ext == ".csv") return InputFormat::csv;
  throw usage_error("cannot infer format of '" + p.string() + "'; pass --input-format json|csv");
}

struct Loaded {
  std::vector<RawRecord> records;
  nlohmann::ordered_json digests = nlohmann::ordered_json::array();
};

Loaded load_records(const std::vector<std::string>& inputs, const GlobalFlags& g) {
  Loaded l;
  for (const auto& p : expand_inputs(inputs)) {
    const auto content = read_file(p);
    auto recs = parse_raw(content, format_for(p, g.input_format), p.string());
    l.records.insert(l.records.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    l.digests.push_back({{"path", p.generic_string()}, {"sha256", sha256_hex(content)}, {"records", recs.size()}});
  }
  return l;
}

ValidateOptions validate_options(const GlobalFlags& g) { return {g.k, parse_tie_policy(g.ties)}; }

ReportOptions report_options(const GlobalFlags& g) {
  ReportOptions o;
  o.pairwise = {g.k, g.rbo_p, parse_rbo_variant(g.rbo_variant)};
  o.policy = parse_missing_policy(g.missing_policy);
  o.score_mode = parse_score_mode(g.score_source);
  o.consensus = {g.min_support, g.impute_missing, o.policy};
  o.stats.seed = g.seed;
  o.format = parse_output_format(g.format);
  return o;
}

/// Writes files to --out-dir, or to stdout with a header line per file when
/// there is more than one.
void emit(const std::vector<std::pair<std::string, std::string>>& files, const GlobalFlags& g) {
  if (!g.out_dir.empty()) {
    for (const auto& [name, content] : files) write_file(fs::path(g.out_dir) / name, content);
    return;
  }
  for (const auto& [name, content] : files) {
    if (files.size() > 1) std::cout << "==> " << name << " <==\n";
    std::cout << content;
  }
}

nlohmann::ordered_json manifest(const std::string& command, const GlobalFlags& g, const ReportOptions& o,
                                const Loaded& l, const ValidationReport& report) {
  nlohmann::ordered_json m;
  m["tool"] = "rankdiv";
  m["version"] = kVersion;
  m["command"] = command;
  m["options"] = options_json(o);
  m["ties"] = g.ties;
  m["inputs"] = l.digests;
  m["validation"] = {{"input_records", report.input_records},
                     {"output_items", report.output_items},
                     {"warnings", report.issues.size()}};
  return m;
}

std::string ext(const GlobalFlags& g) { return extension(parse_output_format(g.format)); }

void add_global_flags(CLI::App& app, GlobalFlags& g) {
  app.add_option("--k", g.k, "List depth k")->check(CLI::PositiveNumber);
  app.add_option("--rbo-p", g.rbo_p, "RBO persistence p in (0,1)");
  app.add_option("--rbo-variant", g.rbo_variant, "trunc|extra");
  app.add_option("--missing-policy", g.missing_policy, "kplus1|intersection");
  app.add_option("--score-source", g.score_source, "relevance|rank (Cronbach alpha scores)");
  app.add_option("--min-support", g.min_support, "Minimum models ranking an item for it to enter ARV");
  app.add_flag("--impute-missing", g.impute_missing, "Volatility imputes rank k+1 for models missing an item");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out-dir", g.out_dir, "Directory for output files (default: stdout)");
  app.add_option("--format", g.format, "Output format csv|json");
  app.add_option("--input-format", g.input_format, "auto|json|csv");
  app.add_option("--ties", g.ties, "error|order: tied declared ranks are an error, or kept in input order");
  app.add_flag("--manifest", g.manifest, "Also write manifest.json (report always does)");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"rankdiv: agreement and divergence metrics for multiple agents' ranked lists"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  GlobalFlags g;
  add_global_flags(app, g);

  std::vector<std::string> inputs;
  auto add_inputs = [&](CLI::App* sub) { sub->add_option("inputs", inputs, "Input files or directories")->required(); };

  auto* validate_cmd = app.add_subcommand("validate", "Validate raw result files and print the validation report");
  add_inputs(validate_cmd);
  auto* summarize_cmd = app.add_subcommand("summarize", "Consolidate validated results into one flat table");
  add_inputs(summarize_cmd);
  std::string metric = "all";
  auto* pairwise_cmd = app.add_subcommand("pairwise", "Pairwise AO/Jaccard/RBO/tau matrices and per-task scores");
  add_inputs(pairwise_cmd);
  pairwise_cmd->add_option("--metric", metric, "all|ao|jaccard|rbo|tau");
  auto* group_cmd = app.add_subcommand("group", "Per-task Kendall's W and Cronbach's alpha");
  add_inputs(group_cmd);
  auto* consensus_cmd = app.add_subcommand("consensus", "Per-task volatility, ARV and consensus distance");
  add_inputs(consensus_cmd);

  std::string scores_path;
  std::string grouping = "pairs";
  std::string center = "median";
  std::size_t perm = 0;
  auto* stats_cmd = app.add_subcommand("stats", "ANOVA, Kruskal-Wallis and Levene tests over a pairwise score table");
  stats_cmd->add_option("scores", scores_path, "pairwise_scores.csv|json")->required();
  stats_cmd->add_option("--grouping", grouping, "pairs|tasks");
  stats_cmd->add_option("--center", center, "Levene center median|mean");
  stats_cmd->add_option("--perm", perm, "Permutation resamples (0 = analytic p-values)");

  auto* report_cmd = app.add_subcommand("report", "Full artifact bundle");
  add_inputs(report_cmd);
  report_cmd->add_option("--perm", perm, "Permutation resamples for the stats table");

  SynthConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic run in the ingest JSON schema");
  synth_cmd->add_option("--models", synth.models, "Number of models")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--tasks", synth.tasks, "Number of tasks")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--universe", synth.universe_size, "Items per task universe");
  synth_cmd->add_option("--theta", synth.swap_noise, "Expected adjacent transpositions per item");
  synth_cmd->add_option("--rho", synth.substitution_rate, "Per-position substitution probability");
  synth_cmd->add_option("-o,--output", synth_out, "Output file (default: stdout)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) {
      const auto loaded = load_records(inputs, g);
      std::string out;
      int code = kExitOk;
      try {
        auto v = validate(loaded.records, validate_options(g));
        out = v.report.to_json().dump(2) + "\n";
      } catch (const ValidationFailed& e) {
        out = e.report().to_json().dump(2) + "\n";
        code = kExitValidation;
      }
      emit({{"validation_report.json", out}}, g);
      return code;
    }
    if (*stats_cmd) {
      const fs::path p(scores_path);
      const auto scores = read_pairwise_scores(read_file(p), format_for(p, g.input_format), p.string());
      StatsOptions so;
      so.grouping = parse_stats_grouping(grouping);
      so.center = stats::parse_center(center);
      so.permutations = perm;
      so.seed = g.seed;
      emit({{"stats" + ext(g), render(stats_table(significance_tests(scores, so)), parse_output_format(g.format))}}, g);
      return kExitOk;
    }
    if (*synth_cmd) {
      synth.k = g.k;
      synth.seed = g.seed;
      const auto json = run_to_json(synth_run(synth));
      if (synth_out.empty()) {
        std::cout << json;
      } else {
        write_file(synth_out, json);
      }
      return kExitOk;
    }

    const auto loaded = load_records(inputs, g);
    auto validated = validate(loaded.records, validate_options(g));
    const auto& run = validated.run;
    const auto opts = report_options(g);
    const auto fmt = opts.format;
    std::vector<std::pair<std::string, std::string>> files;
    std::string command;

    if (*summarize_cmd) {
      command = "summarize";
      files.emplace_back("summary" + ext(g), render(summary_table(run), fmt));
    } else if (*pairwise_cmd) {
      command = "pairwise";
      const auto scores = score_all_pairs(run, opts.pairwise);
      std::vector<Metric> metrics(std::begin(kAllMetrics), std::end(kAllMetrics));
      if (metric != "all") metrics = {parse_metric(metric)};
      std::vector<PairwiseMatrix> mats;
      for (auto m : metrics) mats.push_back(pairwise_matrix(run, m, opts.pairwise, scores));
      for (const auto& mx : mats) {
        files.emplace_back(std::string("matrix_") + to_string(mx.metric) + ext(g), render(matrix_table(mx), fmt));
      }
      files.emplace_back("pairwise_scores" + ext(g), render(pairwise_scores_table(scores), fmt));
      files.emplace_back("heatmap" + ext(g), render(heatmap_table(scores), fmt));
      files.emplace_back("ao_depth" + ext(g), render(depth_table(ao_depth_curves(run, opts.pairwise.k)), fmt));
    } else if (*group_cmd) {
      command = "group";
      files.emplace_back("group" + ext(g), render(group_table(run, opts.policy, opts.score_mode), fmt));
    } else if (*consensus_cmd) {
      command = "consensus";
      const auto reps = consensus_reports(run, opts.consensus);
      files.emplace_back("consensus" + ext(g), render(consensus_table(reps), fmt));
      files.emplace_back("volatility" + ext(g), render(volatility_output_table(reps), fmt));
    } else if (*report_cmd) {
      command = "report";
      auto ro = opts;
      ro.stats.permutations = perm;
      auto bundle = build_report(run, ro);
      files = std::move(bundle.files);
      files.emplace_back("validation_report.json", validated.report.to_json().dump(2) + "\n");
      files.emplace_back("manifest.json", manifest(command, g, ro, loaded, validated.report).dump(2) + "\n");
      if (g.out_dir.empty()) g.out_dir = "report";
      emit(files, g);
      return kExitOk;
    }
    if (g.manifest) {
      files.emplace_back("manifest.json", manifest(command, g, opts, loaded, validated.report).dump(2) + "\n");
    }
    emit(files, g);
    return kExitOk;
  } catch (const ValidationFailed& e) {
    std::cerr << "rankdiv: " << e.what() << "\n" << e.report().to_json().dump(2) << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "rankdiv: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::usage: return kExitUsage;
      case ErrorKind::io: return kExitIo;
      default: return kExitValidation;
    }
  } catch (const fs::filesystem_error& e) {
    std::cerr << "rankdiv: io error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
