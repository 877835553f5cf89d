#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rainbow/absorption.hpp"
#include "rainbow/embedder.hpp"
#include "rainbow/expander.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/tree.hpp"

namespace rainbow {

enum class ExperimentKind { almost_spanning, spanning, rainbow_st, lemma_stats };
enum class LemmaKind { many_colours_a, many_colours_b, large_buv, expand_membership };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);
LemmaKind parse_lemma_kind(const std::string& name);
std::string to_string(LemmaKind kind);

struct TrialConfig {
  ExperimentKind kind = ExperimentKind::almost_spanning;
  int n = 100;
  double p = 0.1;
  int palette = 0;  // 0: n, floor((1+alpha)n) or n-1 depending on kind
  double eps = 0.25;
  double delta = 0.4;
  double alpha = 0.25;
  int d = 3;
  std::string tree_source = "random";  // random | path | fixed
  std::optional<Tree> fixed_tree;
  SeedSpec seed_graph{SeedKind::clique_union, 2, 0.0};
  int trials = 1;
  std::uint64_t base_seed = 0;
  std::optional<double> eps_override;
  PipelineKnobs knobs;
  // lemma-stats
  LemmaKind lemma = LemmaKind::many_colours_a;
  double gamma = 0.5;
  double beta = 1.0;
  int triples = 200;
  ExpandParams expand;
  // execution
  int threads = 0;
  bool timing = true;

  int effective_palette() const;
  /// Throws ParameterError on the first invalid field.
  void validate() const;
  std::uint64_t hash() const;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;  // base seed; the trial stream is (seed, trial)
  std::uint64_t config_hash = 0;
  bool success = false;
  std::string stage;       // failing stage, empty on success
  std::map<std::string, double> metrics;
  double ms = 0.0;
};

struct SuccessEstimate {
  int successes = 0;
  int trials = 0;
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

SuccessEstimate wilson_interval(int successes, int trials, double z = 1.959963984540054);
SuccessEstimate estimate(const std::vector<TrialRecord>& records);

TrialRecord run_single_trial(const TrialConfig& config, int trial);
std::vector<TrialRecord> run_trials(const TrialConfig& config);

struct LemmaSummary {
  LemmaKind kind = LemmaKind::many_colours_a;
  int trials = 0;
  int violations = 0;
  double frequency = 0.0;
  double bound = 0.0;
  double mean_statistic = 0.0;
  double min_statistic = 0.0;
  // large-Buv: per-triple counts alongside the per-trial ones
  long long triples = 0;
  long long triple_violations = 0;
};

/// Runs config.trials lemma trials (config.kind is ignored) and reports the
/// empirical violation frequency of the stated bound.
LemmaSummary lemma_stats(const TrialConfig& config, std::vector<TrialRecord>* records = nullptr);

std::string csv_escape(const std::string& field);
std::string metric_json(const std::map<std::string, double>& metrics);
void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);

}  // namespace rainbow
