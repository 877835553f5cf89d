#include "rainbow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rainbow/errors.hpp"
#include "rainbow/spanning.hpp"

namespace rainbow {

namespace {

const std::pair<ExperimentKind, const char*> kExperimentNames[] = {
    {ExperimentKind::almost_spanning, "almost-spanning"},
    {ExperimentKind::spanning, "spanning"},
    {ExperimentKind::rainbow_st, "rainbow-st"},
    {ExperimentKind::lemma_stats, "lemma-stats"},
};

const std::pair<LemmaKind, const char*> kLemmaNames[] = {
    {LemmaKind::many_colours_a, "many-colours-a"},
    {LemmaKind::many_colours_b, "many-colours-b"},
    {LemmaKind::large_buv, "large-Buv"},
    {LemmaKind::expand_membership, "expand-membership"},
};

Tree make_tree(const TrialConfig& c, int m, RandomSource& rng) {
  if (c.tree_source == "random") return gen_random_bounded_tree(m, c.d, rng);
  if (c.tree_source == "path") return Tree::path(m);
  if (c.tree_source == "fixed") {
    if (!c.fixed_tree || c.fixed_tree->size() != m)
      throw ParameterError("fixed tree must have " + std::to_string(m) + " nodes");
    return *c.fixed_tree;
  }
  throw ParameterError("unknown tree source: " + c.tree_source);
}

int spanning_leftover_nodes(int n, double eps) { return n - static_cast<int>(std::floor(eps * n + 1e-9)); }

void run_almost(const TrialConfig& c, RandomSource& rng, TrialRecord& rec) {
  const int m = spanning_leftover_nodes(c.n, c.eps);
  Tree t = make_tree(c, m, rng);
  AlmostSpanningResult r = embed_almost_spanning(c.n, c.p, c.effective_palette(), t, c.eps, c.d, rng, c.knobs);
  rec.success = r.ok;
  rec.stage = r.failed_stage;
  rec.metrics["tree_nodes"] = m;
  rec.metrics["pieces"] = r.pieces;
  rec.metrics["reservoir_used"] = r.reservoir_used;
  rec.metrics["reservoir_bound"] = r.reservoir_bound;
  rec.metrics["short_root_stages"] = r.short_root_stages;
  rec.metrics["lemma_violations"] = static_cast<double>(r.lemma_violations.size());
  rec.metrics["validity_problems"] = static_cast<double>(r.validity_problems.size());
}

void run_spanning(const TrialConfig& c, RandomSource& rng, TrialRecord& rec) {
  ColouredGraph g = gen_seed_graph(c.n, c.delta, c.seed_graph, rng);
  Tree t = make_tree(c, c.n, rng);
  SpanningConfig sc;
  sc.p = c.p;
  sc.delta = c.delta;
  sc.alpha = c.alpha;
  sc.d = c.d;
  sc.eps_override = c.eps_override;
  sc.knobs = c.knobs;
  SpanningResult r = embed_spanning(g, t, sc, rng);
  rec.success = r.ok;
  rec.stage = r.failed_stage;
  if (rec.stage == "almost-spanning") rec.stage += ":" + r.almost.failed_stage;
  rec.metrics["eps"] = r.eps;
  rec.metrics["eps_paper"] = r.eps_paper;
  rec.metrics["leftover"] = r.leftover;
  rec.metrics["absorbed"] = r.absorbed;
  rec.metrics["r_max_degree"] = r.r_max_degree;
  rec.metrics["r_degree_violation"] = r.r_degree_violation ? 1 : 0;
  rec.metrics["validity_problems"] = static_cast<double>(r.validity_problems.size());
}

void run_rainbow_st(const TrialConfig& c, RandomSource& rng, TrialRecord& rec) {
  ColouredGraph g = gen_seed_graph(c.n, c.delta, c.seed_graph, rng);
  ColouredGraph gamma = uniform_colouring(perturb(g, c.p, rng), c.effective_palette(), rng);
  auto tree = find_rainbow_spanning_tree(gamma);
  rec.success = tree.has_value();
  rec.stage = rec.success ? "" : "no-tree";
  rec.metrics["edges"] = static_cast<double>(gamma.edge_count());
  if (tree) {
    std::vector<Edge> edges;
    for (int id : *tree) edges.push_back(gamma.edges()[id]);
    if (!is_rainbow(gamma, edges)) throw ContractError("rainbow-st: returned tree is not rainbow");
    Tree::from_edges(c.n, edges);  // throws if not a spanning tree
  }
}

bool run_lemma(const TrialConfig& c, RandomSource& rng, TrialRecord& rec) {
  const int n = c.n;
  switch (c.lemma) {
    case LemmaKind::many_colours_a:
    case LemmaKind::many_colours_b: {
      const int big_n = static_cast<int>(std::lround(c.beta * n));
      ColouredGraph g = uniform_colouring(gen_gnp(big_n, c.p, rng), n, rng);
      ColourMask a(n, 0);
      const int a_size = static_cast<int>(std::floor(c.alpha * n + 1e-9));
      for (int i = 0; i < a_size; ++i) a[i] = 1;
      double stat, bound;
      if (c.lemma == LemmaKind::many_colours_a) {
        stat = colour_coverage(g.colours(), a);
        bound = (1.0 - c.gamma) * c.alpha * n;
      } else {
        std::vector<int> at_u;
        for (int w : g.neighbours(0)) at_u.push_back(*g.colour_of(0, w));
        stat = colour_coverage(at_u, a);
        bound = c.d;
      }
      rec.metrics["statistic"] = stat;
      rec.metrics["bound"] = bound;
      return stat < bound;
    }
    case LemmaKind::large_buv: {
      ColouredGraph g = gen_seed_graph(n, c.delta, c.seed_graph, rng);
      Tree t = make_tree(c, n, rng);
      const double eps = c.eps_override.value_or(paper_spanning_eps(c.delta, c.d));
      TrimResult trim = trim_to_size(t, spanning_leftover_nodes(n, eps), rng);
      ColouredGraph r = gen_gnp(n, c.p, rng);
      std::vector<int> perm(n);
      for (int v = 0; v < n; ++v) perm[v] = v;
      rng.shuffle(std::span<int>(perm));
      std::vector<Edge> kept;
      for (const Edge& e : g.edges())
        if (!r.has_edge(e.u, e.v)) kept.push_back(e);
      EdgePartition parts = partition_edge_set(ColouredGraph::from_edges(n, std::move(kept)), c.d, c.delta, rng);
      rec.metrics["bound"] = large_buv_bound(c.delta, c.d, n);
      if (!parts.ok) {
        rec.stage = "partition";
        return true;
      }
      std::vector<int> i0;
      try {
        i0 = build_I0(t, trim, c.d, eps);
      } catch (const StructuralError&) {
        rec.stage = "absorbers";
        return true;
      }
      std::vector<int> f(n, -1);
      for (int a = 0; a < trim.subtree.size(); ++a) f[trim.to_original[a]] = perm[a];
      TreeAdjacency adj(n);
      for (const Edge& e : trim.subtree.edges()) {
        int a = perm[e.u], b = perm[e.v];
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
      std::vector<char> absorbers(n, 0);
      for (int x : i0) absorbers[f[x]] = 1;
      BStatistics st = measure_B_statistics(parts, absorbers, adj, c.delta, c.d, c.triples, rng);
      rec.metrics["statistic"] = st.min_size;
      rec.metrics["mean"] = st.mean_size;
      rec.metrics["triples"] = st.samples;
      rec.metrics["triples_below"] = st.below_bound;
      rec.metrics["absorbers"] = static_cast<double>(i0.size());
      return st.below_bound > 0;
    }
    case LemmaKind::expand_membership: {
      ColouredGraph g = gen_gnp(n, c.p, rng);
      CheckOptions co{CheckMode::sampled, 8, rng.next_u64()};
      EffectiveExpander ee = find_effective_expander(g, c.expand, co);
      rec.metrics["statistic"] = static_cast<double>(ee.vertices.size());
      rec.metrics["removed"] = ee.removed_vertices;
      rec.metrics["bound"] = (1.0 - c.expand.theta) * n;
      if (!ee.ok) rec.stage = ee.failed_item;
      return !ee.ok;
    }
  }
  return false;
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto [k, s] : kExperimentNames)
    if (name == s) return k;
  throw ParameterError("unknown experiment kind: " + name);
}

std::string to_string(ExperimentKind kind) {
  for (auto [k, s] : kExperimentNames)
    if (k == kind) return s;
  return "?";
}

LemmaKind parse_lemma_kind(const std::string& name) {
  for (auto [k, s] : kLemmaNames)
    if (name == s) return k;
  throw ParameterError("unknown lemma kind: " + name);
}

std::string to_string(LemmaKind kind) {
  for (auto [k, s] : kLemmaNames)
    if (k == kind) return s;
  return "?";
}

int TrialConfig::effective_palette() const {
  if (palette > 0) return palette;
  switch (kind) {
    case ExperimentKind::spanning:
      return static_cast<int>(std::floor((1.0 + alpha) * n + 1e-9));
    case ExperimentKind::rainbow_st:
      return std::max(1, n - 1);
    default:
      return n;
  }
}

void TrialConfig::validate() const {
  if (n < 1) throw ParameterError("n must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p must lie in [0,1]");
  if (palette < 0) throw ParameterError("palette must be non-negative");
  if (trials < 0) throw ParameterError("trials must be non-negative");
  if (threads < 0) throw ParameterError("threads must be non-negative");
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0,1]");
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
  if (d < 1) throw ParameterError("d must be positive");
  if (tree_source != "random" && tree_source != "path" && tree_source != "fixed")
    throw ParameterError("tree source must be random, path or fixed");
  if (tree_source == "fixed" && !fixed_tree) throw ParameterError("fixed tree source needs a tree");
  if (eps_override && !(*eps_override > 0.0 && *eps_override < 1.0))
    throw ParameterError("eps override must lie in (0,1)");
  switch (kind) {
    case ExperimentKind::almost_spanning:
      if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0,1)");
      if (d < 2) throw ParameterError("d must be at least 2");
      if (effective_palette() < n) throw ParameterError("palette must be at least n");
      break;
    case ExperimentKind::spanning:
      if (d < 2) throw ParameterError("d must be at least 2");
      break;
    case ExperimentKind::rainbow_st:
      break;
    case ExperimentKind::lemma_stats:
      if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0,1)");
      if (!(beta > 0.0)) throw ParameterError("beta must be positive");
      if (triples < 1) throw ParameterError("triples must be positive");
      break;
  }
}

std::uint64_t TrialConfig::hash() const {
  std::ostringstream s;
  s.precision(17);
  s << to_string(kind) << '|' << n << '|' << p << '|' << effective_palette() << '|' << eps << '|' << delta
    << '|' << alpha << '|' << d << '|' << tree_source << '|' << to_string(seed_graph.kind) << '|'
    << seed_graph.parts << '|' << seed_graph.density << '|' << base_seed << '|'
    << (eps_override ? *eps_override : -1.0) << '|' << knobs.c_beta << '|' << knobs.c_rho << '|'
    << knobs.first_budget << '|' << knobs.later_budget << '|' << knobs.target_degree << '|' << knobs.enforce_expansion << '|' << to_string(lemma) << '|' << gamma
    << '|' << beta << '|' << triples;
  if (fixed_tree) {
    std::ostringstream t;
    write_tree(t, *fixed_tree);
    s << '|' << t.str();
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

SuccessEstimate wilson_interval(int successes, int trials, double z) {
  if (trials < 1) throw ParameterError("estimate needs at least one trial");
  if (successes < 0 || successes > trials) throw ParameterError("successes out of range");
  SuccessEstimate e;
  e.successes = successes;
  e.trials = trials;
  const double nn = trials;
  const double ph = successes / nn;
  const double z2 = z * z;
  const double centre = (ph + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn));
  e.point = ph;
  e.lower = successes == 0 ? 0.0 : std::clamp(centre - half, 0.0, ph);
  e.upper = successes == trials ? 1.0 : std::clamp(centre + half, ph, 1.0);
  return e;
}

SuccessEstimate estimate(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw ParameterError("estimate needs at least one record");
  int s = 0;
  for (const auto& r : records) s += r.success ? 1 : 0;
  return wilson_interval(s, static_cast<int>(records.size()));
}

TrialRecord run_single_trial(const TrialConfig& config, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = config.base_seed;
  rec.config_hash = config.hash();
  RandomSource rng(config.base_seed, static_cast<std::uint64_t>(trial));
  const auto start = std::chrono::steady_clock::now();
  switch (config.kind) {
    case ExperimentKind::almost_spanning:
      run_almost(config, rng, rec);
      break;
    case ExperimentKind::spanning:
      run_spanning(config, rng, rec);
      break;
    case ExperimentKind::rainbow_st:
      run_rainbow_st(config, rng, rec);
      break;
    case ExperimentKind::lemma_stats: {
      bool violated = run_lemma(config, rng, rec);
      rec.success = !violated;
      if (violated && rec.stage.empty()) rec.stage = "violation";
      if (!violated) rec.stage.clear();
      break;
    }
  }
  if (config.timing)
    rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<TrialRecord> run_trials(const TrialConfig& config) {
  config.validate();
  std::vector<TrialRecord> records(config.trials);
  if (config.trials == 0) return records;
  int workers = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, config.trials);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto work = [&] {
    for (int i = next++; i < config.trials; i = next++) {
      try {
        records[i] = run_single_trial(config, i);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

LemmaSummary lemma_stats(const TrialConfig& config, std::vector<TrialRecord>* records) {
  TrialConfig c = config;
  c.kind = ExperimentKind::lemma_stats;
  std::vector<TrialRecord> recs = run_trials(c);
  LemmaSummary s;
  s.kind = c.lemma;
  s.trials = static_cast<int>(recs.size());
  double sum = 0.0;
  int counted = 0;
  for (const auto& r : recs) {
    if (!r.success) ++s.violations;
    if (auto it = r.metrics.find("bound"); it != r.metrics.end()) s.bound = it->second;
    if (auto it = r.metrics.find("statistic"); it != r.metrics.end()) {
      sum += it->second;
      s.min_statistic = counted == 0 ? it->second : std::min(s.min_statistic, it->second);
      ++counted;
    }
    if (auto it = r.metrics.find("triples"); it != r.metrics.end()) s.triples += static_cast<long long>(it->second);
    if (auto it = r.metrics.find("triples_below"); it != r.metrics.end())
      s.triple_violations += static_cast<long long>(it->second);
  }
  s.frequency = s.trials ? static_cast<double>(s.violations) / s.trials : 0.0;
  s.mean_statistic = counted ? sum / counted : 0.0;
  if (records) *records = std::move(recs);
  return s;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string metric_json(const std::map<std::string, double>& metrics) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : metrics) {
    if (!std::isfinite(v))
      j[k] = nullptr;
    else if (v == std::floor(v) && std::fabs(v) < 1e15)
      j[k] = static_cast<long long>(v);
    else
      j[k] = v;
  }
  return j.dump();
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial,seed,outcome,stage,metric_json,ms\n";
  for (const auto& r : records) {
    out << r.trial << ',' << r.seed << ',' << (r.success ? "success" : "fail") << ',' << csv_escape(r.stage) << ','
        << csv_escape(metric_json(r.metrics)) << ',' << static_cast<long long>(std::llround(r.ms)) << '\n';
  }
}

}  // namespace rainbow
