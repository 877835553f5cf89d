#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rainbow/absorption.hpp"
#include "rainbow/embedder.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/graph_io.hpp"
#include "rainbow/harness.hpp"
#include "rainbow/spanning.hpp"
#include "rainbow/tree.hpp"

using namespace rainbow;

namespace {

struct Common {
  int n = 100;
  double p = 0.1;
  int palette = 0;
  double eps = 0.25;
  double delta = 0.4;
  double alpha = 0.25;
  int d = 3;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "edgelist";
  std::string seed_graph = "clique-union";
  int parts = 2;
  std::string tree_file;
  std::string in;
  double c_beta = 0.01;
  double c_rho = 0.01;
  double first_budget = 0.25;
  double later_budget = 0.25;
  double target_degree = 0.0;
  bool no_gate = false;
  std::optional<double> eps_override;
};

// Output goes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ParameterError("cannot open " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

ColouredGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  return read_edge_list(in);
}

std::optional<Tree> load_tree(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  return read_tree(in);
}

PipelineKnobs knobs_from(const Common& c) {
  PipelineKnobs k;
  k.c_beta = c.c_beta;
  k.c_rho = c.c_rho;
  k.first_budget = c.first_budget;
  k.later_budget = c.later_budget;
  k.target_degree = c.target_degree;
  k.enforce_expansion = !c.no_gate;
  return k;
}

void add_graph_flags(CLI::App* app, Common& c) {
  app->add_option("--n", c.n, "number of vertices");
  app->add_option("--p", c.p, "edge probability of the random part");
  app->add_option("--palette", c.palette, "number of colours (0 picks the default)");
  app->add_option("--seed", c.seed, "base seed");
  app->add_option("--out", c.out, "output file (stdout when omitted)");
}

void add_pipeline_flags(CLI::App* app, Common& c) {
  app->add_option("--d", c.d, "maximum tree degree");
  app->add_option("--tree", c.tree_file, "tree file; a random bounded tree when omitted");
  app->add_option("--c-beta", c.c_beta, "constant in the beta cap");
  app->add_option("--c-rho", c.c_rho, "constant in the reservoir size");
  app->add_option("--first-budget", c.first_budget, "m_1 as a fraction of n");
  app->add_option("--later-budget", c.later_budget, "m_i as a fraction of eps*n for i >= 2");
  app->add_option("--target-degree", c.target_degree, "size every budget for this average block degree");
  app->add_flag("--no-expansion-gate", c.no_gate, "record expansion refutations instead of failing");
}

void print_embedding(std::ostream& out, const std::vector<int>& f) {
  for (std::size_t x = 0; x < f.size(); ++x) out << x << ' ' << f[x] << '\n';
}

void print_summary(const SuccessEstimate& e) {
  std::cerr << "successes=" << e.successes << " trials=" << e.trials << " rate=" << e.point << " wilson95=["
            << e.lower << ',' << e.upper << "]\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rainbow tree embeddings in random and perturbed graphs"};
  app.require_subcommand(1);
  Common c;

  auto* gen = app.add_subcommand("gen", "sample G(n,p), or a seed graph union G(n,p) when --delta is given");
  add_graph_flags(gen, c);
  auto* gen_delta = gen->add_option("--delta", c.delta, "seed graph minimum degree ratio");
  gen->add_option("--seed-graph", c.seed_graph, "complete | multipartite | clique-union | random-supergraph");
  gen->add_option("--parts", c.parts, "parts for multipartite and clique-union seeds");
  gen->add_option("--format", c.format, "output format")->check(CLI::IsMember({"edgelist"}));

  auto* colour = app.add_subcommand("colour", "colour an edge list uniformly at random");
  colour->add_option("--in", c.in, "input edge list")->required();
  add_graph_flags(colour, c);
  colour->add_option("--format", c.format, "output format")->check(CLI::IsMember({"edgelist"}));

  auto* almost = app.add_subcommand("embed-almost", "rainbow almost-spanning embedding into G(n,p)");
  add_graph_flags(almost, c);
  add_pipeline_flags(almost, c);
  almost->add_option("--eps", c.eps, "slack: the tree has n - floor(eps n) nodes");

  auto* spanning = app.add_subcommand("embed-spanning", "rainbow spanning embedding into a perturbed graph");
  add_graph_flags(spanning, c);
  add_pipeline_flags(spanning, c);
  spanning->add_option("--delta", c.delta, "seed graph minimum degree ratio");
  spanning->add_option("--alpha", c.alpha, "palette is (1+alpha)n");
  spanning->add_option("--eps", c.eps_override, "override for the leftover fraction");
  spanning->add_option("--seed-graph", c.seed_graph, "seed graph kind");
  spanning->add_option("--parts", c.parts, "parts of the seed graph");

  auto* rst = app.add_subcommand("rainbow-st", "find a rainbow spanning tree");
  add_graph_flags(rst, c);
  rst->add_option("--in", c.in, "coloured edge list; otherwise a coloured perturbed graph is sampled");
  rst->add_option("--delta", c.delta, "seed graph minimum degree ratio");
  rst->add_option("--seed-graph", c.seed_graph, "seed graph kind");

  std::string kind = "almost-spanning";
  bool no_timing = false;
  int threads = 0;
  auto* mc = app.add_subcommand("montecarlo", "seeded Monte Carlo trials to CSV");
  add_graph_flags(mc, c);
  add_pipeline_flags(mc, c);
  mc->add_option("--kind", kind, "almost-spanning | spanning | rainbow-st")->check(
      CLI::IsMember({"almost-spanning", "spanning", "rainbow-st"}));
  mc->add_option("--eps", c.eps, "slack for almost-spanning; override for spanning");
  mc->add_option("--delta", c.delta, "seed graph minimum degree ratio");
  mc->add_option("--alpha", c.alpha, "palette is (1+alpha)n for spanning");
  mc->add_option("--trials", c.trials, "number of trials");
  mc->add_option("--seed-graph", c.seed_graph, "seed graph kind");
  mc->add_option("--parts", c.parts, "parts of the seed graph");
  mc->add_option("--threads", threads, "worker threads (0 = all cores)");
  mc->add_flag("--no-timing", no_timing, "write 0 in the ms column for byte-identical output");

  std::string lemma = "many-colours-a";
  double gamma = 0.5, beta = 1.0;
  int triples = 200;
  auto* ls = app.add_subcommand("lemma-stats", "empirical violation frequency of a lemma bound");
  add_graph_flags(ls, c);
  ls->add_option("--lemma", lemma, "many-colours-a | many-colours-b | large-Buv | expand-membership");
  ls->add_option("--alpha", c.alpha, "|A| = alpha n");
  ls->add_option("--gamma", gamma, "coverage slack");
  ls->add_option("--beta", beta, "G has beta n vertices");
  ls->add_option("--d", c.d, "degree parameter");
  ls->add_option("--delta", c.delta, "seed graph minimum degree ratio");
  ls->add_option("--eps", c.eps_override, "leftover fraction for large-Buv");
  ls->add_option("--trials", c.trials, "number of trials");
  ls->add_option("--triples", triples, "sampled (j,u,v) triples per trial");
  ls->add_option("--seed-graph", c.seed_graph, "seed graph kind");
  ls->add_option("--threads", threads, "worker threads (0 = all cores)");
  ls->add_flag("--no-timing", no_timing, "write 0 in the ms column");

  CLI11_PARSE(app, argc, argv);

  try {
    RandomSource rng(c.seed, 0);
    SeedSpec spec{parse_seed_kind(c.seed_graph), c.parts, 0.0};
    if (*gen) {
      ColouredGraph g = *gen_delta ? perturb(gen_seed_graph(c.n, c.delta, spec, rng), c.p, rng) : gen_gnp(c.n, c.p, rng);
      if (c.palette > 0) g = uniform_colouring(g, c.palette, rng);
      Sink sink(c.out);
      write_edge_list(sink.get(), g);
    } else if (*colour) {
      ColouredGraph g = load_graph(c.in);
      if (c.palette < 1) throw ParameterError("colour needs --palette");
      Sink sink(c.out);
      write_edge_list(sink.get(), uniform_colouring(g, c.palette, rng));
    } else if (*almost) {
      const int m = c.n - static_cast<int>(std::floor(c.eps * c.n + 1e-9));
      Tree t = load_tree(c.tree_file).value_or(Tree());
      if (c.tree_file.empty()) t = gen_random_bounded_tree(m, c.d, rng);
      const int palette = c.palette > 0 ? c.palette : c.n;
      AlmostSpanningResult r = embed_almost_spanning(c.n, c.p, palette, t, c.eps, c.d, rng, knobs_from(c));
      Sink sink(c.out);
      for (const auto& rec : r.trace) sink.get() << format_trace_line(rec) << '\n';
      if (r.ok) print_embedding(sink.get(), r.embedding);
      return r.ok ? 0 : 2;
    } else if (*spanning) {
      ColouredGraph g = gen_seed_graph(c.n, c.delta, spec, rng);
      Tree t = load_tree(c.tree_file).value_or(Tree());
      if (c.tree_file.empty()) t = gen_random_bounded_tree(c.n, c.d, rng);
      SpanningConfig sc;
      sc.p = c.p;
      sc.delta = c.delta;
      sc.alpha = c.alpha;
      sc.d = c.d;
      sc.eps_override = c.eps_override;
      sc.knobs = knobs_from(c);
      SpanningResult r = embed_spanning(g, t, sc, rng);
      Sink sink(c.out);
      for (const auto& rec : r.trace) sink.get() << format_trace_line(rec) << '\n';
      for (const auto& line : r.absorb_lines) sink.get() << line << '\n';
      if (r.ok) print_embedding(sink.get(), r.embedding);
      return r.ok ? 0 : 2;
    } else if (*rst) {
      ColouredGraph g;
      if (!c.in.empty()) {
        g = load_graph(c.in);
      } else {
        const int palette = c.palette > 0 ? c.palette : std::max(1, c.n - 1);
        g = uniform_colouring(perturb(gen_seed_graph(c.n, c.delta, spec, rng), c.p, rng), palette, rng);
      }
      auto tree = find_rainbow_spanning_tree(g);
      Sink sink(c.out);
      if (!tree) {
        sink.get() << "none\n";
        if (g.n() <= kSuzukiExactLimit) {
          CriterionResult cr = suzuki_check(g);
          for (const auto& b : cr.witness.blocks) {
            for (std::size_t i = 0; i < b.size(); ++i) sink.get() << (i ? " " : "") << b[i];
            sink.get() << '\n';
          }
        }
        return 2;
      }
      for (int id : *tree) {
        const Edge& e = g.edges()[id];
        sink.get() << e.u << ' ' << e.v << ' ' << g.colour(id) << '\n';
      }
    } else if (*mc) {
      TrialConfig tc;
      tc.kind = parse_experiment_kind(kind);
      tc.n = c.n;
      tc.p = c.p;
      tc.palette = c.palette;
      tc.eps = c.eps;
      if (tc.kind == ExperimentKind::spanning && mc->count("--eps")) tc.eps_override = c.eps;
      tc.delta = c.delta;
      tc.alpha = c.alpha;
      tc.d = c.d;
      tc.trials = c.trials;
      tc.base_seed = c.seed;
      tc.seed_graph = spec;
      tc.knobs = knobs_from(c);
      tc.threads = threads;
      tc.timing = !no_timing;
      if (!c.tree_file.empty()) {
        tc.tree_source = "fixed";
        tc.fixed_tree = load_tree(c.tree_file);
      }
      auto records = run_trials(tc);
      Sink sink(c.out);
      write_csv(sink.get(), records);
      if (!records.empty()) print_summary(estimate(records));
    } else if (*ls) {
      TrialConfig tc;
      tc.kind = ExperimentKind::lemma_stats;
      tc.lemma = parse_lemma_kind(lemma);
      tc.n = c.n;
      tc.p = c.p;
      tc.alpha = c.alpha;
      tc.gamma = gamma;
      tc.beta = beta;
      tc.d = c.d;
      tc.delta = c.delta;
      tc.eps_override = c.eps_override;
      tc.trials = c.trials;
      tc.triples = triples;
      tc.base_seed = c.seed;
      tc.seed_graph = spec;
      tc.threads = threads;
      tc.timing = !no_timing;
      std::vector<TrialRecord> records;
      LemmaSummary s = lemma_stats(tc, &records);
      if (!c.out.empty()) {
        Sink sink(c.out);
        write_csv(sink.get(), records);
      }
      std::cout << "lemma=" << to_string(s.kind) << " trials=" << s.trials << " violations=" << s.violations
                << " frequency=" << s.frequency << " bound=" << s.bound << " mean=" << s.mean_statistic
                << " min=" << s.min_statistic;
      if (s.triples) std::cout << " triples=" << s.triples << " triples_below=" << s.triple_violations;
      std::cout << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
