#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rainbow/absorption.hpp"
#include "rainbow/embedder.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/expander.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/graph_io.hpp"
#include "rainbow/harness.hpp"
#include "rainbow/spanning.hpp"
#include "rainbow/sparsify.hpp"
#include "rainbow/tree.hpp"

namespace py = pybind11;
using namespace rainbow;

namespace {

std::vector<Edge> to_edges(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> out;
  out.reserve(pairs.size());
  for (auto [a, b] : pairs) out.push_back(make_edge(a, b));
  return out;
}

std::vector<std::pair<int, int>> from_edges(const std::vector<Edge>& edges) {
  std::vector<std::pair<int, int>> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.emplace_back(e.u, e.v);
  return out;
}

PipelineKnobs knobs_from(const py::dict& d) {
  PipelineKnobs k;
  for (auto item : d) {
    const auto key = item.first.cast<std::string>();
    if (key == "c_beta") k.c_beta = item.second.cast<double>();
    else if (key == "c_rho") k.c_rho = item.second.cast<double>();
    else if (key == "first_budget") k.first_budget = item.second.cast<double>();
    else if (key == "later_budget") k.later_budget = item.second.cast<double>();
    else if (key == "target_degree") k.target_degree = item.second.cast<double>();
    else if (key == "enforce_expansion") k.enforce_expansion = item.second.cast<bool>();
    else if (key == "root_attempts") k.root_attempts = item.second.cast<int>();
    else if (key == "rollback_factor") k.rollback_factor = item.second.cast<int>();
    else throw ParameterError("unknown knob: " + key);
  }
  return k;
}

std::vector<std::string> trace_lines(const std::vector<StageRecord>& trace) {
  std::vector<std::string> out;
  for (const auto& rec : trace) out.push_back(format_trace_line(rec));
  return out;
}

py::dict record_dict(const TrialRecord& r) {
  py::dict d;
  d["trial"] = r.trial;
  d["seed"] = r.seed;
  d["success"] = r.success;
  d["stage"] = r.stage;
  d["metrics"] = r.metrics;
  d["ms"] = r.ms;
  return d;
}

TrialConfig config_from(const py::dict& d) {
  TrialConfig c;
  for (auto item : d) {
    const auto key = item.first.cast<std::string>();
    const auto& v = item.second;
    if (key == "kind") c.kind = parse_experiment_kind(v.cast<std::string>());
    else if (key == "n") c.n = v.cast<int>();
    else if (key == "p") c.p = v.cast<double>();
    else if (key == "palette") c.palette = v.cast<int>();
    else if (key == "eps") c.eps = v.cast<double>();
    else if (key == "delta") c.delta = v.cast<double>();
    else if (key == "alpha") c.alpha = v.cast<double>();
    else if (key == "d") c.d = v.cast<int>();
    else if (key == "tree_source") c.tree_source = v.cast<std::string>();
    else if (key == "seed_graph") c.seed_graph.kind = parse_seed_kind(v.cast<std::string>());
    else if (key == "parts") c.seed_graph.parts = v.cast<int>();
    else if (key == "trials") c.trials = v.cast<int>();
    else if (key == "seed") c.base_seed = v.cast<std::uint64_t>();
    else if (key == "eps_override") c.eps_override = v.is_none() ? std::nullopt : std::optional(v.cast<double>());
    else if (key == "knobs") c.knobs = knobs_from(v.cast<py::dict>());
    else if (key == "lemma") c.lemma = parse_lemma_kind(v.cast<std::string>());
    else if (key == "gamma") c.gamma = v.cast<double>();
    else if (key == "beta") c.beta = v.cast<double>();
    else if (key == "triples") c.triples = v.cast<int>();
    else if (key == "threads") c.threads = v.cast<int>();
    else if (key == "timing") c.timing = v.cast<bool>();
    else throw ParameterError("unknown config field: " + key);
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(_rainbowtrees, m) {
  m.doc() = "Rainbow bounded-degree tree embeddings in random and perturbed graphs";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_OverflowError);
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_RuntimeError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_AssertionError);

  py::class_<ColouredGraph>(m, "Graph")
      .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges, std::optional<std::vector<int>> colours,
                       int palette) {
             if (colours) return ColouredGraph::from_coloured_edges(n, to_edges(edges), *colours, palette);
             return ColouredGraph::from_edges(n, to_edges(edges));
           }),
           py::arg("n"), py::arg("edges") = std::vector<std::pair<int, int>>{}, py::arg("colours") = py::none(),
           py::arg("palette") = 0)
      .def_property_readonly("n", &ColouredGraph::n)
      .def_property_readonly("edges", [](const ColouredGraph& g) { return from_edges(g.edges()); })
      .def_property_readonly("colours", &ColouredGraph::colours)
      .def_property_readonly("palette", &ColouredGraph::palette)
      .def_property_readonly("coloured", &ColouredGraph::is_coloured)
      .def("edge_count", &ColouredGraph::edge_count)
      .def("has_edge", &ColouredGraph::has_edge)
      .def("colour_of", &ColouredGraph::colour_of)
      .def("degree", &ColouredGraph::degree)
      .def("neighbours", [](const ColouredGraph& g, int v) {
        auto s = g.neighbours(v);
        return std::vector<int>(s.begin(), s.end());
      })
      .def("min_degree", &ColouredGraph::min_degree)
      .def("max_degree", &ColouredGraph::max_degree)
      .def("to_text", [](const ColouredGraph& g) {
        std::ostringstream s;
        write_edge_list(s, g);
        return s.str();
      })
      .def_static("from_text", [](const std::string& text) {
        std::istringstream s(text);
        return read_edge_list(s);
      })
      .def("__repr__", [](const ColouredGraph& g) {
        return "Graph(n=" + std::to_string(g.n()) + ", edges=" + std::to_string(g.edge_count()) + ")";
      });

  py::class_<Tree>(m, "Tree")
      .def(py::init([](int m, const std::vector<std::pair<int, int>>& edges) { return Tree::from_edges(m, to_edges(edges)); }),
           py::arg("m"), py::arg("edges"))
      .def_static("path", &Tree::path)
      .def_static("star", &Tree::star)
      .def_property_readonly("size", &Tree::size)
      .def_property_readonly("edges", [](const Tree& t) { return from_edges(t.edges()); })
      .def("max_degree", &Tree::max_degree)
      .def("neighbours", &Tree::neighbours)
      .def("to_text", [](const Tree& t) {
        std::ostringstream s;
        write_tree(s, t);
        return s.str();
      })
      .def_static("from_text", [](const std::string& text) {
        std::istringstream s(text);
        return read_tree(s);
      })
      .def("__repr__", [](const Tree& t) { return "Tree(m=" + std::to_string(t.size()) + ")"; });

  m.def("gen_gnp", [](int n, double p, std::uint64_t seed) {
    RandomSource rng(seed);
    return gen_gnp(n, p, rng);
  }, py::arg("n"), py::arg("p"), py::arg("seed") = 0);
  m.def("gen_seed_graph", [](int n, double delta, const std::string& kind, int parts, std::uint64_t seed) {
    RandomSource rng(seed);
    return gen_seed_graph(n, delta, {parse_seed_kind(kind), parts, 0.0}, rng);
  }, py::arg("n"), py::arg("delta"), py::arg("kind") = "clique-union", py::arg("parts") = 2, py::arg("seed") = 0);
  m.def("perturb", [](const ColouredGraph& g, double p, std::uint64_t seed) {
    RandomSource rng(seed);
    return perturb(g, p, rng);
  }, py::arg("g"), py::arg("p"), py::arg("seed") = 0);
  m.def("uniform_colouring", [](const ColouredGraph& g, int palette, std::uint64_t seed) {
    RandomSource rng(seed);
    return uniform_colouring(g, palette, rng);
  }, py::arg("g"), py::arg("palette"), py::arg("seed") = 0);
  m.def("random_tree", [](int m, int d, std::uint64_t seed) {
    RandomSource rng(seed);
    return gen_random_bounded_tree(m, d, rng);
  }, py::arg("m"), py::arg("d"), py::arg("seed") = 0);

  m.def("is_eta_r_expander", [](const ColouredGraph& g, double eta, int r) {
    return is_eta_r_expander(g, eta, r).holds;
  }, py::arg("g"), py::arg("eta"), py::arg("r"));
  m.def("sparsify", [](int k, double p, int palette, int m, std::uint64_t seed) -> std::optional<ColouredGraph> {
    std::vector<int> x(k);
    for (int i = 0; i < k; ++i) x[i] = i;
    RandomSource rng(seed);
    auto r = sparsify(x, p, palette, full_mask(palette), m, rng);
    if (!r.ok()) return std::nullopt;
    return r.graph;
  }, py::arg("k"), py::arg("p"), py::arg("palette"), py::arg("m"), py::arg("seed") = 0);

  m.def("find_rainbow_spanning_tree", &find_rainbow_spanning_tree, py::arg("g"));
  m.def("suzuki_check", [](const ColouredGraph& g) { return suzuki_check(g).holds; }, py::arg("g"));
  m.def("vertex_connectivity", &vertex_connectivity, py::arg("g"));
  m.def("highly_connected_partition", [](const ColouredGraph& g, int k) {
    return highly_connected_partition(g, k).blocks;
  }, py::arg("g"), py::arg("k"));

  m.def("embed_almost_spanning",
        [](int n, double p, int palette, const Tree& t, double eps, int d, std::uint64_t seed, const py::dict& knobs) {
          RandomSource rng(seed);
          auto r = embed_almost_spanning(n, p, palette, t, eps, d, rng, knobs_from(knobs));
          py::dict out;
          out["ok"] = r.ok;
          out["failed_stage"] = r.failed_stage;
          out["embedding"] = r.embedding;
          out["trace"] = trace_lines(r.trace);
          out["pieces"] = r.pieces;
          out["reservoir_used"] = r.reservoir_used;
          out["validity_problems"] = r.validity_problems;
          return out;
        },
        py::arg("n"), py::arg("p"), py::arg("palette"), py::arg("tree"), py::arg("eps"), py::arg("d"),
        py::arg("seed") = 0, py::arg("knobs") = py::dict());

  m.def("embed_spanning",
        [](const ColouredGraph& g, const Tree& t, double p, double delta, double alpha, int d,
           std::optional<double> eps_override, std::uint64_t seed, const py::dict& knobs) {
          SpanningConfig cfg;
          cfg.p = p;
          cfg.delta = delta;
          cfg.alpha = alpha;
          cfg.d = d;
          cfg.eps_override = eps_override;
          cfg.knobs = knobs_from(knobs);
          RandomSource rng(seed);
          auto r = embed_spanning(g, t, cfg, rng);
          py::dict out;
          out["ok"] = r.ok;
          out["failed_stage"] = r.failed_stage;
          out["embedding"] = r.embedding;
          out["edge_colours"] = r.edge_colours;
          out["trace"] = trace_lines(r.trace);
          out["absorb_lines"] = r.absorb_lines;
          out["eps"] = r.eps;
          out["eps_paper"] = r.eps_paper;
          out["leftover"] = r.leftover;
          out["absorbed"] = r.absorbed;
          out["validity_problems"] = r.validity_problems;
          return out;
        },
        py::arg("g"), py::arg("tree"), py::arg("p"), py::arg("delta") = 0.4, py::arg("alpha") = 0.25,
        py::arg("d") = 3, py::arg("eps_override") = py::none(), py::arg("seed") = 0, py::arg("knobs") = py::dict());

  m.def("run_trials", [](const py::dict& config) {
    auto recs = run_trials(config_from(config));
    py::list out;
    for (const auto& r : recs) out.append(record_dict(r));
    return out;
  }, py::arg("config"));
  m.def("run_single_trial", [](const py::dict& config, int trial) {
    return record_dict(run_single_trial(config_from(config), trial));
  }, py::arg("config"), py::arg("trial"));
  m.def("lemma_stats", [](const py::dict& config) {
    auto s = lemma_stats(config_from(config));
    py::dict out;
    out["lemma"] = to_string(s.kind);
    out["trials"] = s.trials;
    out["violations"] = s.violations;
    out["frequency"] = s.frequency;
    out["bound"] = s.bound;
    out["mean_statistic"] = s.mean_statistic;
    out["min_statistic"] = s.min_statistic;
    out["triples"] = s.triples;
    out["triple_violations"] = s.triple_violations;
    return out;
  }, py::arg("config"));
  m.def("wilson_interval", [](int successes, int trials) {
    auto e = wilson_interval(successes, trials);
    return py::make_tuple(e.point, e.lower, e.upper);
  }, py::arg("successes"), py::arg("trials"));
}
