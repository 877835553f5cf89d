#include "rainbow/graph_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rainbow/errors.hpp"

namespace rainbow {

void write_edge_list(std::ostream& out, const ColouredGraph& g) {
  out << g.n() << ' ' << g.palette() << '\n';
  const auto& edges = g.edges();
  for (std::size_t id = 0; id < edges.size(); ++id) {
    out << edges[id].u << ' ' << edges[id].v;
    if (g.is_coloured()) out << ' ' << g.colour(static_cast<int>(id));
    out << '\n';
  }
}

ColouredGraph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("edge list: missing header");
  std::istringstream header(line);
  int n = 0, k = 0;
  if (!(header >> n >> k) || n < 0 || k < 0)
    throw ParameterError("edge list: malformed header '" + line + "'");
  std::vector<Edge> edges;
  std::vector<int> colours;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    int u = 0, v = 0, c = 0;
    if (!(row >> u >> v))
      throw ParameterError("edge list: bad edge on line " + std::to_string(lineno));
    if (k > 0) {
      if (!(row >> c))
        throw ParameterError("edge list: missing colour on line " +
                             std::to_string(lineno));
      colours.push_back(c);
    }
    edges.push_back({u, v});
  }
  if (k > 0)
    return ColouredGraph::from_coloured_edges(n, std::move(edges),
                                              std::move(colours), k);
  return ColouredGraph::from_edges(n, std::move(edges));
}

}  // namespace rainbow
