#pragma once

#include <iosfwd>

#include "rainbow/graph.hpp"

namespace rainbow {

// Edge-list text format: header "n k" (k = 0 for an uncoloured graph), then
// one "u v" or "u v c" line per edge in sorted canonical order.
void write_edge_list(std::ostream& out, const ColouredGraph& g);
ColouredGraph read_edge_list(std::istream& in);

}  // namespace rainbow
