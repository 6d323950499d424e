#pragma once

#include <string>

#include "moore/machine.hpp"

namespace moore {

/// Graphviz digraph of `m`: one node per state labeled "name/output", a
/// point-shaped start marker pointing at the initial state, and one edge per
/// (state, input). Nodes and edges follow state and letter order.
std::string to_dot(const MooreMachine& m);

} // namespace moore
