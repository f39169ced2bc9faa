#pragma once

#include <cstddef>
#include <vector>

namespace freqmon {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Tarjan's algorithm, iterative. Returns the component id of every vertex;
/// ids are assigned in reverse topological order of the condensation.
std::vector<std::size_t> strongly_connected_components(const Adjacency& graph);

bool is_strongly_connected(const Adjacency& graph);

}  // namespace freqmon
