#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mdr/common.hpp"

namespace mdr {

struct Edge {
    int u = 0, v = 0;
    double w = 1.0;
};

struct Graph {
    int n = 0;
    std::vector<Edge> edges;

    std::vector<std::vector<int>> adjacency() const;  // sorted neighbour lists
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

std::vector<int> bfs_hops(const std::vector<std::vector<int>>& adj, int src);
// row-major n*n hop counts, kUnreachable across components
std::vector<int> all_pairs_hops(const Graph& g, Exec exec = Exec::parallel);

bool is_connected(const Graph& g);

// shortest cycle length; kUnreachable for forests
int girth(const Graph& g, Exec exec = Exec::parallel);

Graph random_regular_graph(int n, int r, std::uint64_t seed);

}  // namespace mdr
