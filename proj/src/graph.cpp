#include "mdr/graph.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

#include "mdr/parallel.hpp"

namespace mdr {

std::vector<std::vector<int>> Graph::adjacency() const
{
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges) {
        adj[e.u].push_back(e.v);
        if (e.u != e.v) adj[e.v].push_back(e.u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

std::vector<int> bfs_hops(const std::vector<std::vector<int>>& adj, int src)
{
    std::vector<int> dist(adj.size(), kUnreachable);
    std::deque<int> q{src};
    dist[src] = 0;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (int v : adj[u])
            if (dist[v] == kUnreachable) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
    }
    return dist;
}

std::vector<int> all_pairs_hops(const Graph& g, Exec exec)
{
    const auto adj = g.adjacency();
    const std::size_t n = static_cast<std::size_t>(g.n);
    std::vector<int> out(n * n);
    parallel_for(
        n,
        [&](std::size_t s) {
            const auto d = bfs_hops(adj, static_cast<int>(s));
            std::copy(d.begin(), d.end(), out.begin() + static_cast<std::ptrdiff_t>(s * n));
        },
        exec);
    return out;
}

bool is_connected(const Graph& g)
{
    if (g.n <= 1) return true;
    const auto d = bfs_hops(g.adjacency(), 0);
    return std::none_of(d.begin(), d.end(), [](int x) { return x == kUnreachable; });
}

int girth(const Graph& g, Exec exec)
{
    const auto adj = g.adjacency();
    const int n = g.n;
    std::vector<int> best(n, kUnreachable);
    parallel_for(
        n,
        [&](std::size_t ss) {
            const int s = static_cast<int>(ss);
            std::vector<int> dist(n, -1), par(n, -1);
            std::deque<int> q{s};
            dist[s] = 0;
            int b = kUnreachable;
            while (!q.empty()) {
                const int u = q.front();
                q.pop_front();
                if (2 * dist[u] + 1 >= b) break;
                for (int v : adj[u]) {
                    if (dist[v] < 0) {
                        dist[v] = dist[u] + 1;
                        par[v] = u;
                        q.push_back(v);
                    } else if (par[u] != v) {
                        b = std::min(b, dist[u] + dist[v] + 1);
                    }
                }
            }
            best[s] = b;
        },
        exec);
    return *std::min_element(best.begin(), best.end());
}

Graph random_regular_graph(int n, int r, std::uint64_t seed)
{
    if (r < 3 || n <= r || (static_cast<long long>(n) * r) % 2 != 0)
        fail(Errc::ParameterDomain, "need r >= 3, n > r and n*r even");
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * r);
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < r; ++i) stubs.push_back(v);
    for (std::uint64_t attempt = 0; attempt < 20000; ++attempt) {
        std::mt19937_64 rng(derive_seed(seed, attempt));
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::set<std::pair<int, int>> seen;
        Graph g;
        g.n = n;
        bool ok = true;
        for (std::size_t i = 0; i < stubs.size(); i += 2) {
            int a = stubs[i], b = stubs[i + 1];
            if (a == b) {
                ok = false;
                break;
            }
            if (a > b) std::swap(a, b);
            if (!seen.insert({a, b}).second) {
                ok = false;
                break;
            }
            g.edges.push_back({a, b, 1.0});
        }
        if (ok) {
            std::sort(g.edges.begin(), g.edges.end(),
                      [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
            return g;
        }
    }
    fail(Errc::GenerationFailure, "pairing model kept producing loops or multi-edges");
}

}  // namespace mdr
