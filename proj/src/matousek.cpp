#include "mdr/matousek.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include "mdr/io.hpp"
#include "mdr/parallel.hpp"

namespace mdr {

Graph TemplateGraph::graph() const
{
    Graph g;
    g.n = 2 * n;
    for (const auto& [l, r] : edges) g.edges.push_back({l, n + r, 1.0});
    return g;
}

namespace {

// deletes one edge closing a cycle shorter than g found by BFS from root; false if none
bool prune_from(std::vector<std::vector<int>>& adj, int root, int g)
{
    const int V = static_cast<int>(adj.size());
    std::vector<int> dist(V, -1), par(V, -1);
    std::deque<int> q{root};
    dist[root] = 0;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        if (2 * dist[u] + 1 >= g) break;
        for (int v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                par[v] = u;
                q.push_back(v);
            } else if (v != par[u] && dist[u] + dist[v] + 1 < g) {
                adj[u].erase(std::find(adj[u].begin(), adj[u].end(), v));
                adj[v].erase(std::find(adj[v].begin(), adj[v].end(), u));
                return true;
            }
        }
    }
    return false;
}

}  // namespace

TemplateGraph gen_template(int n, int g, std::uint64_t seed)
{
    if (n < 2) fail(Errc::ParameterDomain, "template needs n >= 2");
    if (g < 4 || g % 2 != 0) fail(Errc::ParameterDomain, "girth target must be even and at least 4");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(std::pow(static_cast<double>(n), -1.0 + 2.0 / g));
    std::vector<std::vector<int>> adj(2 * n);
    for (int l = 0; l < n; ++l)
        for (int r = 0; r < n; ++r)
            if (coin(rng)) {
                adj[l].push_back(n + r);
                adj[n + r].push_back(l);
            }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    for (int root = 0; root < 2 * n; ++root)
        while (prune_from(adj, root, g)) {
        }
    TemplateGraph t;
    t.n = n;
    for (int l = 0; l < n; ++l)
        for (int v : adj[l]) t.edges.emplace_back(l, v - n);
    t.girth = girth(t.graph(), Exec::serial);
    return t;
}

std::vector<int> random_signs(std::size_t m, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<int> s(m);
    for (auto& x : s) x = coin(rng) ? 1 : -1;
    return s;
}

Graph signed_graph(const TemplateGraph& t, const std::vector<int>& sigma)
{
    if (sigma.size() != t.edges.size()) fail(Errc::IndexMismatch, "sign assignment must cover every template edge");
    Graph g;
    g.n = 3 * t.n;
    for (std::size_t e = 0; e < t.edges.size(); ++e) {
        const auto [l, r] = t.edges[e];
        if (sigma[e] != 1 && sigma[e] != -1) fail(Errc::InvalidInput, "signs must be +1 or -1");
        g.edges.push_back({sigma[e] > 0 ? l : t.n + l, 2 * t.n + r, 1.0});
    }
    return g;
}

FiniteMetric signed_metric(const TemplateGraph& t, const std::vector<int>& sigma, SignedMetricParams params)
{
    if (!(params.s > 0.0) || !(params.T >= params.s)) fail(Errc::ParameterDomain, "need s > 0 and T >= s");
    const Graph g = signed_graph(t, sigma);
    const auto hops = all_pairs_hops(g, Exec::serial);
    const int V = g.n;
    Matrix d(V, V);
    for (int i = 0; i < V; ++i)
        for (int j = 0; j < V; ++j) {
            const int h = hops[static_cast<std::size_t>(i) * V + j];
            d(i, j) = h == kUnreachable ? params.T : std::min(params.s * h, params.T);
        }
    return FiniteMetric::build(d, Exec::serial);
}

std::vector<int> fork_hops(const TemplateGraph& t, const std::vector<int>& sigma)
{
    const auto adj = signed_graph(t, sigma).adjacency();
    std::vector<int> out(t.n);
    for (int l = 0; l < t.n; ++l) out[l] = bfs_hops(adj, l)[t.n + l];
    return out;
}

ModulusPair ModulusPair::power_family(double tau_omega, double tau_Omega, double theta)
{
    if (!(tau_omega > 0.0) || !(tau_Omega >= tau_omega) || !(theta > 0.0 && theta <= 1.0))
        fail(Errc::ParameterDomain, "need 0 < tau_omega <= tau_Omega and theta in (0,1]");
    ModulusPair p;
    p.kind = power;
    p.tau_omega = tau_omega;
    p.tau_Omega = tau_Omega;
    p.theta = theta;
    return p;
}

ModulusPair ModulusPair::table(std::vector<double> s, std::vector<double> omega, std::vector<double> Omega)
{
    if (s.size() < 2 || omega.size() != s.size() || Omega.size() != s.size())
        fail(Errc::ParameterDomain, "tabulated moduli need matching sample vectors of length >= 2");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i && !(s[i] > s[i - 1] && omega[i] > omega[i - 1] && Omega[i] > Omega[i - 1]))
            fail(Errc::ParameterDomain, "tabulated moduli must be strictly increasing");
        if (omega[i] > Omega[i]) fail(Errc::ParameterDomain, "omega exceeds Omega at a sample");
    }
    ModulusPair p;
    p.kind = tabulated;
    p.s = std::move(s);
    p.omega = std::move(omega);
    p.Omega = std::move(Omega);
    return p;
}

namespace {

double interp(const std::vector<double>& x, const std::vector<double>& y, double v)
{
    if (v < x.front() || v > x.back()) fail(Errc::InverseOutOfRange, "value outside the tabulated range");
    auto it = std::upper_bound(x.begin(), x.end(), v);
    if (it == x.end()) return y.back();
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double w = (v - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + w * (y[i] - y[i - 1]);
}

}  // namespace

double ModulusPair::eval_omega(double x) const
{
    return kind == power ? tau_omega * std::pow(x, theta) : interp(s, omega, x);
}

double ModulusPair::eval_Omega(double x) const
{
    return kind == power ? tau_Omega * std::pow(x, theta) : interp(s, Omega, x);
}

double ModulusPair::omega_inverse(double y) const
{
    return kind == power ? std::pow(y / tau_omega, 1.0 / theta) : interp(omega, s, y);
}

double beta_modulus(const ModulusPair& pair, const std::vector<double>& grid)
{
    if (pair.kind == ModulusPair::power) return std::pow(pair.tau_omega / (2.0 * pair.tau_Omega), 1.0 / pair.theta);
    const bool own_grid = grid.empty();
    const std::vector<double>& pts = own_grid ? pair.s : grid;
    const double top = pair.omega.back();
    double best = 0.0;
    bool any = false;
    for (double x : pts) {
        if (!(x > 0.0)) continue;
        const double y = 2.0 * pair.eval_Omega(x);
        if (own_grid && y > top) continue;
        best = std::max(best, x / pair.omega_inverse(y));
        any = true;
    }
    if (!any) fail(Errc::InverseOutOfRange, "2*Omega(s) leaves the tabulated range of omega at every grid point");
    return best;
}

double coarse_dim_exponent(double n_points, const ModulusPair& pair, const std::vector<double>& grid)
{
    if (!(n_points >= 2.0)) fail(Errc::ParameterDomain, "need at least two points");
    return beta_modulus(pair, grid) * std::log(n_points);
}

std::vector<HarnessRow> experiment_harness(int n, int g, double s, double T, int trials, std::uint64_t seed,
                                           double alpha, Exec exec)
{
    if (!(s > 0.0) || !(T >= s) || g < 1 || g > T / s)
        fail(Errc::ParameterDomain, "need s > 0 and 1 <= g <= T/s");
    if (trials < 0) fail(Errc::ParameterDomain, "trials must be nonnegative");
    std::vector<HarnessRow> rows(trials);
    parallel_for(
        trials,
        [&](std::size_t i) {
            const TemplateGraph t = gen_template(n, g, derive_seed(seed, 2 * i));
            const auto sigma = random_signs(t.edges.size(), derive_seed(seed, 2 * i + 1));
            const FiniteMetric m = signed_metric(t, sigma, {s, T});
            HarnessRow& r = rows[i];
            r.trial = static_cast<int>(i);
            r.n = n;
            r.g = g;
            r.s = s;
            r.T = T;
            r.edges = t.edges.size();
            r.girth = t.girth;
            r.min_fork_dist = T;
            for (int l = 0; l < n; ++l) r.min_fork_dist = std::min(r.min_fork_dist, m(l, n + l));
            r.doubling_lb = doubling_dim_lower_bound(m, alpha);
            r.volumetric_lb = volumetric_lower_bound(3.0 * n, alpha);
        },
        exec);
    return rows;
}

std::string harness_csv(const std::vector<HarnessRow>& rows)
{
    std::ostringstream os;
    os << "trial,n,g,s,T,edges,girth,min_fork_dist,doubling_lb,volumetric_lb\n";
    for (const auto& r : rows)
        os << r.trial << ',' << r.n << ',' << r.g << ',' << fmt_num(r.s) << ',' << fmt_num(r.T) << ',' << r.edges << ','
           << (r.girth == kUnreachable ? std::string("inf") : std::to_string(r.girth)) << ','
           << fmt_num(r.min_fork_dist) << ',' << fmt_num(r.doubling_lb) << ',' << fmt_num(r.volumetric_lb) << '\n';
    return os.str();
}

}  // namespace mdr
