#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mdr/graph.hpp"
#include "mdr/metric.hpp"

namespace mdr {

// bipartite template: left vertex l and right vertex r appear as graph vertices l and n + r
struct TemplateGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // (l, r), sorted
    int girth = kUnreachable;

    Graph graph() const;
};

TemplateGraph gen_template(int n, int g, std::uint64_t seed);

// +1 / -1 per template edge
std::vector<int> random_signs(std::size_t m, std::uint64_t seed);

struct SignedMetricParams {
    double s = 1.0;
    double T = 1.0;
};

// G_sigma on 3n vertices: L+ = 0..n-1, L- = n..2n-1, R = 2n..3n-1
Graph signed_graph(const TemplateGraph& t, const std::vector<int>& sigma);
FiniteMetric signed_metric(const TemplateGraph& t, const std::vector<int>& sigma, SignedMetricParams params);
// hop distance between lambda+ and lambda- in G_sigma (kUnreachable if disconnected)
std::vector<int> fork_hops(const TemplateGraph& t, const std::vector<int>& sigma);

struct ModulusPair {
    enum Kind { power, tabulated } kind = power;
    // power: omega(s) = tau_omega s^theta, Omega(s) = tau_Omega s^theta
    double tau_omega = 1.0, tau_Omega = 1.0, theta = 1.0;
    // tabulated: strictly increasing samples
    std::vector<double> s, omega, Omega;

    static ModulusPair power_family(double tau_omega, double tau_Omega, double theta);
    static ModulusPair table(std::vector<double> s, std::vector<double> omega, std::vector<double> Omega);
    double eval_omega(double x) const;
    double eval_Omega(double x) const;
    double omega_inverse(double y) const;
};

double beta_modulus(const ModulusPair& pair, const std::vector<double>& grid = {});
double coarse_dim_exponent(double n_points, const ModulusPair& pair, const std::vector<double>& grid = {});

struct HarnessRow {
    int trial = 0;
    int n = 0, g = 0;
    double s = 0, T = 0;
    std::size_t edges = 0;
    int girth = 0;  // kUnreachable for forests
    double min_fork_dist = 0;
    double doubling_lb = 0;
    double volumetric_lb = 0;
};

std::vector<HarnessRow> experiment_harness(int n, int g, double s, double T, int trials, std::uint64_t seed,
                                           double alpha = 2.0, Exec exec = Exec::parallel);
std::string harness_csv(const std::vector<HarnessRow>& rows);

}  // namespace mdr
