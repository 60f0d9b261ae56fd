#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mdr/graph.hpp"
#include "mdr/metric.hpp"

namespace mdr {

struct ReversibleChain {
    Matrix A;
    Vector pi;

    int size() const { return static_cast<int>(A.rows()); }
    // validates stochasticity, detailed balance and stationarity
    static ReversibleChain make(Matrix A, Vector pi);
};

ReversibleChain chain_from_graph(const Graph& g);
// Metropolis chain for target pi with a random symmetric proposal; density in (0,1]
ReversibleChain random_reversible_chain(const Vector& pi, std::mt19937_64& rng, double density = 1.0);
Vector random_distribution(int n, std::mt19937_64& rng);

Vector chain_spectrum(const ReversibleChain& c);  // decreasing
double lambda2(const ReversibleChain& c);

// pairwise distances d(x_i, x_j) of a configuration i -> x_i
struct Configuration {
    Matrix dist;
    int size() const { return static_cast<int>(dist.rows()); }
};
Configuration configuration(const FiniteMetric& m, const std::vector<int>& x);
Configuration configuration(const PointCloud& c);

double rayleigh(const Configuration& x, const Matrix& A, const Vector& pi, double p);
double rayleigh(const Configuration& x, const ReversibleChain& c, double p);

double gamma_hilbert(const ReversibleChain& c);
double gamma_bruteforce(const ReversibleChain& c, const FiniteMetric& m, double p);
// max of 1/R over sampled configurations in (R^dim, norm): a certified lower bound on gamma(A, ||.||^p)
double gamma_sampled_lower_bound(const ReversibleChain& c, Norm norm, int dim, double p, int samples,
                                 std::uint64_t seed);

struct HilbertIdentity {
    double lhs = 0.0;       // ||(A (x) I) x|| / ||x|| after centring
    double rhs = 0.0;       // sqrt(1 - R(x; A^2, ||.||_2^2))
    double rayleigh_a2 = 0.0;
};
HilbertIdentity hilbert_rayleigh_identity(const PointCloud& x, const ReversibleChain& c);

// built-in Hilbert companion H of X with ||y||_H <= ||y||_X <= d ||y||_H
struct HilbertPair {
    double h_scale = 1.0;  // ||y||_H = h_scale * ||y||_2
    double d = 1.0;
};
HilbertPair hilbert_pair(const PointCloud& x);

struct TParameter {
    int t = 0;
    double hilbert_rayleigh = 0.0;
};
// d <= 0 uses the built-in pair's d
TParameter t_parameter(const PointCloud& x, const ReversibleChain& c, double d = 0.0, int t_cap = 4096);
int t_upper_bound(double lambda2, double d);

struct PowerCheck {
    int t = 0;
    double value = 0.0;        // R(x; L^t, ||.||_X^2), L = (I + A)/2
    double rayleigh_a = 0.0;   // R(x; A, ||.||_X^2)
};
PowerCheck power_expander_check(const PointCloud& x, const ReversibleChain& c, int t_cap = 4096);

struct DimExponent {
    double alpha_hat = 0.0;
    double exponent = 0.0;
};
DimExponent dim_lower_exponent(const PointCloud& f, const ReversibleChain& c);

struct CheegerCut {
    std::vector<int> side;  // vertices of the smaller-index prefix set
    double conductance = 0.0;
};
double conductance(const ReversibleChain& c, const std::vector<char>& in_set);
CheegerCut cheeger_sweep(const ReversibleChain& c);

struct MarkovChainSpec {
    Matrix P;        // transition matrix
    Vector init;     // law of chi_0
    int horizon = 2; // T; times 0..T
    Matrix fdist;    // d(f(a), f(b)) for states a, b
    double q = 2.0;
};

enum class McMethod { automatic, monte_carlo, exact };

struct MarkovConvexity {
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
    double lhs_q = 0.0, rhs_q = 0.0;        // inner sums (before the 1/q power)
    double lhs_q_se = 0.0, rhs_q_se = 0.0;  // zero for the exact method
    bool exact = false;
    std::uint64_t samples = 0;
};
MarkovConvexity markov_convexity_ratio(const MarkovChainSpec& spec, std::uint64_t samples, std::uint64_t seed,
                                       McMethod method = McMethod::automatic, Exec exec = Exec::parallel);

}  // namespace mdr
