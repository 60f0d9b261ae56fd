#pragma once

#include <cstdint>
#include <random>

#include "mdr/metric.hpp"

namespace mdr {

Matrix sample_haar_orthogonal(int m, std::mt19937_64& rng);
Matrix sample_haar_orthogonal(int m, std::uint64_t seed);

struct ProbabilityEstimate {
    enum class Method { quadrature, chi_square_cdf, monte_carlo };
    double value = 0.0;
    double std_error = 0.0;
    Method method = Method::quadrature;
    std::uint64_t samples = 0;
};

const char* method_name(ProbabilityEstimate::Method m);

// printed: the prefactor 2 pi^{k/2} / Gamma(k/2) instead of the normalizing constant (fault injection only)
enum class PsiPrefactor { normalized, printed };

ProbabilityEstimate psi(std::int64_t n, std::int64_t k, double alpha, double sigma,
                        PsiPrefactor pref = PsiPrefactor::normalized);
// 1 - psi through the radial Beta(k/2, (n-1-k)/2) law; accurate when psi is within 1e-16 of 1
double psi_failure(std::int64_t n, std::int64_t k, double alpha, double sigma);
ProbabilityEstimate psi_monte_carlo(int n, int k, double alpha, double sigma, std::uint64_t samples,
                                    std::uint64_t seed, Exec exec = Exec::parallel);

double sigma_max(std::int64_t n, std::int64_t k, double alpha);

struct MinDim {
    std::int64_t k = 0;
    bool feasible = true;
    bool linear_fallback = false;
};
MinDim jl_min_dim_projection(std::int64_t n, double alpha);

double gaussian_sigma(std::int64_t k, double alpha);
double gaussian_failure_prob(std::int64_t k, double alpha);
ProbabilityEstimate gaussian_success_prob(std::int64_t k, double alpha);
ProbabilityEstimate gaussian_monte_carlo(int k, double alpha, std::uint64_t samples, std::uint64_t seed,
                                         Exec exec = Exec::parallel);
std::int64_t jl_min_dim_gaussian(std::int64_t n, double alpha);

enum class JlMode { haar_projection, scaled_gaussian };
const char* mode_name(JlMode m);

struct JlPlan {
    std::int64_t n = 0;
    double alpha = 0.0;
    std::int64_t k = 0;
    double sigma = 0.0;
    JlMode mode = JlMode::haar_projection;
    double success_prob = 0.0;
    double union_bound = 0.0;
    std::int64_t haar_dim = 0;  // side of the orthogonal matrix (haar mode)
};

// k = 0 selects the matching minimal dimension; haar_dim = 0 selects max(n-1, k+3)
JlPlan make_plan(std::int64_t n, double alpha, JlMode mode, std::int64_t k = 0, std::int64_t haar_dim = 0);

struct JlOptions {
    std::int64_t k = 0;
    std::int64_t haar_dim = 0;
    int max_retries = 20;
};

struct JlResult {
    PointCloud image;
    JlPlan plan;
    int attempts = 0;
    bool success = false;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double distortion = 0.0;
};

JlResult jl_transform(const PointCloud& cloud, double alpha, JlMode mode, std::uint64_t seed, JlOptions opt = {});

// orthonormal coordinates of the centred cloud in its own span (isometric, dim = rank)
PointCloud span_coordinates(const PointCloud& cloud);

}  // namespace mdr
