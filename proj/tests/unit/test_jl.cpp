#include <chrono>
#include <cmath>

#include "mdr/jl.hpp"
#include "support.hpp"

using namespace mdr;

namespace {

// tests/oracles/jl_oracle.py: (decimal exponent of n, alpha, projection k, gaussian k)
struct GridCell {
    int e;
    double alpha;
    std::int64_t kp, kg;
};

const GridCell kGrid[] = {
    {3, 1.5, 218, 279}, {3, 2, 89, 98},   {3, 4, 26, 27},   {3, 10, 11, 11}, {4, 1.5, 373, 388}, {4, 2, 134, 136},
    {4, 4, 37, 37},     {4, 10, 16, 16},  {5, 1.5, 495, 498}, {5, 2, 173, 174}, {5, 4, 47, 47},   {5, 10, 20, 20},
    {6, 1.5, 608, 609}, {6, 2, 212, 212}, {6, 4, 57, 58},   {6, 10, 24, 24}, {7, 1.5, 719, 720}, {7, 2, 251, 251},
    {7, 4, 68, 68},     {7, 10, 28, 28},  {8, 1.5, 831, 831}, {8, 2, 290, 290}, {8, 4, 78, 78},   {8, 10, 33, 33},
    {9, 1.5, 942, 943}, {9, 2, 328, 329}, {9, 4, 89, 89},   {9, 10, 37, 37},
};

std::int64_t pow10(int e)
{
    std::int64_t n = 1;
    while (e-- > 0) n *= 10;
    return n;
}

}  // namespace

TEST_SUITE("jl") {

TEST_CASE("gaussian dimensions quoted for n = 1e9")
{
    for (auto [alpha, k] : {std::pair{2.0, 329}, {10.0, 37}, {450.0, 9}}) {
        const auto t0 = std::chrono::steady_clock::now();
        CHECK(jl_min_dim_gaussian(1000000000, alpha) == k);
        CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 1.0);
    }
}

TEST_CASE("dimension grid matches the extended-precision oracle")
{
    for (const auto& c : kGrid) {
        CAPTURE(c.e);
        CAPTURE(c.alpha);
        const MinDim md = jl_min_dim_projection(pow10(c.e), c.alpha);
        CHECK(md.feasible);
        CHECK(md.k == c.kp);
        CHECK(jl_min_dim_gaussian(pow10(c.e), c.alpha) == c.kg);
        CHECK(c.kp <= c.kg);
    }
    CHECK(jl_min_dim_projection(64, 2.0).k == 29);
}

TEST_CASE("dimension is non-increasing in alpha and non-decreasing in n")
{
    for (int e = 3; e <= 9; ++e) {
        std::int64_t prev = jl_min_dim_projection(pow10(e), 1.5).k;
        for (double a : {2.0, 4.0, 10.0}) {
            const auto k = jl_min_dim_projection(pow10(e), a).k;
            CHECK(k <= prev);
            prev = k;
        }
    }
    CHECK(jl_min_dim_gaussian(1000, 2.0) <= jl_min_dim_gaussian(100000, 2.0));
}

TEST_CASE("psi closed form at n = 5, k = 2")
{
    for (double alpha : {1.2, 2.0, 4.0})
        for (double sigma : {1.0, 1.1, 1.5, 2.0, 3.0, 8.0}) {
            const double want = std::min(1.0, alpha * alpha / (sigma * sigma)) - 1.0 / (sigma * sigma);
            CHECK(std::abs(psi(5, 2, alpha, sigma).value - want) <= 1e-10);
        }
}

TEST_CASE("psi matches the defining integral")
{
    // mpmath quadrature of the integral (tests/oracles/jl_oracle.py)
    struct Cell {
        int n, k;
        double alpha, sigma, want;
    };
    const Cell cells[] = {
        {6, 1, 1.5, 1.2, 0.039351851851851837717},    {8, 3, 2.0, 1.8, 0.65071381395112535852},
        {10, 2, 3.0, 2.5, 0.54322218894062123905},    {12, 5, 1.5, 1.3, 0.2593438668120708314},
        {200, 3, 4.0, 3.0, 0.000037692112560396277113},
    };
    for (const auto& c : cells) {
        CAPTURE(c.n);
        CHECK(psi(c.n, c.k, c.alpha, c.sigma).value == doctest::Approx(c.want).epsilon(1e-10));
    }
    CHECK(psi(20, 5, 2.0, sigma_max(20, 5, 2.0)).value == doctest::Approx(0.7822603641596307868).epsilon(1e-10));
    CHECK(psi(64, 29, 2.0, sigma_max(64, 29, 2.0)).value == doctest::Approx(0.99952649579909321734).epsilon(1e-12));
    CHECK(psi_failure(64, 29, 2.0, sigma_max(64, 29, 2.0)) ==
          doctest::Approx(1.0 - 0.99952649579909321734).epsilon(1e-8));
}

TEST_CASE("psi vanishes below 1 and at sigma >> alpha")
{
    CHECK(psi(10, 2, 2.0, 0.7).value == 0.0);
    CHECK(psi(10, 2, 2.0, 1.0).value == 0.0);
    CHECK(psi(10, 2, 2.0, 1e4).value < 1e-6);
}

TEST_CASE("psi domain errors")
{
    CHECK_ERRC(psi(5, 3, 2.0, 1.5), Errc::ParameterDomain);
    CHECK_ERRC(psi(10, 2, 1.0, 1.5), Errc::ParameterDomain);
    CHECK_ERRC(psi(10, 0, 2.0, 1.5), Errc::ParameterDomain);
    CHECK_ERRC(sigma_max(6, 3, 2.0), Errc::ParameterDomain);
}

TEST_CASE("printed prefactor differs from the normalised constant")
{
    const double a = psi(5, 2, 2.0, 1.5).value;
    const double b = psi(5, 2, 2.0, 1.5, PsiPrefactor::printed).value;
    CHECK(std::abs(a - b) > 0.1);
}

TEST_CASE("psi Monte Carlo agrees with quadrature")
{
    const double s = sigma_max(20, 5, 2.0);
    const auto mc = psi_monte_carlo(20, 5, 2.0, s, 100000, 11);
    CHECK(mc.method == ProbabilityEstimate::Method::monte_carlo);
    CHECK(std::abs(mc.value - 0.7822603641596307868) <= 3.0 * mc.std_error);
}

TEST_CASE("psi Monte Carlo is identical serial and parallel")
{
    const auto a = psi_monte_carlo(12, 3, 2.0, 1.7, 20000, 5, Exec::serial);
    const auto b = psi_monte_carlo(12, 3, 2.0, 1.7, 20000, 5, Exec::parallel);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("sigma_max")
{
    CHECK(sigma_max(7, 2, 2.0) == doctest::Approx(2.2360679774997896964).epsilon(1e-14));
    const double s = sigma_max(30, 4, 3.0);
    const double p = psi(30, 4, 3.0, s).value;
    CHECK(psi(30, 4, 3.0, s * 1.001).value <= p);
    CHECK(psi(30, 4, 3.0, s * 0.999).value <= p);
}

TEST_CASE("gaussian success probability")
{
    // mpmath regularized incomplete gamma
    CHECK(gaussian_success_prob(1, 2.0).value == doctest::Approx(0.32267456883476866475).epsilon(1e-12));
    CHECK(gaussian_success_prob(2, 2.0).value == doctest::Approx(0.47247039371057743679).epsilon(1e-12));
    CHECK(gaussian_success_prob(10, 2.0).value == doctest::Approx(0.86768925038197348228).epsilon(1e-12));
    CHECK(gaussian_success_prob(5, 1.5).value == doctest::Approx(0.46308958585759747666).epsilon(1e-12));
    CHECK(gaussian_success_prob(50, 4.0).value == doctest::Approx(0.99999999995492878287).epsilon(1e-14));
    CHECK(gaussian_failure_prob(50, 4.0) == doctest::Approx(1.0 - 0.99999999995492878287).epsilon(1e-6));
    CHECK(gaussian_success_prob(2, 2.0).method == ProbabilityEstimate::Method::quadrature);
}

TEST_CASE("gaussian sigma solves the stationarity condition")
{
    for (int k : {1, 3, 10})
        for (double a : {1.5, 3.0}) {
            const double s = gaussian_sigma(k, a);
            CHECK(s * s == doctest::Approx((a * a - 1.0) / (2.0 * k * std::log(a))));
        }
}

TEST_CASE("gaussian Monte Carlo agrees")
{
    const auto mc = gaussian_monte_carlo(10, 2.0, 100000, 3);
    CHECK(std::abs(mc.value - 0.86768925038197348228) <= 3.0 * mc.std_error);
}

TEST_CASE("haar projection dominates the gaussian matrix")
{
    for (int n : {8, 30})
        for (int k : {1, 2, 4})
            CHECK(gaussian_success_prob(k, 2.0).value <= psi(n, k, 2.0, sigma_max(n, k, 2.0)).value + 1e-9);
}

TEST_CASE("haar sampling")
{
    const Matrix o = sample_haar_orthogonal(7, 1);
    CHECK((o.transpose() * o - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sample_haar_orthogonal(7, 1) == o);
    CHECK(sample_haar_orthogonal(1, 4).cwiseAbs()(0, 0) == doctest::Approx(1.0));
    CHECK_ERRC(sample_haar_orthogonal(0, 1), Errc::ParameterDomain);
}

TEST_CASE("plans")
{
    const JlPlan h = make_plan(64, 2.0, JlMode::haar_projection);
    CHECK(h.k == 29);
    CHECK(h.haar_dim == 63);
    CHECK(h.union_bound > 0.0);
    CHECK(h.union_bound == doctest::Approx(1.0 - 2016.0 * (1.0 - 0.99952649579909321734)).epsilon(1e-8));
    const JlPlan g = make_plan(1000000000, 2.0, JlMode::scaled_gaussian);
    CHECK(g.k == 329);
    CHECK(g.union_bound > 0.0);
    CHECK_ERRC(make_plan(10, 1.0, JlMode::haar_projection), Errc::ParameterDomain);
    CHECK_ERRC(make_plan(5, 1.01, JlMode::haar_projection), Errc::NoFeasibleK);
}

TEST_CASE("jl transform keeps the distortion budget")
{
    PointCloud simplex = cloud_of(Matrix::Identity(64, 64));
    const JlResult r = jl_transform(simplex, 2.0, JlMode::haar_projection, 17);
    CHECK(r.success);
    CHECK(r.image.dim() == 29);
    CHECK(r.min_ratio >= 1.0);
    CHECK(r.max_ratio <= 2.0);
    const JlResult again = jl_transform(simplex, 2.0, JlMode::haar_projection, 17);
    CHECK(again.image.coords == r.image.coords);

    const JlResult g = jl_transform(simplex, 4.0, JlMode::scaled_gaussian, 3);
    CHECK(g.success);
    CHECK(g.image.dim() == g.plan.k);
}

TEST_CASE("jl transform errors")
{
    Matrix x = Matrix::Zero(3, 2);
    x(1, 0) = 1.0;
    CHECK_ERRC(jl_transform(cloud_of(x), 2.0, JlMode::scaled_gaussian, 1), Errc::ZeroDistancePair);
    CHECK_ERRC(jl_transform(cloud_of(Matrix::Identity(4, 4), Norm::l1), 2.0, JlMode::scaled_gaussian, 1),
               Errc::ParameterDomain);
}

TEST_CASE("jl transform reports a failed budget without throwing")
{
    JlOptions o;
    o.k = 1;
    o.max_retries = 3;
    const JlResult r = jl_transform(cloud_of(Matrix::Identity(30, 30)), 1.05, JlMode::scaled_gaussian, 2, o);
    CHECK_FALSE(r.success);
    CHECK(r.attempts == 3);
    CHECK(r.distortion > 1.05);
}

TEST_CASE("span coordinates are isometric")
{
    Matrix x(4, 5);
    x.setRandom();
    x.row(3) = 0.5 * (x.row(0) + x.row(1));
    const PointCloud c = cloud_of(x);
    const PointCloud s = span_coordinates(c);
    CHECK(s.dim() == 2);
    CHECK((s.pairwise() - c.pairwise()).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
