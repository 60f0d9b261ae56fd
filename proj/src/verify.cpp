#include "mdr/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <Eigen/Eigenvalues>

#include "mdr/graph.hpp"
#include "mdr/matousek.hpp"
#include "mdr/metric.hpp"
#include "mdr/parallel.hpp"
#include "mdr/sdp.hpp"
#include "mdr/spectral.hpp"

namespace mdr {

namespace {

class Tally {
public:
    explicit Tally(std::string name) { r_.name = std::move(name); }

    void check(bool ok, const std::string& what)
    {
        ++r_.trials;
        if (ok) return;
        if (r_.failures == 0) r_.detail = what;
        ++r_.failures;
    }

    // runs one trial; an escaping mdr::Error counts as a failure
    void run(const std::string& label, const std::function<void(Tally&)>& body)
    {
        try {
            body(*this);
        } catch (const Error& e) {
            check(false, label + ": " + errc_name(e.code()) + ": " + e.what());
        }
    }

    PropertyResult done(std::string summary = {})
    {
        if (r_.failures == 0 && !summary.empty()) r_.detail = std::move(summary);
        return r_;
    }

private:
    PropertyResult r_;
};

std::string num(double v) { return fmt_num(v); }

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Graph complete_graph(int n)
{
    Graph g{n, {}};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j, 1.0});
    return g;
}

Graph cycle_graph(int n)
{
    Graph g{n, {}};
    for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n, 1.0});
    return g;
}

PointCloud random_cloud(int n, int dim, Norm norm, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    PointCloud c;
    c.norm = norm;
    c.coords.resize(n, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j) c.coords(i, j) = g(rng);
    return c;
}

ReversibleChain random_chain(int n, std::mt19937_64& rng)
{
    const Vector pi = random_distribution(n, rng);
    const double density = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
    return random_reversible_chain(pi, rng, density);
}

Norm ell(int which)
{
    Norm nm;
    nm.kind = which % 2 == 0 ? Norm::l1 : Norm::linf;
    return nm;
}


}  // namespace

bool SuiteResult::passed() const
{
    return !properties.empty() &&
           std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.ok(); });
}

namespace props {

// ---------------------------------------------------------------- jl

PropertyResult reference_dimensions()
{
    Tally t("reference_dimensions");
    const std::pair<double, std::int64_t> cells[] = {{2.0, 329}, {10.0, 37}, {450.0, 9}};
    for (auto [alpha, want] : cells)
        t.run("gaussian", [&](Tally& t) {
            const auto k = jl_min_dim_gaussian(1000000000, alpha);
            t.check(k == want, "alpha=" + num(alpha) + " gave k=" + std::to_string(k));
        });
    return t.done("k = 329, 37, 9 at n = 1e9");
}

PropertyResult projection_vs_gaussian()
{
    Tally t("projection_vs_gaussian");
    std::int64_t n = 1000;
    for (int e = 3; e <= 9; ++e, n *= 10)
        for (double alpha : {1.5, 2.0, 4.0, 10.0})
            t.run("grid", [&](Tally& t) {
                const auto kp = jl_min_dim_projection(n, alpha).k;
                const auto kg = jl_min_dim_gaussian(n, alpha);
                t.check(kp <= kg, "n=1e" + std::to_string(e) + " alpha=" + num(alpha) + ": " + std::to_string(kp) +
                                      " > " + std::to_string(kg));
            });
    return t.done();
}

PropertyResult psi_closed_form()
{
    Tally t("psi_closed_form");
    for (double alpha : {1.1, 1.5, 2.0, 4.0})
        for (double sigma : {0.5, 1.0, 1.05, 1.3, 1.7, 2.5, 5.0, 10.0})
            t.run("psi", [&](Tally& t) {
                const double want = sigma < 1.0 ? 0.0 : std::min(1.0, alpha * alpha / (sigma * sigma)) - 1.0 / (sigma * sigma);
                const double got = psi(5, 2, alpha, sigma).value;
                t.check(close(got, want, 1e-10), "alpha=" + num(alpha) + " sigma=" + num(sigma) + ": " + num(got) +
                                                     " vs " + num(want));
            });
    return t.done();
}

namespace {

struct PsiCell {
    int n, k;
    double alpha, sigma;
};

std::vector<PsiCell> psi_grid()
{
    return {{5, 2, 2.0, 1.5},  {6, 1, 1.5, 1.2},  {8, 3, 2.0, 1.8},
            {10, 2, 3.0, 2.5}, {12, 5, 1.5, 1.3}, {20, 5, 2.0, sigma_max(20, 5, 2.0)}};
}

}  // namespace

PropertyResult psi_monte_carlo(std::uint64_t samples, std::uint64_t seed, PsiPrefactor pref)
{
    Tally t("psi_monte_carlo");
    const auto grid = psi_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& c = grid[i];
        t.run("cell", [&](Tally& t) {
            const double q = psi(c.n, c.k, c.alpha, c.sigma, pref).value;
            const auto mc = mdr::psi_monte_carlo(c.n, c.k, c.alpha, c.sigma, samples, derive_seed(seed, i));
            const double z = std::abs(q - mc.value) / mc.std_error;
            std::ostringstream os;
            os << "(n,k,alpha,sigma)=(" << c.n << "," << c.k << "," << num(c.alpha) << "," << num(c.sigma)
               << "): quadrature " << num(q) << " vs MC " << num(mc.value) << " +- " << num(mc.std_error);
            t.check(z <= 3.0, os.str());
        });
    }
    return t.done(std::to_string(grid.size()) + " cells within 3 SE at " + std::to_string(samples) + " samples");
}

PropertyResult psi_shape()
{
    Tally t("psi_shape");
    for (int n : {7, 10, 30})
        for (int k : {1, 2, 3})
            for (double alpha : {1.5, 3.0})
                t.run("shape", [&](Tally& t) {
                    const double sm = sigma_max(n, k, alpha);
                    const double peak = psi(n, k, alpha, sm).value;
                    t.check(psi(n, k, alpha, 0.9).value == 0.0, "psi nonzero below 1");
                    for (double f : {0.5, 0.8, 0.95, 1.05, 1.3, 2.0}) {
                        const double v = psi(n, k, alpha, f * sm).value;
                        t.check(v >= 0.0 && v <= peak + 1e-12,
                                "n=" + std::to_string(n) + " k=" + std::to_string(k) + " sigma=" + num(f * sm) +
                                    " exceeds the peak");
                    }
                });
    return t.done();
}

PropertyResult gaussian_dominated()
{
    Tally t("gaussian_dominated");
    for (int n : {8, 12, 20, 50, 200})
        for (int k : {1, 2, 3, 4})
            for (double alpha : {1.5, 2.0, 4.0})
                t.run("cell", [&](Tally& t) {
                    const double g = gaussian_success_prob(k, alpha).value;
                    const double h = psi(n, k, alpha, sigma_max(n, k, alpha)).value;
                    t.check(g <= h + 1e-9, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " alpha=" + num(alpha) +
                                               ": gaussian " + num(g) + " > haar " + num(h));
                });
    return t.done();
}

PropertyResult gaussian_quadrature()
{
    Tally t("gaussian_quadrature");
    for (int k : {1, 2, 5, 10, 50})
        for (double alpha : {1.1, 1.5, 2.0, 4.0, 10.0})
            t.run("cell", [&](Tally& t) {
                const double q = gaussian_success_prob(k, alpha).value;
                const double c = 1.0 - gaussian_failure_prob(k, alpha);
                t.check(close(q, c, 1e-9), "k=" + std::to_string(k) + " alpha=" + num(alpha));
                if (k == 2) {
                    const double lo = 2.0 * k * std::log(alpha) / (alpha * alpha - 1.0);
                    const double want = std::exp(-lo / 2.0) - std::exp(-alpha * alpha * lo / 2.0);
                    t.check(close(q, want, 1e-12), "k=2 closed form at alpha=" + num(alpha));
                }
            });
    return t.done();
}

PropertyResult sigma_max_stationary()
{
    Tally t("sigma_max_stationary");
    t.run("sqrt5", [](Tally& t) {
        const double s = sigma_max(7, 2, 2.0);
        t.check(close(s, std::sqrt(5.0), 1e-12), "sigma_max(7,2,2) = " + num(s));
    });
    for (int n : {7, 12, 40})
        for (int k : {1, 2, 3})
            for (double alpha : {1.5, 2.0, 5.0})
                t.run("peak", [&](Tally& t) {
                    const double s = sigma_max(n, k, alpha);
                    const double p = psi(n, k, alpha, s).value;
                    for (double f : {1.0 - 1e-3, 1.0 + 1e-3})
                        t.check(psi(n, k, alpha, f * s).value <= p + 1e-12,
                                "not a maximum at n=" + std::to_string(n) + " k=" + std::to_string(k));
                });
    return t.done();
}

PropertyResult haar_orthogonal(std::uint64_t seed)
{
    Tally t("haar_orthogonal");
    for (int m = 1; m <= 24; ++m)
        t.run("sample", [&](Tally& t) {
            const Matrix o = sample_haar_orthogonal(m, derive_seed(seed, m));
            const double err = (o.transpose() * o - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
            t.check(err <= 1e-12, "m=" + std::to_string(m) + " error " + num(err));
        });
    return t.done();
}

PropertyResult haar_beta_ks(std::uint64_t samples, std::uint64_t seed)
{
    Tally t("haar_beta_ks");
    t.run("ks", [&](Tally& t) {
        std::vector<double> v(samples);
        parallel_for(samples, [&](std::size_t i) {
            const Matrix o = sample_haar_orthogonal(4, derive_seed(seed, i));
            v[i] = o(0, 0) * o(0, 0);
        });
        std::sort(v.begin(), v.end());
        double ks = 0.0;
        const double N = static_cast<double>(samples);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double F = boost::math::ibeta(0.5, 1.5, v[i]);
            ks = std::max({ks, std::abs(F - i / N), std::abs(F - (i + 1) / N)});
        }
        const double crit = 1.62762 / std::sqrt(N);
        t.check(ks < crit, "KS statistic " + num(ks) + " >= " + num(crit));
    });
    return t.done();
}

EmpiricalJl empirical_jl(int trials, std::uint64_t seed)
{
    EmpiricalJl out;
    Tally t("empirical_jl");
    t.run("simplex", [&](Tally& t) {
        PointCloud simplex;
        simplex.norm.kind = Norm::l2;
        simplex.coords = Matrix::Identity(64, 64);
        const JlPlan plan = make_plan(64, 2.0, JlMode::haar_projection);
        std::vector<char> ok(trials, 0);
        parallel_for(trials, [&](std::size_t i) {
            JlOptions o;
            o.max_retries = 1;
            ok[i] = jl_transform(simplex, 2.0, JlMode::haar_projection, derive_seed(seed, i), o).success;
        });
        out.successes = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
        out.trials = trials;
        out.certificate = plan.union_bound;
        out.k = plan.k;
        const double c = std::clamp(plan.union_bound, 0.0, 1.0);
        const double se = std::sqrt(c * (1.0 - c) / trials);
        const double freq = static_cast<double>(out.successes) / trials;
        t.check(freq >= c - 3.0 * se, "frequency " + num(freq) + " below certificate " + num(c) + " - 3*" + num(se));
    });
    out.result = t.done("k=" + std::to_string(out.k) + ", " + std::to_string(out.successes) + "/" +
                        std::to_string(out.trials) + " successes, certificate " + num(out.certificate));
    return out;
}

// ---------------------------------------------------------------- sdp

namespace {

FiniteMetric cycle4()
{
    Matrix d(4, 4);
    d << 0, 1, 2, 1, 1, 0, 1, 2, 2, 1, 0, 1, 1, 2, 1, 0;
    return FiniteMetric::build(d);
}

FiniteMetric star13()
{
    Matrix d(4, 4);
    d << 0, 1, 1, 1, 1, 0, 2, 2, 1, 2, 0, 2, 1, 2, 2, 0;
    return FiniteMetric::build(d);
}

}  // namespace

PropertyResult sdp_simplex()
{
    Tally t("sdp_simplex");
    for (int n : {3, 4, 6, 8})
        t.run("simplex", [&](Tally& t) {
            const double a = c2_sdp(FiniteMetric::equilateral(n)).alpha;
            t.check(close(a, 1.0, 1e-6), "n=" + std::to_string(n) + " gave " + num(a));
        });
    return t.done();
}

PropertyResult sdp_known_values()
{
    Tally t("sdp_known_values");
    const std::pair<FiniteMetric, double> cases[] = {{cycle4(), std::sqrt(2.0)}, {star13(), 2.0 / std::sqrt(3.0)}};
    for (const auto& [m, want] : cases)
        t.run("known", [&](Tally& t) {
            const double a = c2_sdp(m).alpha;
            t.check(close(a, want, 1e-3), "c2 " + num(a) + " vs " + num(want));
        });
    return t.done();
}

PropertyResult sdp_configuration_oracle(int instances, std::uint64_t seed)
{
    Tally t("sdp_configuration_oracle");
    std::vector<FiniteMetric> ms = {FiniteMetric::equilateral(5), cycle4(), star13()};
    for (int i = 0; i < instances; ++i) ms.push_back(random_metric(4 + i % 3, derive_seed(seed, i), 1.0, 5.0));
    for (std::size_t i = 0; i < ms.size(); ++i)
        t.run("oracle", [&](Tally& t) {
            const double a = c2_sdp(ms[i]).alpha;
            const double b = c2_configuration_search(ms[i]).alpha;
            t.check(close(a, b, 1e-3), "instance " + std::to_string(i) + ": sdp " + num(a) + " vs search " + num(b));
        });
    return t.done();
}

PropertyResult sdp_three_points(int instances, std::uint64_t seed)
{
    Tally t("sdp_three_points");
    for (int i = 0; i < instances; ++i)
        t.run("triple", [&](Tally& t) {
            const FiniteMetric m = random_metric(3, derive_seed(seed, i), 0.1, 10.0);
            const double a = c2_sdp(m).alpha;
            t.check(close(a, 1.0, 1e-6), "instance " + std::to_string(i) + " gave " + num(a));
        });
    return t.done();
}

PropertyResult sdp_extracted_points()
{
    Tally t("sdp_extracted_points");
    for (const FiniteMetric& m : {cycle4(), star13(), FiniteMetric::equilateral(6)})
        t.run("extract", [&](Tally& t) {
            const C2Result r = c2_sdp(m);
            const double real = distortion(m, extract_points(r.Q)).distortion;
            t.check(real <= r.alpha + 1e-3 && real >= r.lo - 1e-9,
                    "realised " + num(real) + " outside [" + num(r.lo) + ", " + num(r.alpha) + " + 1e-3]");
        });
    return t.done();
}

PropertyResult sdp_certificates()
{
    Tally t("sdp_certificates");
    const std::pair<FiniteMetric, double> cases[] = {{cycle4(), std::sqrt(2.0)}, {star13(), 2.0 / std::sqrt(3.0)}};
    for (const auto& [m, c2] : cases)
        t.run("certificate", [&](Tally& t) {
            const auto below = search_certificate(m, c2 - 0.1);
            t.check(below.violated, "no violated certificate below c2");
            if (below.violated) {
                const auto chk = check_certificate(m, below.A, c2 - 0.1);
                t.check(!chk.holds, "check_certificate disagrees with the search");
            }
            const auto above = search_certificate(m, c2 + 0.05);
            t.check(!above.violated, "violated certificate found above c2");
        });
    return t.done();
}

// ---------------------------------------------------------------- spectral

PropertyResult lemma_clauses(int instances, std::uint64_t seed)
{
    Tally t("lemma_clauses");
    for (int i = 0; i < instances; ++i)
        t.run("instance " + std::to_string(i), [&](Tally& t) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const int n = 2 + static_cast<int>(rng() % 6);
            const Vector pi = random_distribution(n, rng);
            const ReversibleChain A = random_reversible_chain(pi, rng, 0.6);
            const ReversibleChain B = random_reversible_chain(pi, rng, 0.6);
            const FiniteMetric m = random_metric(4, rng());
            std::vector<int> xs(n);
            for (int j = 0; j < n; ++j) xs[j] = j < 2 ? j : static_cast<int>(rng() % 4);
            const Configuration x = configuration(m, xs);
            const double p = i % 2 == 0 ? 1.0 : 2.0;
            const double delta = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const std::string tag = "instance " + std::to_string(i) + " clause ";
            const Matrix I = Matrix::Identity(n, n);
            const double ra = rayleigh(x, A.A, pi, p), rb = rayleigh(x, B.A, pi, p);

            t.check(close(rayleigh(x, delta * A.A + (1.0 - delta) * B.A, pi, p), delta * ra + (1.0 - delta) * rb, 1e-12),
                    tag + "1");
            t.check(close(rayleigh(x, (1.0 - delta) * I + delta * A.A, pi, p), delta * ra, 1e-12), tag + "2");
            t.check(ra <= std::pow(2.0, p) + 1e-12, tag + "3");
            const double rab = rayleigh(x, A.A * B.A, pi, p);
            t.check(std::pow(rab, 1.0 / p) <= std::pow(ra, 1.0 / p) + std::pow(rb, 1.0 / p) + 1e-9, tag + "4");
            Matrix P = A.A;
            for (int s = 2; s <= 4; ++s) {
                P = P * A.A;
                t.check(rayleigh(x, P, pi, p) <= std::pow(s, p) * ra + 1e-9, tag + "5 (t=" + std::to_string(s) + ")");
            }
        });
    return t.done();
}

PropertyResult hilbert_identity(int instances, std::uint64_t seed)
{
    Tally t("hilbert_identity");
    for (int i = 0; i < instances; ++i)
        t.run("instance " + std::to_string(i), [&](Tally& t) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const int n = 2 + static_cast<int>(rng() % 7);
            const ReversibleChain c = random_chain(n, rng);
            Norm l2;
            const PointCloud x = random_cloud(n, 1 + static_cast<int>(rng() % 4), l2, rng);
            const HilbertIdentity h = hilbert_rayleigh_identity(x, c);
            t.check(close(h.lhs, h.rhs, 1e-10), "instance " + std::to_string(i) + ": " + num(h.lhs) + " vs " + num(h.rhs));
            t.check(h.rayleigh_a2 <= 1.0 + 1e-12, "instance " + std::to_string(i) + ": R(A^2) > 1");
        });
    return t.done();
}

PropertyResult t_ceiling(int instances, std::uint64_t seed)
{
    Tally t("t_ceiling");
    for (int i = 0; i < instances; ++i)
        t.run("instance " + std::to_string(i), [&](Tally& t) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const int n = 2 + static_cast<int>(rng() % 7), m = 1 + static_cast<int>(rng() % 8);
            const ReversibleChain c = random_chain(n, rng);
            const PointCloud x = random_cloud(n, m, ell(i), rng);
            const int tp = t_parameter(x, c).t;
            const int ub = t_upper_bound(lambda2(c), hilbert_pair(x).d);
            t.check(tp <= ub, "instance " + std::to_string(i) + ": t=" + std::to_string(tp) + " > " + std::to_string(ub));
        });
    return t.done();
}

PropertyResult power_expander(int instances, std::uint64_t seed)
{
    Tally t("power_expander");
    for (int i = 0; i < instances; ++i)
        t.run("instance " + std::to_string(i), [&](Tally& t) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const int n = 2 + static_cast<int>(rng() % 7), m = 1 + static_cast<int>(rng() % 8);
            const ReversibleChain c = random_chain(n, rng);
            const PointCloud x = random_cloud(n, m, ell(i), rng);
            const PowerCheck pc = power_expander_check(x, c);
            t.check(pc.value >= 1.0 / 16.0, "instance " + std::to_string(i) + ": value " + num(pc.value));
            t.check(1.0 / pc.rayleigh_a <= 8.0 * pc.t * pc.t,
                    "instance " + std::to_string(i) + ": 1/R(A) = " + num(1.0 / pc.rayleigh_a) + " > 8t^2");
        });
    return t.done();
}

PropertyResult md_chain(int instances, std::uint64_t seed)
{
    Tally t("md_chain");
    for (int i = 0; i < instances; ++i)
        t.run("instance " + std::to_string(i), [&](Tally& t) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const int n = 2 + static_cast<int>(rng() % 5), m = 1 + static_cast<int>(rng() % 4);
            const ReversibleChain c = random_chain(n, rng);
            Norm l1;
            l1.kind = Norm::l1;
            const double g = gamma_sampled_lower_bound(c, l1, m, 2.0, 200, rng());
            const double ub = t_upper_bound(lambda2(c), std::sqrt(static_cast<double>(m)));
            t.check(g <= 8.0 * ub * ub, "instance " + std::to_string(i) + ": " + num(g) + " > " + num(8.0 * ub * ub));
        });
    return t.done();
}

PropertyResult gamma_identities(int instances, std::uint64_t seed)
{
    Tally t("gamma_identities");
    for (int i = 0; i < instances; ++i)
        t.run("eigensolver", [&](Tally& t) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const ReversibleChain c = random_chain(2 + static_cast<int>(rng() % 9), rng);
            Eigen::EigenSolver<Matrix> es(c.A, false);
            std::vector<double> ev;
            for (int j = 0; j < es.eigenvalues().size(); ++j) ev.push_back(es.eigenvalues()(j).real());
            std::sort(ev.rbegin(), ev.rend());
            const double want = 1.0 / (1.0 - ev[1]);
            const double got = gamma_hilbert(c);
            t.check(std::abs(got - want) <= 1e-10 * want, "instance " + std::to_string(i) + ": " + num(got) + " vs " + num(want));
        });
    for (int n = 2; n <= 12; ++n)
        t.run("complete", [&](Tally& t) {
            const double l = lambda2(chain_from_graph(complete_graph(n)));
            t.check(close(l, -1.0 / (n - 1), 1e-12), "K_" + std::to_string(n) + ": " + num(l));
        });
    for (int n = 3; n <= 12; ++n)
        t.run("cycle", [&](Tally& t) {
            const double l = lambda2(chain_from_graph(cycle_graph(n)));
            t.check(close(l, std::cos(2.0 * M_PI / n), 1e-12), "C_" + std::to_string(n) + ": " + num(l));
        });
    t.run("two point", [](Tally& t) {
        const ReversibleChain k2 = chain_from_graph(complete_graph(2));
        const double b = gamma_bruteforce(k2, FiniteMetric::equilateral(2), 2.0);
        t.check(b == 0.5, "brute force gives " + num(b));
        t.check(close(gamma_hilbert(k2), 0.5, 1e-12), "hilbert gives " + num(gamma_hilbert(k2)));
    });
    return t.done();
}

PropertyResult cheeger(int instances, std::uint64_t seed)
{
    Tally t("cheeger");
    auto exhaustive = [](const ReversibleChain& c) {
        const int n = c.size();
        double best = std::numeric_limits<double>::infinity();
        for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
            std::vector<char> in(n);
            for (int i = 0; i < n; ++i) in[i] = (mask >> i) & 1u;
            best = std::min(best, conductance(c, in));
        }
        return best;
    };
    t.run("two triangles", [&](Tally& t) {
        Graph g{6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}};
        const ReversibleChain c = chain_from_graph(g);
        const CheegerCut cut = cheeger_sweep(c);
        t.check(close(cut.conductance, exhaustive(c), 1e-12), "sweep " + num(cut.conductance) + " misses the bridge");
        t.check(close(cut.conductance, 1.0 / 7.0, 1e-12), "bridge conductance " + num(cut.conductance));
    });
    t.run("complete", [&](Tally& t) {
        const ReversibleChain c = chain_from_graph(complete_graph(6));
        const double phi = cheeger_sweep(c).conductance;
        t.check(phi >= 0.5 - 1e-9 && exhaustive(c) >= 0.5 - 1e-9, "K_6 sweep " + num(phi));
    });
    for (int i = 0; i < instances; ++i)
        t.run("random", [&](Tally& t) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const int n = 4 + static_cast<int>(rng() % 17);
            std::uniform_real_distribution<double> w(0.5, 2.0);
            Graph g{n, {}};
            for (int v = 0; v < n; ++v) g.edges.push_back({v, (v + 1) % n, w(rng)});
            for (int e = 0; e < n; ++e) {
                const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
                if (a != b && (a + 1) % n != b && (b + 1) % n != a) g.edges.push_back({a, b, w(rng)});
            }
            const ReversibleChain c = chain_from_graph(g);
            const double phi = cheeger_sweep(c).conductance;
            const double bound = std::sqrt(2.0 * (1.0 - lambda2(c)));
            t.check(phi <= bound + 1e-12, "graph " + std::to_string(i) + ": " + num(phi) + " > " + num(bound));
        });
    return t.done();
}

PropertyResult regular_expanders(std::uint64_t seed)
{
    Tally t("regular_expanders");
    for (int s = 0; s < 20; ++s)
        t.run("expander", [&](Tally& t) {
            const Graph g = random_regular_graph(128, 4, derive_seed(seed, s));
            std::vector<int> deg(128, 0);
            for (const Edge& e : g.edges) ++deg[e.u], ++deg[e.v];
            t.check(std::all_of(deg.begin(), deg.end(), [](int d) { return d == 4; }), "degrees not all 4");
            const double l = lambda2(chain_from_graph(g));
            t.check(l < 0.95, "seed " + std::to_string(s) + ": lambda2 " + num(l));
        });
    t.run("average distance", [&](Tally& t) {
        const Graph g = random_regular_graph(256, 4, derive_seed(seed, 100));
        const auto h = all_pairs_hops(g);
        double sum = 0.0;
        for (int v : h) sum += v;
        const double avg = sum / (256.0 * 255.0);
        t.check(avg >= 0.3 * std::log(256.0) / std::log(4.0), "average distance " + num(avg));
    });
    return t.done();
}

PropertyResult dim_exponent(std::uint64_t seed)
{
    Tally t("dim_exponent");
    t.run("expander", [&](Tally& t) {
        const Graph g = random_regular_graph(128, 4, seed);
        const auto h = all_pairs_hops(g);
        Matrix d(128, 128);
        for (int i = 0; i < 128; ++i)
            for (int j = 0; j < 128; ++j) d(i, j) = h[i * 128 + j];
        const PointCloud f = bourgain_embed(FiniteMetric::build(d), seed);
        const ReversibleChain c = chain_from_graph(g);
        const DimExponent de = dim_lower_exponent(f, c);
        double near = 0.0, far = 0.0;
        for (int i = 0; i < 128; ++i)
            for (int j = 0; j < 128; ++j) {
                const double sq = (f.coords.row(i) - f.coords.row(j)).squaredNorm();
                near += c.pi(i) * c.A(i, j) * sq;
                far += c.pi(i) * c.pi(j) * sq;
            }
        const double ah = std::sqrt(near);
        const double ex = (1.0 - lambda2(c)) / ah * std::sqrt(far);
        t.check(de.exponent > 0.0, "exponent not positive");
        t.check(std::abs(de.alpha_hat - ah) <= 1e-10 * ah, "alpha_hat " + num(de.alpha_hat) + " vs " + num(ah));
        t.check(std::abs(de.exponent - ex) <= 1e-10 * ex, "exponent " + num(de.exponent) + " vs " + num(ex));
    });
    return t.done();
}

PropertyResult markov_convexity(std::uint64_t samples, std::uint64_t seed)
{
    Tally t("markov_convexity");
    const int S = 5;
    MarkovChainSpec path;
    path.P = Matrix::Zero(S, S);
    for (int i = 0; i < S; ++i) {
        if (i == 0) path.P(0, 1) = 1.0;
        else if (i == S - 1) path.P(i, i - 1) = 1.0;
        else path.P(i, i - 1) = path.P(i, i + 1) = 0.5;
    }
    path.init = Vector::Constant(S, 1.0 / S);
    path.horizon = 8;
    path.fdist.resize(S, S);
    for (int a = 0; a < S; ++a)
        for (int b = 0; b < S; ++b) path.fdist(a, b) = std::abs(a - b);
    path.q = 2.0;

    for (McMethod method : {McMethod::exact, McMethod::monte_carlo}) {
        t.run("constant map", [&](Tally& t) {
            MarkovChainSpec s = path;
            s.fdist.setZero();
            t.check(markov_convexity_ratio(s, 2000, seed, method).lhs == 0.0, "constant map lhs nonzero");
        });
        t.run("deterministic chain", [&](Tally& t) {
            MarkovChainSpec s = path;
            s.P.setZero();
            for (int i = 0; i < S; ++i) s.P(i, (i + 1) % S) = 1.0;
            t.check(markov_convexity_ratio(s, 2000, seed, method).lhs == 0.0, "permutation chain lhs nonzero");
        });
    }
    t.run("five path", [&](Tally& t) {
        const auto ex = markov_convexity_ratio(path, 0, seed, McMethod::exact);
        const auto mc = markov_convexity_ratio(path, samples, seed, McMethod::monte_carlo);
        t.check(std::abs(mc.lhs_q - ex.lhs_q) <= 3.0 * mc.lhs_q_se + 1e-12,
                "lhs " + num(mc.lhs_q) + " +- " + num(mc.lhs_q_se) + " vs " + num(ex.lhs_q));
        t.check(std::abs(mc.rhs_q - ex.rhs_q) <= 3.0 * mc.rhs_q_se + 1e-12,
                "rhs " + num(mc.rhs_q) + " +- " + num(mc.rhs_q_se) + " vs " + num(ex.rhs_q));
    });
    return t.done();
}

// ---------------------------------------------------------------- matousek

PropertyResult matousek_instances(int instances, int n, std::uint64_t seed)
{
    std::vector<PropertyResult> per(instances);
    parallel_for(instances, [&](std::size_t i) {
        Tally t("matousek_instances");
        t.run("instance " + std::to_string(i), [&](Tally& t) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const int g = 4 + 2 * static_cast<int>(i % 3);
            const double s = std::array<double, 3>{0.5, 1.0, 2.0}[rng() % 3];
            const double T = std::uniform_real_distribution<double>(s, 2.0 * s * g)(rng);
            const TemplateGraph tg = gen_template(n, g, rng());
            const auto sigma = random_signs(tg.edges.size(), rng());
            const FiniteMetric m = signed_metric(tg, sigma, {s, T});
            const std::string tag = "instance " + std::to_string(i) + ": ";
            t.check(!find_triangle_violation(m.dist(), 1e-12 * m.max_entry(), Exec::serial), tag + "triangle");
            t.check(girth(tg.graph(), Exec::serial) >= g, tag + "girth below " + std::to_string(g));
            const double floor = std::min(s * g, T);
            for (int l = 0; l < n; ++l)
                if (m(l, n + l) < floor - 1e-12) {
                    t.check(false, tag + "fork " + std::to_string(l) + " at distance " + num(m(l, n + l)));
                    return;
                }
            t.check(true, "");
        });
        per[i] = t.done();
    });
    PropertyResult out{"matousek_instances", 0, 0, {}};
    for (const auto& p : per) {
        out.trials += p.trials;
        if (p.failures && out.failures == 0) out.detail = p.detail;
        out.failures += p.failures;
    }
    if (out.failures == 0) out.detail = std::to_string(instances) + " instances at n = " + std::to_string(n);
    return out;
}

PropertyResult beta_modulus_values()
{
    Tally t("beta_modulus");
    for (double alpha : {1.0, 1.5, 2.0, 10.0})
        t.run("bilipschitz", [&](Tally& t) {
            const double b = beta_modulus(ModulusPair::power_family(1.0, alpha, 1.0));
            t.check(b == 1.0 / (2.0 * alpha), "alpha=" + num(alpha) + ": " + num(b));
        });
    for (double alpha : {1.0, 2.0, 5.0})
        for (double theta : {0.25, 0.5, 0.75, 1.0})
            t.run("power", [&](Tally& t) {
                const ModulusPair pp = ModulusPair::power_family(1.0, alpha, theta);
                const double want = std::pow(2.0 * alpha, -1.0 / theta);
                const double b = beta_modulus(pp);
                t.check(std::abs(b - want) <= 4e-16 * want, "power family " + num(b) + " vs " + num(want));
                std::vector<double> s, o, O;
                for (int i = 0; i < 1000; ++i) {
                    const double x = std::pow(10.0, -3.0 + 6.0 * i / 999.0);
                    s.push_back(x);
                    o.push_back(pp.eval_omega(x));
                    O.push_back(pp.eval_Omega(x));
                }
                const double tb = beta_modulus(ModulusPair::table(s, o, O));
                t.check(close(tb, want, 1e-3), "tabulated " + num(tb) + " vs " + num(want));
            });
    t.run("coarse exponent", [](Tally& t) {
        const double e = coarse_dim_exponent(3e4, ModulusPair::power_family(1.0, 2.0, 1.0));
        t.check(close(e, 0.25 * std::log(3e4), 1e-12), "exponent " + num(e));
    });
    return t.done();
}

PropertyResult harness_determinism(std::uint64_t seed)
{
    Tally t("harness_determinism");
    t.run("harness", [&](Tally& t) {
        const auto a = harness_csv(experiment_harness(32, 4, 1.0, 6.0, 6, seed, 2.0, Exec::serial));
        const auto b = harness_csv(experiment_harness(32, 4, 1.0, 6.0, 6, seed, 2.0, Exec::parallel));
        t.check(a == b, "serial and parallel harness output differ");
    });
    return t.done();
}

// ---------------------------------------------------------------- metric

PropertyResult frechet_isometry(int instances, std::uint64_t seed)
{
    Tally t("frechet_isometry");
    for (int i = 0; i < instances; ++i)
        t.run("frechet", [&](Tally& t) {
            const FiniteMetric m = random_metric(2 + i % 11, derive_seed(seed, i), 0.1, 10.0);
            const double a = distortion(m, frechet_embed(m)).distortion;
            t.check(close(a, 1.0, 1e-12), "instance " + std::to_string(i) + ": " + num(a));
        });
    return t.done();
}

PropertyResult distortion_scaling(int instances, std::uint64_t seed)
{
    Tally t("distortion_scaling");
    for (int i = 0; i < instances; ++i)
        t.run("scaling", [&](Tally& t) {
            std::mt19937_64 rng(derive_seed(seed, i));
            const int n = 3 + i % 8;
            const FiniteMetric m = random_metric(n, rng());
            Norm l2;
            PointCloud y = random_cloud(n, 3, l2, rng);
            const double c = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
            const EmbeddingReport base = distortion(m, y);
            PointCloud yc = y;
            yc.coords *= c;
            const EmbeddingReport scaled = distortion(m, yc);
            const EmbeddingReport src = distortion(FiniteMetric::build(c * m.dist()), y);
            const double tol = 1e-12 * base.distortion;
            t.check(close(scaled.distortion, base.distortion, tol) && close(src.distortion, base.distortion, tol),
                    "instance " + std::to_string(i) + ": distortion changes under rescaling");
            t.check(close(scaled.scale, c * base.scale, 1e-12 * c * base.scale), "scale field not multiplied");
        });
    return t.done();
}

PropertyResult snowflake_metrics(int instances, std::uint64_t seed)
{
    Tally t("snowflake_metrics");
    for (int i = 0; i < instances; ++i)
        for (double theta : {0.25, 0.5, 0.75, 1.0})
            t.run("snowflake", [&](Tally& t) {
                const FiniteMetric m = random_metric(3 + i % 10, derive_seed(seed, i), 0.01, 100.0);
                const FiniteMetric s = snowflake(m, theta);
                t.check(!find_triangle_violation(s.dist(), 1e-12 * s.max_entry(), Exec::serial),
                        "instance " + std::to_string(i) + " theta " + num(theta));
            });
    return t.done();
}

PropertyResult doubling_values(int instances, std::uint64_t seed)
{
    Tally t("doubling_values");
    for (int i = 0; i < instances; ++i)
        t.run("greedy", [&](Tally& t) {
            const FiniteMetric m = random_metric(2 + i % 9, derive_seed(seed, i), 1.0, 8.0);
            const double e = doubling_constant(m, DoublingMode::exact);
            const double g = doubling_constant(m, DoublingMode::greedy);
            t.check(g >= e, "instance " + std::to_string(i) + ": greedy " + num(g) + " < exact " + num(e));
        });
    t.run("equilateral", [](Tally& t) {
        t.check(doubling_constant(FiniteMetric::equilateral(5), DoublingMode::exact) == 5.0, "equilateral 5");
        t.check(doubling_constant(FiniteMetric::equilateral(1), DoublingMode::exact) == 1.0, "single point");
        t.check(close(doubling_dim_lower_bound(FiniteMetric::equilateral(125), 1.0), 3.0, 1e-12), "equilateral 125");
        t.check(close(doubling_dim_lower_bound(FiniteMetric::equilateral(2), 2.0), std::log(2.0) / std::log(9.0), 1e-15),
                "two points");
    });
    for (double n : {2.0, 3.0, 10.0, 1e3, 1e9})
        for (double alpha : {1.0, 1.5, 2.0, 10.0})
            t.run("volumetric", [&](Tally& t) {
                t.check(volumetric_lower_bound(n, alpha) <= n - 1.0 + 1e-12, "volumetric bound above n-1 at n=" + num(n));
            });
    return t.done();
}

PropertyResult bourgain_envelope(int instances, std::uint64_t seed)
{
    Tally t("bourgain_envelope");
    t.run("two points", [&](Tally& t) {
        const FiniteMetric m = FiniteMetric::equilateral(2, 3.0);
        t.check(close(distortion(m, bourgain_embed(m, seed)).distortion, 1.0, 1e-9), "two points");
    });
    t.run("equilateral", [&](Tally& t) {
        const FiniteMetric m = FiniteMetric::equilateral(16);
        const double a = distortion(m, bourgain_embed(m, seed)).distortion;
        t.check(a <= 2.0, "equilateral 16: " + num(a));
    });
    std::vector<double> worst(instances, 0.0);
    parallel_for(instances, [&](std::size_t i) {
        try {
            const FiniteMetric m = random_metric(32, derive_seed(seed, i), 1.0, 10.0);
            worst[i] = distortion(m, bourgain_embed(m, derive_seed(seed, 1000 + i))).distortion;
        } catch (const Error&) {
            worst[i] = std::numeric_limits<double>::infinity();
        }
    });
    for (int i = 0; i < instances; ++i)
        t.check(worst[i] <= 20.0 * 5.0, "instance " + std::to_string(i) + ": " + num(worst[i]));
    return t.done("max distortion " + num(instances ? *std::max_element(worst.begin(), worst.end()) : 0.0));
}

PropertyResult cotype_values()
{
    Tally t("cotype_values");
    t.run("alternating", [](Tally& t) {
        const FiniteMetric m = FiniteMetric::equilateral(2);
        const CotypeSides c = metric_cotype_ratio(m, {0, 1}, 2.0, 1, 1);
        t.check(close(c.lhs, 2.0, 1e-15), "lhs " + num(c.lhs));
        const CotypeSides d = metric_cotype_ratio(FiniteMetric::equilateral(2, 2.0), {0, 1}, 2.0, 1, 1);
        t.check(close(d.lhs, 4.0 * c.lhs, 1e-12) && close(d.rhs, 4.0 * c.rhs, 1e-12), "homogeneity");
        const CotypeSides z = metric_cotype_ratio(m, {0, 0, 0, 0}, 2.0, 1, 2);
        t.check(z.lhs == 0.0 && z.rhs == 0.0, "constant configuration");
    });
    return t.done();
}

}  // namespace props

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = {"jl", "sdp", "spectral", "matousek", "metric"};
    return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& o)
{
    using namespace props;
    const auto start = std::chrono::steady_clock::now();
    SuiteResult r;
    r.suite = name;
    const int inst = std::max(1, o.instances);
    const std::uint64_t s = o.seed;
    auto& p = r.properties;
    if (name == "jl") {
        p = {reference_dimensions(),
             projection_vs_gaussian(),
             psi_closed_form(),
             psi_monte_carlo(o.mc_samples, derive_seed(s, 1), o.prefactor),
             psi_shape(),
             gaussian_dominated(),
             gaussian_quadrature(),
             sigma_max_stationary(),
             haar_orthogonal(derive_seed(s, 2)),
             haar_beta_ks(50000, derive_seed(s, 3)),
             empirical_jl(inst, derive_seed(s, 4)).result};
    } else if (name == "sdp") {
        p = {sdp_simplex(), sdp_known_values(), sdp_configuration_oracle(std::min(inst, 12), derive_seed(s, 1)),
             sdp_three_points(std::min(inst, 50), derive_seed(s, 2)), sdp_extracted_points(), sdp_certificates()};
    } else if (name == "spectral") {
        p = {lemma_clauses(inst, derive_seed(s, 1)),
             hilbert_identity(inst, derive_seed(s, 2)),
             t_ceiling(inst, derive_seed(s, 3)),
             power_expander(inst, derive_seed(s, 4)),
             md_chain(std::min(inst, 40), derive_seed(s, 5)),
             gamma_identities(inst, derive_seed(s, 6)),
             cheeger(inst, derive_seed(s, 7)),
             regular_expanders(derive_seed(s, 8)),
             dim_exponent(derive_seed(s, 9)),
             markov_convexity(100000, derive_seed(s, 10))};
    } else if (name == "matousek") {
        p = {matousek_instances(inst, 64, derive_seed(s, 1)), beta_modulus_values(), harness_determinism(derive_seed(s, 2))};
    } else if (name == "metric") {
        p = {frechet_isometry(inst, derive_seed(s, 1)),  distortion_scaling(inst, derive_seed(s, 2)),
             snowflake_metrics(inst, derive_seed(s, 3)), doubling_values(std::min(inst, 60), derive_seed(s, 4)),
             bourgain_envelope(std::min(inst, 100), derive_seed(s, 5)), cotype_values()};
    } else {
        fail(Errc::InvalidInput, "unknown suite '" + name + "'");
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

Json to_json(const SuiteResult& r)
{
    Json j;
    j["suite"] = r.suite;
    j["passed"] = r.passed();
    Json props = Json::array();
    for (const auto& p : r.properties)
        props.push_back({{"name", p.name},
                         {"trials", p.trials},
                         {"failures", p.failures},
                         {"passed", p.ok()},
                         {"detail", p.detail}});
    j["properties"] = props;
    return j;
}

}  // namespace mdr
