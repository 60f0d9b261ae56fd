#include "mdr/jl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <map>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "mdr/parallel.hpp"

namespace mdr {

namespace bm = boost::math;
using GK = bm::quadrature::gauss_kronrod<double, 61>;

const char* method_name(ProbabilityEstimate::Method m)
{
    switch (m) {
    case ProbabilityEstimate::Method::quadrature: return "quadrature";
    case ProbabilityEstimate::Method::chi_square_cdf: return "chi_square_cdf";
    case ProbabilityEstimate::Method::monte_carlo: return "monte_carlo";
    }
    return "";
}

const char* mode_name(JlMode m) { return m == JlMode::haar_projection ? "haar_projection" : "scaled_gaussian"; }

Matrix sample_haar_orthogonal(int m, std::mt19937_64& rng)
{
    if (m < 1) fail(Errc::ParameterDomain, "orthogonal dimension must be positive");
    std::normal_distribution<double> g;
    Matrix a(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) a(i, j) = g(rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    for (int j = 0; j < m; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

Matrix sample_haar_orthogonal(int m, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return sample_haar_orthogonal(m, rng);
}

namespace {

void check_psi_domain(std::int64_t n, std::int64_t k, double alpha, std::int64_t gap)
{
    if (n < 4 || k < 1 || k > n - gap)
        fail(Errc::ParameterDomain, "need 4 <= n and 1 <= k <= n-" + std::to_string(gap));
    if (!(alpha > 1.0) || !std::isfinite(alpha)) fail(Errc::ParameterDomain, "alpha must exceed 1");
}

// log(e^x - 1) without overflow
double log_expm1(double x) { return x > 1.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x)); }

double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts, double& err)
{
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double e = 0.0;
        total += GK::integrate(f, cuts[i], cuts[i + 1], 12, 1e-12, &e);
        err += e;
    }
    return total;
}

}  // namespace

ProbabilityEstimate psi(std::int64_t n, std::int64_t k, double alpha, double sigma, PsiPrefactor pref)
{
    check_psi_domain(n, k, alpha, 3);
    if (!(sigma >= 0.0)) fail(Errc::ParameterDomain, "sigma must be nonnegative");
    ProbabilityEstimate out;
    out.method = ProbabilityEstimate::Method::quadrature;
    const double a = std::max(1.0, sigma / alpha), b = std::max(1.0, sigma);
    if (!(b > a)) return out;

    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    double logc;
    if (pref == PsiPrefactor::normalized)
        logc = std::log(2.0) + std::lgamma(0.5 * (nd - 1)) - std::lgamma(0.5 * kd) - std::lgamma(0.5 * (nd - 1 - kd));
    else
        logc = std::log(2.0) + 0.5 * kd * std::log(M_PI) - std::lgamma(0.5 * kd);
    const double ex = 0.5 * (nd - kd - 3), ps = nd - 2;
    // s = 1 + u^2 removes the (s-1)^{ex} endpoint behaviour at s = 1
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double s = 1.0 + u * u;
        return 2.0 * u * std::exp(logc + ex * (2.0 * std::log(u) + std::log(s + 1)) - ps * std::log(s));
    };
    auto to_u = [](double s) { return std::sqrt(s - 1.0); };
    std::vector<double> cuts{to_u(a), to_u(b)};
    const double mode = std::sqrt((nd - 2) / (kd + 1));
    for (double c : {0.0, -0.5, -0.2, -0.05, 0.05, 0.2, 0.5, 1.0, 3.0}) {
        const double s = mode * (1.0 + c);
        if (s > a && s < b) cuts.push_back(to_u(s));
    }
    double err = 0.0;
    out.value = integrate_pieces(f, cuts, err);
    if (!(err <= 1e-10) || !std::isfinite(out.value))
        fail(Errc::QuadratureNonConvergence, "psi quadrature error estimate above 1e-10: " + std::to_string(err));
    if (pref == PsiPrefactor::normalized) out.value = std::clamp(out.value, 0.0, 1.0);
    return out;
}

double psi_failure(std::int64_t n, std::int64_t k, double alpha, double sigma)
{
    check_psi_domain(n, k, alpha, 3);
    if (!(sigma >= 0.0)) fail(Errc::ParameterDomain, "sigma must be nonnegative");
    if (sigma <= 1.0) return 1.0;
    const double a = 0.5 * static_cast<double>(k), b = 0.5 * static_cast<double>(n - 1 - k);
    const double lo = std::min(1.0, 1.0 / (sigma * sigma));
    const double hi = std::min(1.0, alpha * alpha / (sigma * sigma));
    double f = bm::ibeta(a, b, lo);
    if (hi < 1.0) f += bm::ibetac(a, b, hi);
    return std::min(1.0, f);
}

ProbabilityEstimate psi_monte_carlo(int n, int k, double alpha, double sigma, std::uint64_t samples,
                                    std::uint64_t seed, Exec exec)
{
    check_psi_domain(n, k, alpha, 3);
    const int m = n - 1;
    const Vector z = Vector::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));
    auto st = monte_carlo<1>(
        samples, seed,
        [&](std::mt19937_64& rng, std::array<double, 1>& out) {
            const Matrix o = sample_haar_orthogonal(m, rng);
            const double r = sigma * (o.topRows(k) * z).norm();
            out[0] = (r >= 1.0 && r <= alpha) ? 1.0 : 0.0;
        },
        exec);
    ProbabilityEstimate p;
    p.value = st.mean[0];
    p.std_error = st.std_error[0];
    p.method = ProbabilityEstimate::Method::monte_carlo;
    p.samples = samples;
    return p;
}

double sigma_max(std::int64_t n, std::int64_t k, double alpha)
{
    check_psi_domain(n, k, alpha, 4);
    const double e = static_cast<double>(n - k - 3);
    const double la = std::log(alpha);
    const double A = (2.0 * static_cast<double>(n) - 6.0) / e * la;
    const double B = 2.0 * static_cast<double>(k) / e * la;
    const double log_s = 0.5 * (log_expm1(A) - log_expm1(B));
    if (!std::isfinite(log_s) || log_s > 700.0)
        fail(Errc::Overflow, "sigma_max exceeds the double range");
    return std::exp(log_s);
}

MinDim jl_min_dim_projection(std::int64_t n, double alpha)
{
    if (n < 5) fail(Errc::ParameterDomain, "projection dimension needs n >= 5");
    if (!(alpha > 1.0) || !std::isfinite(alpha)) fail(Errc::ParameterDomain, "alpha must exceed 1");
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    std::map<std::int64_t, bool> seen;
    auto ok = [&](std::int64_t k) {
        auto it = seen.find(k);
        if (it != seen.end()) return it->second;
        bool r;
        try {
            r = psi_failure(n, k, alpha, sigma_max(n, k, alpha)) * pairs < 1.0;
        } catch (const Error& e) {
            if (e.code() != Errc::Overflow) throw;
            r = false;
        }
        seen[k] = r;
        return r;
    };

    const std::int64_t top = n - 4;
    std::int64_t lo = 0, hi = 1;
    while (hi < top && !ok(hi)) {
        lo = hi;
        hi = std::min(top, 2 * hi);
    }
    if (!ok(hi)) return {n - 1, false, false};
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    bool prev = false, monotone = true;
    for (const auto& [k, v] : seen) {
        if (prev && !v) monotone = false;
        prev = prev || v;
    }
    if (monotone) return {hi, true, false};
    for (std::int64_t k = 1; k <= top; ++k)
        if (ok(k)) return {k, true, true};
    return {n - 1, false, true};
}

double gaussian_sigma(std::int64_t k, double alpha)
{
    if (k < 1 || !(alpha > 1.0)) fail(Errc::ParameterDomain, "need k >= 1 and alpha > 1");
    return std::sqrt((alpha * alpha - 1.0) / (2.0 * static_cast<double>(k) * std::log(alpha)));
}

double gaussian_failure_prob(std::int64_t k, double alpha)
{
    if (k < 1 || !(alpha > 1.0) || !std::isfinite(alpha)) fail(Errc::ParameterDomain, "need k >= 1 and alpha > 1");
    const double kd = static_cast<double>(k);
    const double lo = 2.0 * kd * std::log(alpha) / (alpha * alpha - 1.0);
    const double hi = alpha * alpha * lo;
    return bm::gamma_p(0.5 * kd, 0.5 * lo) + bm::gamma_q(0.5 * kd, 0.5 * hi);
}

ProbabilityEstimate gaussian_success_prob(std::int64_t k, double alpha)
{
    const double chi = 1.0 - gaussian_failure_prob(k, alpha);
    const double kd = static_cast<double>(k);
    const double la = std::log(alpha);
    const double logc = std::log(2.0) + 0.5 * kd * std::log(kd) - std::lgamma(0.5 * kd);
    auto logf = [&](double b) {
        const double u = b / std::expm1(2.0 * b);
        return logc + 0.5 * kd * std::log(u) - kd * u;
    };
    auto f = [&](double b) { return std::exp(logf(b)); };
    // integrand is decreasing in beta; stop once it is e^-80 below its start
    std::vector<double> cuts{la};
    const double top = logf(la);
    for (int i = 0; i < 80; ++i) {
        const double b = la + std::ldexp(1.0, i) / kd;
        cuts.push_back(b);
        if (logf(b) < top - 80.0 || logf(b) < -745.0) break;
    }
    double err = 0.0;
    const double tail = integrate_pieces(f, cuts, err);
    ProbabilityEstimate out;
    out.value = std::clamp(1.0 - tail, 0.0, 1.0);
    out.method = ProbabilityEstimate::Method::quadrature;
    if (!(err <= 1e-10) || !(std::abs(out.value - chi) <= 1e-9))
        fail(Errc::QuadratureNonConvergence, "gaussian quadrature disagrees with the chi-square CDF");
    return out;
}

ProbabilityEstimate gaussian_monte_carlo(int k, double alpha, std::uint64_t samples, std::uint64_t seed, Exec exec)
{
    const double s = gaussian_sigma(k, alpha);
    const Eigen::Vector3d z(1.0 / 3, 2.0 / 3, 2.0 / 3);
    auto st = monte_carlo<1>(
        samples, seed,
        [&](std::mt19937_64& rng, std::array<double, 1>& out) {
            std::normal_distribution<double> g;
            double sq = 0.0;
            for (int i = 0; i < k; ++i) {
                const double y = g(rng) * z[0] + g(rng) * z[1] + g(rng) * z[2];
                sq += y * y;
            }
            const double r = s * std::sqrt(sq);
            out[0] = (r >= 1.0 && r <= alpha) ? 1.0 : 0.0;
        },
        exec);
    ProbabilityEstimate p;
    p.value = st.mean[0];
    p.std_error = st.std_error[0];
    p.method = ProbabilityEstimate::Method::monte_carlo;
    p.samples = samples;
    return p;
}

std::int64_t jl_min_dim_gaussian(std::int64_t n, double alpha)
{
    if (n < 2) fail(Errc::ParameterDomain, "need n >= 2");
    if (!(alpha > 1.0) || !std::isfinite(alpha)) fail(Errc::ParameterDomain, "alpha must exceed 1");
    const double a2 = alpha * alpha, la = std::log(alpha);
    const double den = 2 * a2 * a2 * la + 2 * a2 - a2 * a2 - 4 * a2 * la * la - 2 * la - 1;
    if (!(den > 0.0)) fail(Errc::DenominatorNonpositive, "estimate denominator is not positive at this alpha");
    const double rhs = std::log(2.0) + 2 * std::log(static_cast<double>(n)) + 2 * std::log(a2 - 1) + std::log(la) -
                       std::log(den);
    const double base = std::log(a2 - 1) - std::log(la) + 2.0 / (a2 - 1) * la;
    for (std::int64_t k = 1; k < 100000000; ++k) {
        const double kd = static_cast<double>(k);
        const double lhs = std::lgamma(0.5 * kd) - (0.5 * kd - 1) * std::log(kd) + 0.5 * kd * base;
        if (lhs >= rhs) return k;
    }
    fail(Errc::Overflow, "gaussian dimension scan exceeded 1e8");
}

JlPlan make_plan(std::int64_t n, double alpha, JlMode mode, std::int64_t k, std::int64_t haar_dim)
{
    if (n < 2) fail(Errc::ParameterDomain, "a plan needs at least two points");
    if (!(alpha > 1.0) || !std::isfinite(alpha)) fail(Errc::ParameterDomain, "alpha must exceed 1");
    JlPlan p;
    p.n = n;
    p.alpha = alpha;
    p.mode = mode;
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    double failure;
    if (mode == JlMode::haar_projection) {
        if (k <= 0) {
            const MinDim md = jl_min_dim_projection(n, alpha);
            if (!md.feasible) fail(Errc::NoFeasibleK, "no projection dimension below n-3 is certified");
            k = md.k;
        }
        p.k = k;
        p.haar_dim = haar_dim > 0 ? haar_dim : std::max(n - 1, k + 3);
        p.sigma = sigma_max(p.haar_dim + 1, k, alpha);
        failure = psi_failure(p.haar_dim + 1, k, alpha, p.sigma);
    } else {
        p.k = k > 0 ? k : jl_min_dim_gaussian(n, alpha);
        p.sigma = gaussian_sigma(p.k, alpha);
        failure = gaussian_failure_prob(p.k, alpha);
    }
    p.success_prob = 1.0 - failure;
    p.union_bound = 1.0 - pairs * failure;
    return p;
}

PointCloud span_coordinates(const PointCloud& cloud)
{
    const int n = cloud.size();
    Matrix x = cloud.coords.rowwise() - cloud.coords.row(0);
    Eigen::ColPivHouseholderQR<Matrix> qr(x.transpose());
    qr.setThreshold(1e-12);
    const int r = static_cast<int>(qr.rank());
    Matrix q = qr.householderQ();
    PointCloud out;
    out.norm.kind = Norm::l2;
    out.coords = x * q.leftCols(r);
    if (r == 0) out.coords = Matrix::Zero(n, 1);
    return out;
}

JlResult jl_transform(const PointCloud& cloud, double alpha, JlMode mode, std::uint64_t seed, JlOptions opt)
{
    if (cloud.norm.kind != Norm::l2) fail(Errc::ParameterDomain, "JL transform needs an l2 cloud");
    const int n = cloud.size();
    const Matrix d0 = cloud.pairwise();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (d0(i, j) == 0.0)
                fail(Errc::ZeroDistancePair, "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    if (opt.max_retries < 1) fail(Errc::ParameterDomain, "max_retries must be positive");

    JlResult res;
    res.plan = make_plan(n, alpha, mode, opt.k, opt.haar_dim);
    const int k = static_cast<int>(res.plan.k);
    Matrix x;
    if (mode == JlMode::haar_projection) {
        const PointCloud sp = span_coordinates(cloud);
        if (sp.dim() > res.plan.haar_dim) fail(Errc::ParameterDomain, "haar_dim below the rank of the cloud");
        x = Matrix::Zero(n, res.plan.haar_dim);
        x.leftCols(sp.dim()) = sp.coords;
    } else {
        x = cloud.coords;
    }

    double best_score = std::numeric_limits<double>::infinity();
    for (int a = 0; a < opt.max_retries; ++a) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(a)));
        Matrix y;
        if (mode == JlMode::haar_projection) {
            const Matrix o = sample_haar_orthogonal(static_cast<int>(res.plan.haar_dim), rng);
            y = res.plan.sigma * x * o.topRows(k).transpose();
        } else {
            std::normal_distribution<double> g;
            Matrix G(k, x.cols());
            for (int j = 0; j < G.cols(); ++j)
                for (int i = 0; i < k; ++i) G(i, j) = g(rng);
            y = res.plan.sigma * x * G.transpose();
        }
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double r = (y.row(i) - y.row(j)).norm() / d0(i, j);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        const double score = std::max(1.0 / lo, hi / alpha);
        if (score < best_score) {
            best_score = score;
            res.image.coords = y;
            res.image.norm.kind = Norm::l2;
            res.min_ratio = lo;
            res.max_ratio = hi;
            res.distortion = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
        }
        res.attempts = a + 1;
        if (lo >= 1.0 && hi <= alpha) {
            res.success = true;
            break;
        }
    }
    return res;
}

}  // namespace mdr
