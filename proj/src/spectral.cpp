#include "mdr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mdr/parallel.hpp"

namespace mdr {

namespace {

double powp(double d, double p)
{
    if (p == 2.0) return d * d;
    if (p == 1.0) return d;
    return std::pow(d, p);
}

bool chain_connected(const Matrix& A)
{
    Graph g;
    g.n = static_cast<int>(A.rows());
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (A(i, j) > 0.0 || A(j, i) > 0.0) g.edges.push_back({i, j, 1.0});
    return is_connected(g);
}

Matrix lazy(const ReversibleChain& c)
{
    return 0.5 * (Matrix::Identity(c.size(), c.size()) + c.A);
}

void renormalize_rows(Matrix& M)
{
    for (int i = 0; i < M.rows(); ++i) M.row(i) /= M.row(i).sum();
}

Matrix matrix_power(const Matrix& L, int t)
{
    Matrix M = Matrix::Identity(L.rows(), L.cols());
    for (int s = 1; s <= t; ++s) {
        M = M * L;
        if (s % 16 == 0) renormalize_rows(M);
    }
    return M;
}

}  // namespace

ReversibleChain ReversibleChain::make(Matrix A, Vector pi)
{
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || pi.size() != n) fail(Errc::IndexMismatch, "chain matrix and measure sizes differ");
    if (!A.allFinite() || !pi.allFinite()) fail(Errc::NonFinite, "chain has non-finite entries");
    if (A.minCoeff() < 0.0) fail(Errc::InvalidInput, "transition matrix has negative entries");
    for (int i = 0; i < n; ++i)
        if (std::abs(A.row(i).sum() - 1.0) > 1e-12) fail(Errc::InvalidInput, "rows must sum to 1");
    if (pi.minCoeff() < 0.0 || std::abs(pi.sum() - 1.0) > 1e-12) fail(Errc::InvalidInput, "pi is not a probability vector");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(pi(i) * A(i, j) - pi(j) * A(j, i)) > 1e-12)
                fail(Errc::InvalidInput, "detailed balance fails");
    if ((pi.transpose() * A - pi.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        fail(Errc::InvalidInput, "pi is not stationary");
    return ReversibleChain{std::move(A), std::move(pi)};
}

ReversibleChain chain_from_graph(const Graph& g)
{
    if (g.n < 1) fail(Errc::InvalidInput, "empty graph");
    Matrix W = Matrix::Zero(g.n, g.n);
    for (const auto& e : g.edges) {
        if (!(e.w > 0.0)) fail(Errc::NegativeWeight, "edge weights must be positive");
        if (e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n) fail(Errc::IndexMismatch, "edge endpoint out of range");
        W(e.u, e.v) += e.w;
        if (e.u != e.v) W(e.v, e.u) += e.w;
    }
    if (!is_connected(g)) fail(Errc::Disconnected, "graph is disconnected");
    const Vector deg = W.rowwise().sum();
    Matrix A = deg.cwiseInverse().asDiagonal() * W;
    return ReversibleChain::make(std::move(A), deg / deg.sum());
}

Vector random_distribution(int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.2, 1.0);
    Vector p(n);
    for (int i = 0; i < n; ++i) p(i) = u(rng);
    return p / p.sum();
}

ReversibleChain random_reversible_chain(const Vector& pi, std::mt19937_64& rng, double density)
{
    const int n = static_cast<int>(pi.size());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix K = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool ring = (j == i + 1);
            if (ring || u(rng) < density) K(i, j) = K(j, i) = 0.05 + u(rng);
        }
    const double lazy_frac = 0.3 * u(rng);
    K *= (1.0 - lazy_frac) / K.rowwise().sum().maxCoeff();
    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) {
                A(i, j) = K(i, j) * std::min(1.0, pi(j) / pi(i));
                off += A(i, j);
            }
        A(i, i) = 1.0 - off;
    }
    return ReversibleChain::make(std::move(A), pi);
}

Vector chain_spectrum(const ReversibleChain& c)
{
    const Vector s = c.pi.cwiseSqrt();
    Matrix S = s.asDiagonal() * c.A * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

double lambda2(const ReversibleChain& c)
{
    if (c.size() < 2) return 1.0;
    return chain_spectrum(c)(1);
}

Configuration configuration(const FiniteMetric& m, const std::vector<int>& x)
{
    const int n = static_cast<int>(x.size());
    Configuration cfg;
    cfg.dist.resize(n, n);
    for (int i = 0; i < n; ++i)
        if (x[i] < 0 || x[i] >= m.size()) fail(Errc::IndexMismatch, "configuration value outside the metric");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cfg.dist(i, j) = m(x[i], x[j]);
    return cfg;
}

Configuration configuration(const PointCloud& c) { return Configuration{c.pairwise()}; }

double rayleigh(const Configuration& x, const Matrix& A, const Vector& pi, double p)
{
    const int n = x.size();
    if (A.rows() != n || pi.size() != n) fail(Errc::IndexMismatch, "configuration size differs from chain size");
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double dp = powp(x.dist(i, j), p);
            num += pi(i) * A(i, j) * dp;
            den += pi(i) * pi(j) * dp;
        }
    if (!(den > 0.0)) fail(Errc::DegenerateConfiguration, "configuration is constant on the support of pi");
    return num / den;
}

double rayleigh(const Configuration& x, const ReversibleChain& c, double p) { return rayleigh(x, c.A, c.pi, p); }

double gamma_hilbert(const ReversibleChain& c)
{
    const double l2 = lambda2(c);
    if (!(l2 < 1.0 - 1e-12)) fail(Errc::NoGap, "lambda2 = 1: the chain has no spectral gap");
    return 1.0 / (1.0 - l2);
}

double gamma_bruteforce(const ReversibleChain& c, const FiniteMetric& m, double p)
{
    const int n = c.size(), k = m.size();
    if (k < 2) fail(Errc::DegenerateConfiguration, "a one-point target has no non-constant configuration");
    double total = 1.0;
    for (int i = 0; i < n; ++i) total *= k;
    if (total > 1e6) fail(Errc::TooLarge, "m.n^chain.n exceeds 1e6");
    const std::size_t count = static_cast<std::size_t>(total);
    Matrix dp = m.dist().unaryExpr([p](double d) { return powp(d, p); });
    const std::size_t nb = (count + kBlock - 1) / kBlock;
    std::vector<double> part(nb, 0.0);
    parallel_for(nb, [&](std::size_t b) {
        std::vector<int> x(n);
        double best = 0.0;
        const std::size_t hi = std::min(count, (b + 1) * kBlock);
        for (std::size_t code = b * kBlock; code < hi; ++code) {
            std::size_t c2 = code;
            bool constant = true;
            for (int i = 0; i < n; ++i) {
                x[i] = static_cast<int>(c2 % k);
                c2 /= k;
                constant = constant && x[i] == x[0];
            }
            if (constant) continue;
            double num = 0.0, den = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double d = dp(x[i], x[j]);
                    num += c.pi(i) * c.A(i, j) * d;
                    den += c.pi(i) * c.pi(j) * d;
                }
            if (den > 0.0) best = std::max(best, den / num);
        }
        part[b] = best;
    });
    return *std::max_element(part.begin(), part.end());
}

double gamma_sampled_lower_bound(const ReversibleChain& c, Norm norm, int dim, double p, int samples,
                                 std::uint64_t seed)
{
    const int n = c.size();
    const Vector s = c.pi.cwiseSqrt();
    Matrix S = s.asDiagonal() * c.A * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()));
    const Vector v2 = es.eigenvectors().col(n - 2).cwiseQuotient(s);
    std::vector<double> part(samples, 0.0);
    parallel_for(samples, [&](std::size_t t) {
        std::mt19937_64 rng(derive_seed(seed, t));
        std::normal_distribution<double> g;
        PointCloud x;
        x.norm = norm;
        x.coords.resize(n, dim);
        const double noise = (t % 2 == 0) ? 1.0 : 0.1;
        Vector dir(dim);
        for (int j = 0; j < dim; ++j) dir(j) = g(rng);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < dim; ++j) x.coords(i, j) = (t % 2 ? v2(i) * dir(j) : 0.0) + noise * g(rng);
        const double r = rayleigh(configuration(x), c, p);
        part[t] = 1.0 / r;
    });
    return *std::max_element(part.begin(), part.end());
}

HilbertIdentity hilbert_rayleigh_identity(const PointCloud& x, const ReversibleChain& c)
{
    if (x.norm.kind != Norm::l2) fail(Errc::ParameterDomain, "the Hilbert identity needs an l2 cloud");
    if (x.size() != c.size()) fail(Errc::IndexMismatch, "cloud size differs from chain size");
    const Eigen::RowVectorXd mean = c.pi.transpose() * x.coords;
    PointCloud xc = x;
    xc.coords.rowwise() -= mean;
    const double den = (c.pi.asDiagonal() * xc.coords.rowwise().squaredNorm()).sum();
    if (!(den > 0.0)) fail(Errc::DegenerateConfiguration, "configuration is constant");
    const Matrix ax = c.A * xc.coords;
    const double num = (c.pi.asDiagonal() * ax.rowwise().squaredNorm()).sum();
    HilbertIdentity h;
    h.lhs = std::sqrt(num / den);
    h.rayleigh_a2 = rayleigh(configuration(xc), c.A * c.A, c.pi, 2.0);
    h.rhs = std::sqrt(std::max(0.0, 1.0 - h.rayleigh_a2));
    return h;
}

HilbertPair hilbert_pair(const PointCloud& x)
{
    const double m = std::max(1, x.dim());
    HilbertPair h;
    switch (x.norm.kind) {
    case Norm::l2: break;
    case Norm::l1: h.d = std::sqrt(m); break;
    case Norm::linf:
        h.h_scale = 1.0 / std::sqrt(m);
        h.d = std::sqrt(m);
        break;
    case Norm::lp:
        if (x.norm.p < 2.0) {
            h.d = std::pow(m, 1.0 / x.norm.p - 0.5);
        } else {
            h.h_scale = std::pow(m, 1.0 / x.norm.p - 0.5);
            h.d = std::pow(m, 0.5 - 1.0 / x.norm.p);
        }
        break;
    }
    return h;
}

TParameter t_parameter(const PointCloud& x, const ReversibleChain& c, double d, int t_cap)
{
    if (x.size() != c.size()) fail(Errc::IndexMismatch, "cloud size differs from chain size");
    if (d <= 0.0) d = hilbert_pair(x).d;
    if (d < 1.0) fail(Errc::ParameterDomain, "d must be at least 1");
    PointCloud h = x;
    h.norm.kind = Norm::l2;  // the scale h_scale cancels in the quotient
    const Configuration hc = configuration(h);
    const double thr = 1.0 - 1.0 / (4.0 * d * d);
    const Matrix L = lazy(c);
    const Matrix L2 = L * L;
    Matrix M = L2;
    for (int t = 1; t <= t_cap; ++t) {
        const double r = rayleigh(hc, M, c.pi, 2.0);
        if (r >= thr) return {t, r};
        M = M * L2;
        if (t % 16 == 0) renormalize_rows(M);
    }
    fail(Errc::CapExceeded, "no t below the cap reaches the Hilbert threshold");
}

int t_upper_bound(double l2, double d)
{
    if (!(l2 < 1.0)) return std::numeric_limits<int>::max();
    const double v = std::ceil(std::log(2.0 * d) / std::log(2.0 / (1.0 + l2)));
    return std::max(1, static_cast<int>(v));
}

PowerCheck power_expander_check(const PointCloud& x, const ReversibleChain& c, int t_cap)
{
    const Configuration xc = configuration(x);
    PowerCheck out;
    out.rayleigh_a = rayleigh(xc, c, 2.0);
    out.t = t_parameter(x, c, hilbert_pair(x).d, t_cap).t;
    out.value = rayleigh(xc, matrix_power(lazy(c), out.t), c.pi, 2.0);
    return out;
}

DimExponent dim_lower_exponent(const PointCloud& f, const ReversibleChain& c)
{
    if (f.size() != c.size()) fail(Errc::IndexMismatch, "cloud size differs from chain size");
    const Matrix D = f.pairwise();
    double edge = 0.0, all = 0.0;
    for (int i = 0; i < c.size(); ++i)
        for (int j = 0; j < c.size(); ++j) {
            edge += c.pi(i) * c.A(i, j) * D(i, j) * D(i, j);
            all += c.pi(i) * c.pi(j) * D(i, j) * D(i, j);
        }
    DimExponent out;
    out.alpha_hat = std::sqrt(edge);
    if (all == 0.0) return out;
    if (edge == 0.0) fail(Errc::DegenerateCloud, "cloud is constant along every edge but not globally");
    out.exponent = (1.0 - lambda2(c)) / out.alpha_hat * std::sqrt(all);
    return out;
}

double conductance(const ReversibleChain& c, const std::vector<char>& in)
{
    double q = 0.0, ps = 0.0;
    for (int i = 0; i < c.size(); ++i) {
        if (!in[i]) continue;
        ps += c.pi(i);
        for (int j = 0; j < c.size(); ++j)
            if (!in[j]) q += c.pi(i) * c.A(i, j);
    }
    const double den = std::min(ps, 1.0 - ps);
    return den > 0.0 ? q / den : std::numeric_limits<double>::infinity();
}

CheegerCut cheeger_sweep(const ReversibleChain& c)
{
    const int n = c.size();
    if (n < 2) fail(Errc::InvalidInput, "sweep needs two states");
    if (!chain_connected(c.A)) fail(Errc::Disconnected, "chain is reducible");
    const Vector s = c.pi.cwiseSqrt();
    Matrix S = s.asDiagonal() * c.A * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()));
    const Vector f = es.eigenvectors().col(n - 2).cwiseQuotient(s);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f(a) < f(b); });
    CheegerCut best;
    best.conductance = std::numeric_limits<double>::infinity();
    std::vector<char> in(n, 0);
    for (int k = 0; k + 1 < n; ++k) {
        in[order[k]] = 1;
        const double phi = conductance(c, in);
        if (phi < best.conductance) {
            best.conductance = phi;
            best.side.assign(order.begin(), order.begin() + k + 1);
        }
    }
    std::sort(best.side.begin(), best.side.end());
    return best;
}

MarkovConvexity markov_convexity_ratio(const MarkovChainSpec& spec, std::uint64_t samples, std::uint64_t seed,
                                       McMethod method, Exec exec)
{
    const int S = static_cast<int>(spec.P.rows()), T = spec.horizon;
    if (spec.P.cols() != S || spec.init.size() != S || spec.fdist.rows() != S || spec.fdist.cols() != S)
        fail(Errc::IndexMismatch, "chain, initial law and image distances disagree in size");
    if (T < 2) fail(Errc::ParameterDomain, "horizon must be at least 2");
    if (T > 64) fail(Errc::HorizonTooLarge, "horizon above 64");
    if (S > 64) fail(Errc::TooLarge, "more than 64 states");
    if (!(spec.q > 0.0)) fail(Errc::ParameterDomain, "q must be positive");
    for (int i = 0; i < S; ++i)
        if (spec.P.row(i).minCoeff() < 0.0 || std::abs(spec.P.row(i).sum() - 1.0) > 1e-12)
            fail(Errc::InvalidInput, "transition rows must be probability vectors");
    const Matrix Dq = spec.fdist.unaryExpr([&](double d) { return powp(d, spec.q); });

    MarkovConvexity out;
    const bool exact = method == McMethod::exact ||
                       (method == McMethod::automatic && static_cast<double>(S) * S * T <= 1e5);
    if (exact) {
        std::vector<Vector> mu(T + 1);
        mu[0] = spec.init;
        for (int t = 1; t <= T; ++t) mu[t] = (mu[t - 1].transpose() * spec.P).transpose();
        for (int t = 1; t <= T; ++t)
            out.rhs_q += mu[t - 1].dot((spec.P.cwiseProduct(Dq)).rowwise().sum());
        Matrix Pk = spec.P;
        for (int k = 1; (1 << k) <= T; ++k) {
            Pk = Pk * Pk;  // P^{2^k}
            const Vector diag = (Pk * Dq * Pk.transpose()).diagonal();
            const double w = std::pow(2.0, -spec.q * k);
            for (int t = 1 << k; t <= T; ++t) out.lhs_q += w * mu[t - (1 << k)].dot(diag);
        }
        out.exact = true;
    } else {
        Matrix cum(S, S);
        for (int i = 0; i < S; ++i) {
            double acc = 0.0;
            for (int j = 0; j < S; ++j) cum(i, j) = (acc += spec.P(i, j));
        }
        Vector icum(S);
        {
            double acc = 0.0;
            for (int j = 0; j < S; ++j) icum(j) = (acc += spec.init(j));
        }
        auto pick = [&](const double* row, double u) {
            for (int j = 0; j < S; ++j)
                if (u < row[j]) return j;
            return S - 1;
        };
        const Matrix cumT = cum.transpose();  // column-major rows for pick()
        auto st = monte_carlo<2>(
            samples, seed,
            [&](std::mt19937_64& rng, std::array<double, 2>& o) {
                std::uniform_real_distribution<double> u(0.0, 1.0);
                std::vector<int> path(T + 1);
                path[0] = pick(icum.data(), u(rng));
                for (int t = 1; t <= T; ++t) path[t] = pick(cumT.col(path[t - 1]).data(), u(rng));
                double r = 0.0, l = 0.0;
                for (int t = 1; t <= T; ++t) r += Dq(path[t], path[t - 1]);
                for (int k = 1; (1 << k) <= T; ++k) {
                    const double w = std::pow(2.0, -spec.q * k);
                    for (int t = 1 << k; t <= T; ++t) {
                        int y = path[t - (1 << k)];
                        for (int s = 0; s < (1 << k); ++s) y = pick(cumT.col(y).data(), u(rng));
                        l += w * Dq(y, path[t]);
                    }
                }
                o[0] = l;
                o[1] = r;
            },
            exec);
        out.lhs_q = st.mean[0];
        out.rhs_q = st.mean[1];
        out.lhs_q_se = st.std_error[0];
        out.rhs_q_se = st.std_error[1];
        out.samples = samples;
    }
    out.lhs = std::pow(out.lhs_q, 1.0 / spec.q);
    out.rhs = std::pow(out.rhs_q, 1.0 / spec.q);
    out.ratio = out.lhs == 0.0 ? 0.0 : (out.rhs > 0.0 ? out.lhs / out.rhs : std::numeric_limits<double>::infinity());
    return out;
}

}  // namespace mdr
