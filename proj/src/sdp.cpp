#include "mdr/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mdr {

namespace {

Matrix psd_clip(const Matrix& q)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (q + q.transpose()));
    Vector l = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

double lsq(const Matrix& q, int i, int j) { return q(i, i) + q(j, j) - 2.0 * q(i, j); }

// Euclidean projection of a vector onto the probability simplex
Vector simplex_project(const Vector& v)
{
    std::vector<double> u(v.data(), v.data() + v.size());
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        const double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0) theta = t;
    }
    return (v.array() - theta).cwiseMax(0.0);
}

struct Feas {
    bool feasible = false;
    bool capped = false;
    long iters = 0;
};

Feas feasible_at(const FiniteMetric& m, double alpha, Matrix& Q, const C2Options& opt)
{
    const int n = m.size();
    const double a2 = alpha * alpha;
    const double scale = m.max_entry() * m.max_entry();
    const double thr = opt.tol * scale;
    Feas f;
    double mark = std::numeric_limits<double>::infinity();
    for (long it = 1; it <= opt.max_iters; ++it) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double d2 = m(i, j) * m(i, j);
                const double L = lsq(Q, i, j);
                double delta = 0.0;
                if (L < d2)
                    delta = 0.25 * (d2 - L);
                else if (L > a2 * d2)
                    delta = 0.25 * (a2 * d2 - L);
                else
                    continue;
                Q(i, i) += delta;
                Q(j, j) += delta;
                Q(i, j) -= delta;
                Q(j, i) -= delta;
            }
        Q = psd_clip(Q);
        const double v = gram_violation(m, Q, alpha) * scale;
        f.iters = it;
        if (v <= thr) {
            f.feasible = true;
            return f;
        }
        if (it % opt.stall_window == 0) {
            if (v > 0.99 * mark) return f;
            mark = v;
        }
    }
    f.capped = true;
    return f;
}

}  // namespace

double gram_violation(const FiniteMetric& m, const Matrix& Q, double alpha)
{
    const int n = m.size();
    const double a2 = alpha * alpha;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d2 = m(i, j) * m(i, j);
            const double L = lsq(Q, i, j);
            worst = std::max({worst, d2 - L, L - a2 * d2});
        }
    const double s = m.max_entry() * m.max_entry();
    return s > 0 ? worst / s : worst;
}

C2Result c2_sdp(const FiniteMetric& m, C2Options opt)
{
    const int n = m.size();
    if (n > 64) fail(Errc::TooLarge, "c2_sdp is limited to 64 points");
    if (!(opt.tol >= 1e-6 * (1 - 1e-12))) fail(Errc::ParameterDomain, "tolerance must be at least 1e-6");
    C2Result res;
    if (n <= 2) {
        res.Q = Matrix::Zero(n, n);
        if (n == 2) {
            const double h = 0.25 * m(0, 1) * m(0, 1);
            res.Q << h, -h, -h, h;
        }
        return res;
    }

    // two explicit feasible starts: classical MDS and the scaled simplex
    const Matrix D2 = m.dist().array().square().matrix();
    const Matrix J = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
    auto ratio_span = [&](const Matrix& q, double& rmin, double& rmax) {
        rmin = std::numeric_limits<double>::infinity();
        rmax = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double r = lsq(q, i, j) / D2(i, j);
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
    };
    Matrix best = J * 0.5;  // simplex Gram: L_ij = 1
    double lo_r, hi_r;
    ratio_span(best, lo_r, hi_r);
    best /= lo_r;
    double a0 = std::sqrt(hi_r / lo_r);
    Matrix mds = psd_clip(-0.5 * J * D2 * J);
    ratio_span(mds, lo_r, hi_r);
    if (lo_r > 0 && std::sqrt(hi_r / lo_r) < a0) {
        a0 = std::sqrt(hi_r / lo_r);
        best = mds / lo_r;
    }

    res.lo = 1.0;
    res.hi = a0;
    res.Q = best;
    while (res.hi - res.lo > opt.tol) {
        const double mid = 0.5 * (res.lo + res.hi);
        Matrix q = res.Q;
        const Feas f = feasible_at(m, mid, q, opt);
        res.iterations += f.iters;
        if (f.capped) res.converged = false;
        if (f.feasible) {
            res.hi = mid;
            res.Q = q;
        } else {
            res.lo = mid;
        }
    }
    res.alpha = res.hi;
    return res;
}

CertificateCheck check_certificate(const FiniteMetric& m, const Matrix& A, double alpha)
{
    const int n = m.size();
    if (A.rows() != n || A.cols() != n) fail(Errc::IndexMismatch, "certificate size differs from metric size");
    if (!(alpha >= 1.0)) fail(Errc::ParameterDomain, "alpha must be at least 1");
    const double tol = 1e-9 * std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol) fail(Errc::CertificateInvalid, "certificate is not symmetric");
    if (A.rowwise().sum().cwiseAbs().maxCoeff() > tol) fail(Errc::CertificateInvalid, "certificate rows do not sum to 0");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) fail(Errc::CertificateInvalid, "certificate is not positive semidefinite");
    const Matrix D2 = m.dist().array().square().matrix();
    CertificateCheck c;
    c.lhs = (A.array() * D2.array()).sum();
    c.rhs = (alpha * alpha - 1.0) / (alpha * alpha + 1.0) * (A.array().abs() * D2.array()).sum();
    c.holds = c.lhs <= c.rhs + 1e-12 * std::abs(c.rhs);
    return c;
}

CertificateSearch search_certificate(const FiniteMetric& m, double alpha, int iters, std::uint64_t seed)
{
    const int n = m.size();
    if (n < 2) fail(Errc::DegenerateSource, "certificate search needs two points");
    const double c = (alpha * alpha - 1.0) / (alpha * alpha + 1.0);
    const Matrix D2 = m.dist().array().square().matrix();

    // orthonormal basis of the complement of the all-ones vector
    Matrix J = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
    Eigen::SelfAdjointEigenSolver<Matrix> ej(J);
    const Matrix V = ej.eigenvectors().rightCols(n - 1);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix B = Matrix::Identity(n - 1, n - 1) / (n - 1);
    Matrix P(n - 1, n - 1);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) P(i, j) = g(rng);
    B += 0.1 * (P * P.transpose()) / (P * P.transpose()).trace();
    B /= B.trace();

    auto value = [&](const Matrix& A) { return (A.array() * D2.array()).sum() - c * (A.array().abs() * D2.array()).sum(); };
    CertificateSearch out;
    double bestv = -std::numeric_limits<double>::infinity();
    const double step0 = 1.0 / std::max(1.0, D2.maxCoeff());
    for (int t = 1; t <= iters; ++t) {
        const Matrix A = V * B * V.transpose();
        const double v = value(A);
        if (v > bestv) {
            bestv = v;
            out.A = A;
        }
        Matrix G = D2.array() - c * (A.array().sign() * D2.array());
        Matrix gb = V.transpose() * G * V;
        B += step0 / std::sqrt(static_cast<double>(t)) * gb;
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (B + B.transpose()));
        const Vector l = simplex_project(es.eigenvalues());
        B = es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
    }
    // exact zero row sums for the checker
    out.A = J * out.A * J;
    out.A = 0.5 * (out.A + out.A.transpose());
    const CertificateCheck chk = check_certificate(m, out.A, alpha);
    out.lhs = chk.lhs;
    out.rhs = chk.rhs;
    out.violated = !chk.holds;
    return out;
}

PointCloud extract_points(const Matrix& Q)
{
    const int n = static_cast<int>(Q.rows());
    if (Q.cols() != n) fail(Errc::NotSquare, "Gram matrix is not square");
    const double scale = std::max(1.0, std::abs(Q.trace()));
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) fail(Errc::NotPSD, "Gram matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Q + Q.transpose()));
    if (n && es.eigenvalues().minCoeff() < -1e-9 * scale) fail(Errc::NotPSD, "Gram matrix has a negative eigenvalue");
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 0.0) keep.push_back(i);
    PointCloud c;
    c.norm.kind = Norm::l2;
    if (keep.empty()) {
        c.coords = Matrix::Zero(n, 1);
        return c;
    }
    c.coords.resize(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t t = 0; t < keep.size(); ++t)
        c.coords.col(static_cast<Eigen::Index>(t)) =
            es.eigenvectors().col(keep[t]) * std::sqrt(es.eigenvalues()(keep[t]));
    return c;
}

}  // namespace mdr

namespace mdr {

namespace {

double halton(std::uint64_t i, int base)
{
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

std::vector<int> first_primes(int count)
{
    std::vector<int> p;
    for (int c = 2; static_cast<int>(p.size()) < count; ++c) {
        bool prime = true;
        for (int q : p)
            if (c % q == 0) {
                prime = false;
                break;
            }
        if (prime) p.push_back(c);
    }
    return p;
}

// smoothed log-distortion: softmax(log r) - softmin(log r), r = squared ratio
double smooth_objective(const Matrix& X, const Matrix& D2, double beta, Matrix* grad)
{
    const int n = static_cast<int>(X.rows());
    std::vector<double> lr;
    lr.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            lr.push_back(std::log(std::max((X.row(i) - X.row(j)).squaredNorm(), 1e-300) / D2(i, j)));
    const double mx = *std::max_element(lr.begin(), lr.end());
    const double mn = *std::min_element(lr.begin(), lr.end());
    double sp = 0.0, sm = 0.0;
    for (double v : lr) {
        sp += std::exp(beta * (v - mx));
        sm += std::exp(-beta * (v - mn));
    }
    const double f = mx + std::log(sp) / beta - (mn - std::log(sm) / beta);
    if (grad) {
        grad->setZero(X.rows(), X.cols());
        std::size_t t = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++t) {
                const double w = std::exp(beta * (lr[t] - mx)) / sp - std::exp(-beta * (lr[t] - mn)) / sm;
                const Eigen::RowVectorXd diff = X.row(i) - X.row(j);
                const Eigen::RowVectorXd g = w * 2.0 * diff / std::max(diff.squaredNorm(), 1e-300);
                grad->row(i) += g;
                grad->row(j) -= g;
            }
    }
    return f;
}

double exact_distortion(const Matrix& X, const Matrix& D2)
{
    const int n = static_cast<int>(X.rows());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double r = (X.row(i) - X.row(j)).squaredNorm() / D2(i, j);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    return lo > 0 ? std::sqrt(hi / lo) : std::numeric_limits<double>::infinity();
}

}  // namespace

C2Search c2_configuration_search(const FiniteMetric& m, int starts, std::uint64_t seed)
{
    const int n = m.size();
    if (n < 2) fail(Errc::DegenerateSource, "configuration search needs two points");
    C2Search out;
    out.best.norm.kind = Norm::l2;
    if (n == 2) {
        out.alpha = 1.0;
        out.best.coords = Matrix::Zero(2, 1);
        out.best.coords(1, 0) = m(0, 1);
        return out;
    }
    const int dim = n - 1;
    const Matrix D2 = m.dist().array().square().matrix();
    const auto primes = first_primes(n * dim);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> shift(n * dim);
    for (auto& s : shift) s = u(rng);

    out.alpha = std::numeric_limits<double>::infinity();
    for (int st = 0; st < starts; ++st) {
        Matrix X(n, dim);
        for (int c = 0; c < n * dim; ++c) {
            const double h = std::fmod(halton(static_cast<std::uint64_t>(st) + 1, primes[c]) + shift[c], 1.0);
            X(c / dim, c % dim) = (2.0 * h - 1.0) * m.max_entry();
        }
        Matrix G;
        for (double beta : {10.0, 100.0, 1000.0, 10000.0, 100000.0}) {
            double f = smooth_objective(X, D2, beta, &G);
            double step = 0.1 * m.max_entry();
            for (int it = 0; it < 3000 && step > 1e-14 * m.max_entry(); ++it) {
                const double gn = G.norm();
                if (gn == 0.0) break;
                const Matrix Y = X - (step / gn) * G;
                Matrix GY;
                const double fy = smooth_objective(Y, D2, beta, &GY);
                if (fy < f) {
                    X = Y;
                    f = fy;
                    G = GY;
                    step *= 1.2;
                } else {
                    step *= 0.5;
                }
            }
        }
        const double a = exact_distortion(X, D2);
        if (a < out.alpha) {
            out.alpha = a;
            out.best.coords = X;
        }
    }
    return out;
}

}  // namespace mdr
