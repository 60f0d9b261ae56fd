#include "mdr/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mdr/parallel.hpp"

namespace mdr {

namespace {

std::string triple_str(const Triple& t)
{
    std::ostringstream os;
    os << "(" << t.i << "," << t.j << "," << t.k << ")";
    return os.str();
}

}  // namespace

std::optional<Triple> find_triangle_violation(const Matrix& d, double tol, Exec exec)
{
    const int n = static_cast<int>(d.rows());
    std::vector<int> first(n, -1);
    std::vector<Triple> hit(n);
    parallel_for(
        n,
        [&](std::size_t ii) {
            const int i = static_cast<int>(ii);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    if (d(i, k) > d(i, j) + d(j, k) + tol) {
                        first[i] = 1;
                        hit[i] = {i, j, k};
                        return;
                    }
        },
        exec);
    for (int i = 0; i < n; ++i)
        if (first[i] >= 0) return hit[i];
    return std::nullopt;
}

FiniteMetric FiniteMetric::build(const Matrix& dist, Exec exec)
{
    if (dist.rows() != dist.cols()) fail(Errc::NotSquare, "distance matrix is not square");
    const int n = static_cast<int>(dist.rows());
    if (!dist.allFinite()) fail(Errc::NonFinite, "distance matrix has non-finite entries");
    for (int i = 0; i < n; ++i)
        if (dist(i, i) != 0.0)
            fail(Errc::NonzeroDiagonal, "nonzero diagonal at " + std::to_string(i));
    const double mx = n ? dist.cwiseAbs().maxCoeff() : 0.0;
    const double tol = 1e-12 * mx;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(dist(i, j) - dist(j, i)) > tol)
                fail(Errc::SymmetryViolation,
                     "d(" + std::to_string(i) + "," + std::to_string(j) + ") != d(" + std::to_string(j) + "," +
                         std::to_string(i) + ")");
            if (dist(i, j) <= 0.0 || dist(j, i) <= 0.0)
                fail(Errc::ZeroOffDiagonal,
                     "non-positive distance between " + std::to_string(i) + " and " + std::to_string(j));
        }
    Matrix sym = 0.5 * (dist + dist.transpose());
    if (auto t = find_triangle_violation(sym, tol, exec))
        fail(Errc::TriangleViolation, "triangle inequality fails on " + triple_str(*t));
    return FiniteMetric(std::move(sym));
}

FiniteMetric FiniteMetric::equilateral(int n, double d)
{
    Matrix m = Matrix::Constant(n, n, d);
    m.diagonal().setZero();
    return FiniteMetric(std::move(m));
}

Norm Norm::make_lp(double p)
{
    if (!(p >= 1.0)) fail(Errc::ParameterDomain, "lp norm needs p >= 1");
    Norm r;
    if (p == 1.0)
        r.kind = l1;
    else if (p == 2.0)
        r.kind = l2;
    else if (std::isinf(p))
        r.kind = linf;
    else
        r.kind = lp;
    r.p = p;
    return r;
}

double Norm::of(const Eigen::Ref<const Vector>& v) const
{
    switch (kind) {
    case l2: return v.norm();
    case l1: return v.lpNorm<1>();
    case linf: return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0;
    case lp: return std::pow(v.array().abs().pow(p).sum(), 1.0 / p);
    }
    return 0.0;
}

double PointCloud::distance(int i, int j) const
{
    Vector diff = (coords.row(i) - coords.row(j)).transpose();
    return norm.of(diff);
}

Matrix PointCloud::pairwise(Exec exec) const
{
    const int n = size();
    Matrix d = Matrix::Zero(n, n);
    parallel_for(
        n,
        [&](std::size_t ii) {
            const int i = static_cast<int>(ii);
            for (int j = i + 1; j < n; ++j) d(i, j) = distance(i, j);
        },
        exec);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) d(j, i) = d(i, j);
    return d;
}

FiniteMetric PointCloud::metric(Exec exec) const { return FiniteMetric::build(pairwise(exec), exec); }

EmbeddingReport distortion(const FiniteMetric& source, const Matrix& target, const std::vector<int>& map)
{
    const int n = source.size();
    if (n < 2) fail(Errc::DegenerateSource, "distortion needs at least two source points");
    if (static_cast<int>(map.size()) != n) fail(Errc::IndexMismatch, "map size differs from source size");
    std::vector<int> seen(map);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        fail(Errc::NonInjectiveMap, "map is not injective");
    if (seen.front() < 0 || seen.back() >= target.rows()) fail(Errc::IndexMismatch, "map index out of range");

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, st = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double t = target(map[i], map[j]);
            const double r = t / source(i, j);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            st += t;
            ss += source(i, j);
        }
    EmbeddingReport rep;
    rep.expansion = hi;
    rep.contraction = lo;
    rep.scale = lo;
    rep.distortion = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    rep.avg_ratio = st / ss;
    return rep;
}

EmbeddingReport distortion(const FiniteMetric& source, const FiniteMetric& target, const std::vector<int>& map)
{
    return distortion(source, target.dist(), map);
}

EmbeddingReport distortion(const FiniteMetric& source, const PointCloud& image)
{
    if (image.size() != source.size()) fail(Errc::IndexMismatch, "image size differs from source size");
    std::vector<int> id(source.size());
    for (int i = 0; i < source.size(); ++i) id[i] = i;
    return distortion(source, image.pairwise(), id);
}

PointCloud frechet_embed(const FiniteMetric& m)
{
    PointCloud c;
    c.norm.kind = Norm::linf;
    c.coords = m.size() == 1 ? Matrix::Zero(1, 1) : m.dist();
    return c;
}

PointCloud bourgain_embed(const FiniteMetric& m, std::uint64_t seed, BourgainParams params)
{
    const int n = m.size();
    if (n < 2) fail(Errc::DegenerateSource, "Bourgain embedding needs at least two points");
    const double lg = std::log2(static_cast<double>(n));
    const int scales = params.scales > 0 ? params.scales : static_cast<int>(std::ceil(lg));
    const int per = params.subsets_per_scale > 0 ? params.subsets_per_scale
                                                 : std::max(1, static_cast<int>(std::ceil(24.0 * lg)));
    const int D = scales * per;
    PointCloud c;
    c.norm.kind = Norm::l2;
    c.coords = Matrix::Zero(n, D);
    const double norm = 1.0 / std::sqrt(static_cast<double>(D));
    parallel_for(D, [&](std::size_t col) {
        std::mt19937_64 rng(derive_seed(seed, col));
        const int j = static_cast<int>(col) / per + 1;
        std::bernoulli_distribution keep(std::ldexp(1.0, -j));
        std::vector<int> S;
        for (int attempt = 0; attempt < 64 && S.empty(); ++attempt)
            for (int i = 0; i < n; ++i)
                if (keep(rng)) S.push_back(i);
        if (S.empty()) S.push_back(static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)));
        for (int x = 0; x < n; ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (int s : S) best = std::min(best, m(x, s));
            c.coords(x, static_cast<Eigen::Index>(col)) = best * norm;
        }
    });
    return c;
}

FiniteMetric snowflake(const FiniteMetric& m, double theta)
{
    if (!(theta > 0.0 && theta <= 1.0)) fail(Errc::ThetaOutOfRange, "snowflake exponent must lie in (0,1]");
    if (theta == 1.0) return m;
    return FiniteMetric::build(m.dist().array().pow(theta).matrix());
}

namespace {

std::vector<double> distinct_positive(const Matrix& d, int x)
{
    std::vector<double> r;
    for (int y = 0; y < d.cols(); ++y)
        if (d(x, y) > 0.0) r.push_back(d(x, y));
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

bool within(double dist, double radius) { return dist <= radius * (1.0 + 1e-12); }

int min_cover_exact(const std::vector<std::uint32_t>& sets, std::uint32_t full)
{
    if (full == 0) return 0;
    std::vector<char> seen(static_cast<std::size_t>(full) + 1, 0);
    std::vector<std::uint32_t> frontier{0};
    seen[0] = 1;
    for (int depth = 1;; ++depth) {
        std::vector<std::uint32_t> next;
        for (auto cur : frontier)
            for (auto s : sets) {
                const std::uint32_t m = cur | s;
                if (m == full) return depth;
                if (!seen[m]) {
                    seen[m] = 1;
                    next.push_back(m);
                }
            }
        if (next.empty()) return -1;
        frontier.swap(next);
    }
}

int min_cover_greedy(const std::vector<std::vector<int>>& sets, int b)
{
    std::vector<char> covered(b, 0);
    int left = b, count = 0;
    while (left > 0) {
        int best = -1, gain = 0;
        for (std::size_t s = 0; s < sets.size(); ++s) {
            int g = 0;
            for (int v : sets[s]) g += !covered[v];
            if (g > gain) {
                gain = g;
                best = static_cast<int>(s);
            }
        }
        for (int v : sets[best])
            if (!covered[v]) {
                covered[v] = 1;
                --left;
            }
        ++count;
    }
    return count;
}

}  // namespace

double doubling_constant(const FiniteMetric& m, DoublingMode mode)
{
    const int n = m.size();
    if (mode == DoublingMode::exact && n > 16)
        fail(Errc::TooLargeForExact, "exact doubling constant limited to 16 points");
    if (n <= 1) return 1.0;
    const Matrix& d = m.dist();
    std::vector<int> worst(n, 1);
    parallel_for(n, [&](std::size_t xx) {
        const int x = static_cast<int>(xx);
        for (double r : distinct_positive(d, x)) {
            std::vector<int> ball;
            for (int y = 0; y < n; ++y)
                if (within(d(x, y), r)) ball.push_back(y);
            const int b = static_cast<int>(ball.size());
            int k;
            if (mode == DoublingMode::exact) {
                std::vector<std::uint32_t> sets;
                for (int y = 0; y < n; ++y) {
                    std::uint32_t s = 0;
                    for (int t = 0; t < b; ++t)
                        if (within(d(y, ball[t]), 0.5 * r)) s |= 1u << t;
                    if (s) sets.push_back(s);
                }
                std::sort(sets.begin(), sets.end());
                sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
                k = min_cover_exact(sets, (1u << b) - 1);
            } else {
                std::vector<std::vector<int>> sets;
                for (int y = 0; y < n; ++y) {
                    std::vector<int> s;
                    for (int t = 0; t < b; ++t)
                        if (within(d(y, ball[t]), 0.5 * r)) s.push_back(t);
                    if (!s.empty()) sets.push_back(std::move(s));
                }
                k = min_cover_greedy(sets, b);
            }
            worst[x] = std::max(worst[x], k);
        }
    });
    return *std::max_element(worst.begin(), worst.end());
}

double doubling_dim_lower_bound(const FiniteMetric& m, double alpha)
{
    const int n = m.size();
    if (n < 2) fail(Errc::ParameterDomain, "doubling dimension bound needs at least two points");
    if (!(alpha >= 1.0)) fail(Errc::ParameterDomain, "alpha must be at least 1");
    const Matrix& d = m.dist();
    std::vector<int> best(n, 1);
    parallel_for(n, [&](std::size_t xx) {
        const int x = static_cast<int>(xx);
        std::vector<int> pick;
        for (double r : distinct_positive(d, x)) {
            pick.clear();
            for (int y = 0; y < n; ++y) {
                if (!within(d(x, y), r)) continue;
                bool ok = true;
                for (int z : pick)
                    if (d(y, z) <= 0.5 * r) {
                        ok = false;
                        break;
                    }
                if (ok) pick.push_back(y);
            }
            best[x] = std::max(best[x], static_cast<int>(pick.size()));
        }
    });
    const int K = *std::max_element(best.begin(), best.end());
    return std::log(static_cast<double>(K)) / std::log(4.0 * alpha + 1.0);
}

double volumetric_lower_bound(double n, double alpha)
{
    if (!(n >= 2.0)) fail(Errc::ParameterDomain, "volumetric bound needs n >= 2");
    if (!(alpha >= 1.0)) fail(Errc::ParameterDomain, "alpha must be at least 1");
    return std::log(n) / std::log(alpha + 1.0);
}

CotypeSides metric_cotype_ratio(const FiniteMetric& m, const std::vector<int>& points, double q, int mm, int nn)
{
    if (mm < 1 || nn < 1 || !(q > 0.0)) fail(Errc::ParameterDomain, "cotype needs m, n >= 1 and q > 0");
    const int side = 2 * mm;
    std::int64_t total = 1;
    for (int i = 0; i < nn; ++i) {
        total *= side;
        if (total > 4096) fail(Errc::ConfigTooLarge, "(2m)^n exceeds 4096");
    }
    if (static_cast<std::int64_t>(points.size()) != total)
        fail(Errc::IndexMismatch, "configuration size must equal (2m)^n");
    for (int p : points)
        if (p < 0 || p >= m.size()) fail(Errc::IndexMismatch, "configuration index outside the metric");

    std::vector<std::int64_t> stride(nn);
    for (int i = 0, s = 1; i < nn; ++i, s *= side) stride[i] = s;
    auto coord = [&](std::int64_t w, int i) { return static_cast<int>((w / stride[i]) % side); };
    auto shift = [&](std::int64_t w, int i, int by) {
        const int c = coord(w, i);
        const int nc = ((c + by) % side + side) % side;
        return w + (nc - c) * stride[i];
    };
    auto d2 = [&](std::int64_t a, std::int64_t b) {
        const double v = m(points[a], points[b]);
        return v * v;
    };

    CotypeSides out;
    double lhs = 0.0;
    for (int i = 0; i < nn; ++i)
        for (std::int64_t w = 0; w < total; ++w) lhs += d2(shift(w, i, mm), w);
    out.lhs = lhs / (static_cast<double>(mm) * mm);

    std::int64_t signs = 1;
    for (int i = 0; i < nn; ++i) signs *= 3;
    const double s = blocked_sum(static_cast<std::size_t>(signs), [&](std::size_t e) {
        std::int64_t code = static_cast<std::int64_t>(e);
        std::vector<int> eps(nn);
        for (int i = 0; i < nn; ++i) {
            eps[i] = static_cast<int>(code % 3) - 1;
            code /= 3;
        }
        double acc = 0.0;
        for (std::int64_t w = 0; w < total; ++w) {
            std::int64_t v = w;
            for (int i = 0; i < nn; ++i)
                if (eps[i]) v = shift(v, i, eps[i]);
            acc += d2(v, w);
        }
        return acc;
    });
    out.rhs = std::pow(static_cast<double>(nn), 1.0 - 2.0 / q) / static_cast<double>(signs) * s;
    return out;
}

}  // namespace mdr

namespace mdr {

FiniteMetric random_metric(int n, std::uint64_t seed, double lo, double hi)
{
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) fail(Errc::ParameterDomain, "random metric needs n >= 1, 0 < lo <= hi");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return FiniteMetric::build(d);
}

}  // namespace mdr
