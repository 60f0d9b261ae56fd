#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mdr/common.hpp"

namespace mdr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class FiniteMetric {
public:
    FiniteMetric() = default;

    // validates; throws Error on any invariant violation
    static FiniteMetric build(const Matrix& dist, Exec exec = Exec::parallel);
    static FiniteMetric equilateral(int n, double d = 1.0);

    int size() const { return static_cast<int>(d_.rows()); }
    double operator()(int i, int j) const { return d_(i, j); }
    const Matrix& dist() const { return d_; }
    double max_entry() const { return d_.size() ? d_.maxCoeff() : 0.0; }

private:
    explicit FiniteMetric(Matrix d) : d_(std::move(d)) {}
    Matrix d_;
};

struct Triple {
    int i, j, k;
};

// first (lexicographic) triple with d(i,k) > d(i,j) + d(j,k) + tol
std::optional<Triple> find_triangle_violation(const Matrix& d, double tol, Exec exec = Exec::parallel);

struct Norm {
    enum Kind { l2, l1, linf, lp } kind = l2;
    double p = 2.0;

    static Norm make_lp(double p);
    double of(const Eigen::Ref<const Vector>& v) const;
};

struct PointCloud {
    Matrix coords;  // n x dim
    Norm norm;

    int size() const { return static_cast<int>(coords.rows()); }
    int dim() const { return static_cast<int>(coords.cols()); }
    double distance(int i, int j) const;
    Matrix pairwise(Exec exec = Exec::parallel) const;
    FiniteMetric metric(Exec exec = Exec::parallel) const;
};

struct EmbeddingReport {
    double distortion = 1.0;
    double scale = 1.0;
    double expansion = 1.0;
    double contraction = 1.0;
    double avg_ratio = 1.0;
};

// map[i] = index in target of the image of source point i
EmbeddingReport distortion(const FiniteMetric& source, const Matrix& target_dist, const std::vector<int>& map);
EmbeddingReport distortion(const FiniteMetric& source, const FiniteMetric& target, const std::vector<int>& map);
EmbeddingReport distortion(const FiniteMetric& source, const PointCloud& image);

PointCloud frechet_embed(const FiniteMetric& m);

struct BourgainParams {
    int scales = 0;            // 0: ceil(log2 n)
    int subsets_per_scale = 0; // 0: max(1, ceil(24 log2 n))
};
PointCloud bourgain_embed(const FiniteMetric& m, std::uint64_t seed, BourgainParams params = {});

// shortest-path closure of i.i.d. uniform [lo,hi] edge weights on K_n
FiniteMetric random_metric(int n, std::uint64_t seed, double lo = 1.0, double hi = 2.0);

FiniteMetric snowflake(const FiniteMetric& m, double theta);

enum class DoublingMode { exact, greedy };
double doubling_constant(const FiniteMetric& m, DoublingMode mode);

double doubling_dim_lower_bound(const FiniteMetric& m, double alpha);
double volumetric_lower_bound(double n, double alpha);

struct CotypeSides {
    double lhs = 0.0;
    double rhs = 0.0;
};
// points[w] indexes m; w runs over Z_{2mm}^nn in mixed radix with coordinate 0 fastest
CotypeSides metric_cotype_ratio(const FiniteMetric& m, const std::vector<int>& points, double q, int mm, int nn);

}  // namespace mdr
