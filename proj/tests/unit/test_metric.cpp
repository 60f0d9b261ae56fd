#include <cmath>

#include "support.hpp"

using namespace mdr;

TEST_SUITE("metric") {

TEST_CASE("build accepts valid metrics")
{
    const FiniteMetric one = FiniteMetric::build(Matrix::Zero(1, 1));
    CHECK(one.size() == 1);
    const FiniteMetric line = metric_of({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    CHECK(line(0, 2) == 2.0);
}

TEST_CASE("build rejects broken matrices")
{
    CHECK_ERRC(metric_of({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), Errc::TriangleViolation);
    try {
        metric_of({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("(0,1,2)") != std::string::npos);
    }
    CHECK_ERRC(metric_of({{0, 1}, {2, 0}}), Errc::SymmetryViolation);
    CHECK_ERRC(metric_of({{1, 1}, {1, 0}}), Errc::NonzeroDiagonal);
    CHECK_ERRC(metric_of({{0, 0}, {0, 0}}), Errc::ZeroOffDiagonal);
    CHECK_ERRC(FiniteMetric::build(Matrix::Zero(2, 3)), Errc::NotSquare);
    Matrix nan = Matrix::Zero(2, 2);
    nan(0, 1) = nan(1, 0) = std::nan("");
    CHECK_ERRC(FiniteMetric::build(nan), Errc::NonFinite);
}

TEST_CASE("tiny asymmetry is averaged away")
{
    Matrix d(2, 2);
    d << 0, 1.0, 1.0 + 1e-14, 0;
    const FiniteMetric m = FiniteMetric::build(d);
    CHECK(m(0, 1) == m(1, 0));
}

TEST_CASE("distortion of identity and scaled clouds")
{
    const FiniteMetric m = metric_of({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    const EmbeddingReport id = distortion(m, m, {0, 1, 2});
    CHECK(id.distortion == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(id.scale == doctest::Approx(1.0));

    Matrix x(3, 1);
    x << 0, 1, 2;
    const EmbeddingReport s1 = distortion(m, cloud_of(x));
    const EmbeddingReport s2 = distortion(m, cloud_of(2.0 * x));
    CHECK(s2.distortion == doctest::Approx(1.0));
    CHECK(s2.scale == doctest::Approx(2.0));
    CHECK(s2.scale == doctest::Approx(2.0 * s1.scale));
    CHECK(s2.avg_ratio == doctest::Approx(2.0));
}

TEST_CASE("distortion reports expansion over contraction")
{
    const FiniteMetric m = FiniteMetric::equilateral(3);
    Matrix x(3, 1);
    x << 0, 1, 3;
    const EmbeddingReport r = distortion(m, cloud_of(x));
    CHECK(r.expansion == doctest::Approx(3.0));
    CHECK(r.contraction == doctest::Approx(1.0));
    CHECK(r.distortion == doctest::Approx(3.0));
    CHECK(r.avg_ratio == doctest::Approx(2.0));
}

TEST_CASE("distortion errors")
{
    const FiniteMetric m = FiniteMetric::equilateral(3);
    CHECK_ERRC(distortion(m, m, {0, 0, 1}), Errc::NonInjectiveMap);
    CHECK_ERRC(distortion(FiniteMetric::equilateral(1), FiniteMetric::equilateral(1), {0}), Errc::DegenerateSource);
    CHECK_ERRC(distortion(m, m, {0, 1}), Errc::IndexMismatch);
}

TEST_CASE("frechet embedding is isometric")
{
    const PointCloud one = frechet_embed(FiniteMetric::equilateral(1));
    CHECK(one.size() == 1);
    CHECK(one.dim() == 1);
    CHECK(one.coords(0, 0) == 0.0);

    const FiniteMetric line = metric_of({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    const PointCloud f = frechet_embed(line);
    CHECK(f.norm.kind == Norm::linf);
    CHECK(f.coords == line.dist());
    CHECK(f.pairwise() == line.dist());

    for (std::uint64_t s = 0; s < 5; ++s) {
        const FiniteMetric m = random_metric(8, s);
        CHECK(distortion(m, frechet_embed(m)).distortion == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("bourgain embedding")
{
    const FiniteMetric two = FiniteMetric::equilateral(2, 3.0);
    CHECK(distortion(two, bourgain_embed(two, 1)).distortion == doctest::Approx(1.0).epsilon(1e-9));
    const FiniteMetric eq = FiniteMetric::equilateral(16);
    const PointCloud b = bourgain_embed(eq, 2);
    CHECK(b.dim() == 4 * 96);
    CHECK(distortion(eq, b).distortion <= 2.0);
    // coordinates are 1-Lipschitz after the 1/sqrt(D) normalisation
    const Matrix bd = b.pairwise();
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) CHECK(bd(i, j) <= eq(i, j) + 1e-12);
    CHECK_ERRC(bourgain_embed(FiniteMetric::equilateral(1), 1), Errc::DegenerateSource);
}

TEST_CASE("bourgain embedding is reproducible across thread counts")
{
    const FiniteMetric m = random_metric(20, 3);
    const PointCloud a = bourgain_embed(m, 9);
    const PointCloud b = bourgain_embed(m, 9);
    CHECK(a.coords == b.coords);
}

TEST_CASE("snowflake")
{
    const FiniteMetric m = metric_of({{0, 1, 4}, {1, 0, 3}, {4, 3, 0}});
    const FiniteMetric s = snowflake(m, 0.5);
    CHECK(s(0, 1) == doctest::Approx(1.0));
    CHECK(s(1, 2) == doctest::Approx(std::sqrt(3.0)));
    CHECK(s(0, 2) == doctest::Approx(2.0));
    CHECK(snowflake(m, 1.0).dist() == m.dist());
    CHECK_ERRC(snowflake(m, 0.0), Errc::ThetaOutOfRange);
    CHECK_ERRC(snowflake(m, 1.5), Errc::ThetaOutOfRange);
}

TEST_CASE("doubling constants")
{
    CHECK(doubling_constant(FiniteMetric::equilateral(1), DoublingMode::exact) == 1.0);
    CHECK(doubling_constant(FiniteMetric::equilateral(5), DoublingMode::exact) == 5.0);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const FiniteMetric m = random_metric(2 + static_cast<int>(s % 9), s, 1.0, 8.0);
        CHECK(doubling_constant(m, DoublingMode::greedy) >= doubling_constant(m, DoublingMode::exact));
    }
    CHECK_ERRC(doubling_constant(FiniteMetric::equilateral(17), DoublingMode::exact), Errc::TooLargeForExact);
    CHECK(doubling_constant(FiniteMetric::equilateral(17), DoublingMode::greedy) == 17.0);
}

TEST_CASE("doubling dimension lower bound")
{
    for (double a : {1.0, 2.0, 7.0})
        CHECK(doubling_dim_lower_bound(FiniteMetric::equilateral(2), a) ==
              doctest::Approx(std::log(2.0) / std::log(4.0 * a + 1.0)));
    CHECK(doubling_dim_lower_bound(FiniteMetric::equilateral(125), 1.0) == doctest::Approx(3.0).epsilon(1e-12));
    const FiniteMetric m = random_metric(12, 4);
    double prev = doubling_dim_lower_bound(m, 1.0);
    for (double a : {1.5, 2.0, 4.0, 10.0}) {
        const double v = doubling_dim_lower_bound(m, a);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("volumetric lower bound")
{
    CHECK(volumetric_lower_bound(2, 1.0) == doctest::Approx(1.0));
    // log(1e9)/log(3) from the extended-precision oracle
    CHECK(volumetric_lower_bound(1e9, 2.0) == doctest::Approx(18.86312946860446).epsilon(1e-14));
    CHECK(std::ceil(volumetric_lower_bound(1e9, 2.0)) == 19.0);
    CHECK(volumetric_lower_bound(100, 2.0) < volumetric_lower_bound(100, 1.5));
    CHECK(volumetric_lower_bound(1000, 2.0) > volumetric_lower_bound(100, 2.0));
    for (double n : {2.0, 5.0, 50.0})
        for (double a : {1.0, 1.2, 3.0}) CHECK(volumetric_lower_bound(n, a) <= n - 1.0 + 1e-12);
}

TEST_CASE("metric cotype ratio")
{
    const FiniteMetric m = FiniteMetric::equilateral(2);
    const CotypeSides c = metric_cotype_ratio(m, {0, 1}, 2.0, 1, 1);
    CHECK(c.lhs == doctest::Approx(2.0));
    // hand count: eps = -1, +1 move to the other point (d^2 = 1) at both w, eps = 0 stays: 4 / 3
    CHECK(c.rhs == doctest::Approx(4.0 / 3.0));
    const CotypeSides d = metric_cotype_ratio(FiniteMetric::equilateral(2, 2.0), {0, 1}, 2.0, 1, 1);
    CHECK(d.lhs == doctest::Approx(4.0 * c.lhs));
    CHECK(d.rhs == doctest::Approx(4.0 * c.rhs));
    const CotypeSides z = metric_cotype_ratio(m, std::vector<int>(16, 0), 2.0, 2, 2);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK_ERRC(metric_cotype_ratio(m, {0, 1, 0}, 2.0, 1, 1), Errc::IndexMismatch);
    CHECK_ERRC(metric_cotype_ratio(m, std::vector<int>(1, 0), 2.0, 4, 5), Errc::ConfigTooLarge);
}

TEST_CASE("norms")
{
    Vector v(3);
    v << 3, -4, 0;
    Norm n;
    CHECK(n.of(v) == doctest::Approx(5.0));
    n.kind = Norm::l1;
    CHECK(n.of(v) == doctest::Approx(7.0));
    n.kind = Norm::linf;
    CHECK(n.of(v) == doctest::Approx(4.0));
    CHECK(Norm::make_lp(3.0).of(v) == doctest::Approx(std::cbrt(91.0)));
    CHECK_ERRC(Norm::make_lp(0.5), Errc::ParameterDomain);
}

}  // TEST_SUITE
