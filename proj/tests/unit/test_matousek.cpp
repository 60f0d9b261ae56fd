#include <cmath>
#include <sstream>

#include "mdr/matousek.hpp"
#include "support.hpp"

using namespace mdr;

TEST_SUITE("graph") {

TEST_CASE("girth of small graphs")
{
    CHECK(girth(Graph{4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}}) == 4);
    CHECK(girth(Graph{5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}}) == kUnreachable);
    Graph c6{6, {}};
    for (int i = 0; i < 6; ++i) c6.edges.push_back({i, (i + 1) % 6});
    CHECK(girth(c6) == 6);
    CHECK(girth(c6, Exec::serial) == 6);
    CHECK(girth(Graph{3, {{0, 1}, {1, 2}, {0, 2}}}) == 3);
}

TEST_CASE("hop distances")
{
    Graph p{4, {{0, 1}, {1, 2}}};
    const auto h = all_pairs_hops(p);
    CHECK(h[0 * 4 + 2] == 2);
    CHECK(h[0 * 4 + 3] == kUnreachable);
    CHECK(h == all_pairs_hops(p, Exec::serial));
    CHECK(!is_connected(p));
    CHECK(is_connected(Graph{1, {}}));
}

}  // TEST_SUITE

TEST_SUITE("matousek") {

TEST_CASE("templates meet the girth target")
{
    for (std::uint64_t s = 0; s < 50; ++s) {
        const TemplateGraph t = gen_template(64, 6, s);
        CHECK(t.girth >= 6);
        CHECK(t.girth == girth(t.graph(), Exec::serial));
    }
    const TemplateGraph t = gen_template(20, 4, 1);
    for (std::size_t e = 1; e < t.edges.size(); ++e) CHECK(t.edges[e - 1] < t.edges[e]);
    CHECK_ERRC(gen_template(1, 4, 0), Errc::ParameterDomain);
    CHECK_ERRC(gen_template(10, 5, 0), Errc::ParameterDomain);
    CHECK_ERRC(gen_template(10, 2, 0), Errc::ParameterDomain);
}

TEST_CASE("edge density grows with n")
{
    auto mean_edges = [](int n) {
        double s = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) s += gen_template(n, 6, seed).edges.size();
        return s / 20.0;
    };
    CHECK(mean_edges(64) > mean_edges(32));
    CHECK(mean_edges(32) > mean_edges(16));
}

TEST_CASE("signed metrics")
{
    for (std::uint64_t s = 0; s < 100; ++s) {
        const int g = 4 + 2 * static_cast<int>(s % 3);
        const TemplateGraph t = gen_template(12, g, s);
        const auto sigma = random_signs(t.edges.size(), s + 1000);
        const double sc = 0.5 + (s % 4), T = sc * (1 + s % (2 * g));
        const FiniteMetric m = signed_metric(t, sigma, {sc, T});
        REQUIRE(m.size() == 36);
        CHECK(m.dist().maxCoeff() <= T);
        for (std::size_t e = 0; e < t.edges.size(); ++e) {
            const auto [l, r] = t.edges[e];
            CHECK(m(sigma[e] > 0 ? l : 12 + l, 24 + r) == doctest::Approx(std::min(sc, T)));
        }
        const double bound = t.girth == kUnreachable ? T : std::min(sc * t.girth, T);
        for (int l = 0; l < 12; ++l) CHECK(m(l, 12 + l) >= bound - 1e-12);
        const auto fh = fork_hops(t, sigma);
        for (int l = 0; l < 12; ++l)
            if (fh[l] != kUnreachable) CHECK(fh[l] >= t.girth);
    }
}

TEST_CASE("signed metric errors")
{
    const TemplateGraph t = gen_template(6, 4, 3);
    const auto sigma = random_signs(t.edges.size(), 1);
    CHECK_ERRC(signed_metric(t, sigma, {0.0, 1.0}), Errc::ParameterDomain);
    CHECK_ERRC(signed_metric(t, sigma, {2.0, 1.0}), Errc::ParameterDomain);
    CHECK_ERRC(signed_graph(t, std::vector<int>(t.edges.size() + 1, 1)), Errc::IndexMismatch);
    if (!t.edges.empty()) CHECK_ERRC(signed_graph(t, std::vector<int>(t.edges.size(), 0)), Errc::InvalidInput);
}

TEST_CASE("beta modulus")
{
    for (double a : {1.0, 2.0, 5.0}) {
        CHECK(beta_modulus(ModulusPair::power_family(3.0, 3.0 * a, 1.0)) == doctest::Approx(1.0 / (2.0 * a)));
        for (double th : {0.25, 0.5, 1.0})
            CHECK(beta_modulus(ModulusPair::power_family(1.0, a, th)) ==
                  doctest::Approx(std::pow(2.0 * a, -1.0 / th)));
    }
    std::vector<double> s, w, W;
    for (int i = 1; i <= 1000; ++i) {
        const double x = 0.01 * i;
        s.push_back(x);
        w.push_back(std::sqrt(x));
        W.push_back(2.0 * std::sqrt(x));
    }
    const double tab = beta_modulus(ModulusPair::table(s, w, W));
    CHECK(std::abs(tab - 1.0 / 16.0) <= 1e-3);
    CHECK_ERRC(beta_modulus(ModulusPair::table(s, w, W), {10.0}), Errc::InverseOutOfRange);
    CHECK_ERRC(ModulusPair::table({1, 2}, {1, 3}, {2, 2.5}), Errc::ParameterDomain);
    CHECK_ERRC(ModulusPair::power_family(2.0, 1.0, 1.0), Errc::ParameterDomain);
    CHECK_ERRC(ModulusPair::power_family(1.0, 1.0, 1.5), Errc::ParameterDomain);
}

TEST_CASE("coarse dimension exponent")
{
    const ModulusPair bl = ModulusPair::power_family(1.0, 2.0, 1.0);
    CHECK(coarse_dim_exponent(3e4, bl) == doctest::Approx(0.25 * std::log(3e4)));
    CHECK(coarse_dim_exponent(1e6, bl) > coarse_dim_exponent(1e3, bl));
    CHECK(coarse_dim_exponent(1e6, ModulusPair::power_family(1.0, 1e6, 1.0)) < 1e-5);
    CHECK_ERRC(coarse_dim_exponent(1.0, bl), Errc::ParameterDomain);
}

TEST_CASE("experiment harness")
{
    const auto rows = experiment_harness(16, 4, 1.0, 6.0, 7, 42);
    CHECK(rows.size() == 7);
    for (const auto& r : rows) {
        CHECK(r.min_fork_dist >= std::min(r.s * r.g, r.T));
        CHECK(r.volumetric_lb == doctest::Approx(std::log(48.0) / std::log(3.0)));
    }
    const std::string csv = harness_csv(rows);
    CHECK(csv.rfind("trial,n,g,s,T,edges,girth,min_fork_dist,doubling_lb,volumetric_lb\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
    CHECK(csv == harness_csv(experiment_harness(16, 4, 1.0, 6.0, 7, 42, 2.0, Exec::serial)));
    CHECK_ERRC(experiment_harness(16, 8, 1.0, 6.0, 1, 0), Errc::ParameterDomain);
    CHECK_ERRC(experiment_harness(16, 4, 1.0, 6.0, -1, 0), Errc::ParameterDomain);
}

}  // TEST_SUITE
