#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "mdr/harness.hpp"
#include "mdr/io.hpp"
#include "mdr/parallel.hpp"
#include "support.hpp"

using namespace mdr;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> r;
        std::string cell;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) {
                r.push_back(cell);
                cell.clear();
            } else cell += c;
        }
        r.push_back(cell);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("number formatting")
{
    CHECK(fmt_num(1.0 / 3.0) == "0.333333333333");
    CHECK(fmt_num(329) == "329");
    CHECK(fmt_num(INFINITY) == "inf");
    CHECK(sig12(1.0 / 3.0) == 0.333333333333);
    CHECK(jnum(NAN) == "nan");
}

TEST_CASE("json round trips")
{
    const FiniteMetric m = random_metric(6, 1);
    const FiniteMetric back = metric_from_json(Json::parse(to_json(m).dump()));
    CHECK((back.dist() - m.dist()).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK_ERRC(metric_from_json(Json{{"n", 3}, {"dist", to_json(m.dist())}}), Errc::IndexMismatch);

    PointCloud c = cloud_of(Matrix::Random(3, 2), Norm::linf);
    const PointCloud cb = cloud_from_json(Json::parse(to_json(c).dump()));
    CHECK(cb.norm.kind == Norm::linf);
    CHECK((cb.coords - c.coords).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK(norm_from_json(to_json(Norm::make_lp(3.0))).p == 3.0);
    CHECK_ERRC(norm_from_json(Json("l7")), Errc::InvalidInput);

    Graph g{3, {{0, 1, 2.0}, {1, 2}}};
    const Graph gb = graph_from_json(to_json(g));
    CHECK(gb.edges.size() == 2);
    CHECK(gb.edges[0].w == 2.0);
    CHECK_ERRC(graph_from_json(Json::parse(R"({"n":2,"edges":[[0,2]]})")), Errc::IndexMismatch);

    const ReversibleChain ch = chain_from_graph(Graph{3, {{0, 1}, {1, 2}}});
    const ReversibleChain chb = chain_from_json(to_json(ch));
    CHECK(chb.pi(1) == doctest::Approx(0.5));
    CHECK_ERRC(matrix_from_json(Json::parse("[[1,2],[3]]")), Errc::InvalidInput);
}

TEST_CASE("template json carries the partition")
{
    const TemplateGraph t = gen_template(5, 4, 2);
    const Json j = to_json(t);
    CHECK(j["n"] == 10);
    CHECK(j["partition"]["L"].size() == 5);
    CHECK(j["partition"]["R"][0] == 5);
    CHECK(j["edges"].size() == t.edges.size());
}

TEST_CASE("plan json")
{
    const Json g = to_json(make_plan(1000000000, 2.0, JlMode::scaled_gaussian));
    CHECK(g["k"] == 329);
    CHECK(g["haar_dim"].is_null());
    const Json h = to_json(make_plan(1000, 2.0, JlMode::haar_projection));
    CHECK(h["haar_dim"].is_number_integer());
}

}  // TEST_SUITE

TEST_SUITE("harness") {

TEST_CASE("single cell sweep")
{
    const std::string csv = run_sweep(Json::parse(R"({"command":"jl-dim","grid":{"n":[1e9],"alpha":[2],"mode":["gaussian"]}})"), 1);
    const auto rows = parse_csv(csv);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"n", "alpha", "mode", "k", "sigma", "success_prob", "union_bound", "error"});
    CHECK(rows[1][3] == "329");
    CHECK(rows[1].back().empty());
}

TEST_CASE("jl-dim grid is monotone in alpha")
{
    Json spec = Json::parse(R"({"command":"jl-dim","grid":{"n":[1e3,1e4,1e5,1e6,1e7,1e8,1e9],"alpha":[1.5,2,4,10]}})");
    const auto rows = parse_csv(run_sweep(spec, 1));
    REQUIRE(rows.size() == 29);
    for (int n = 0; n < 7; ++n)
        for (int a = 1; a < 4; ++a) {
            const auto& prev = rows[1 + 4 * n + a - 1];
            const auto& cur = rows[1 + 4 * n + a];
            CHECK(cur[0] == prev[0]);
            CHECK(std::stoll(cur[3]) <= std::stoll(prev[3]));
        }
}

TEST_CASE("sweeps are byte identical across thread counts")
{
    const Json spec = Json::parse(
        R"({"command":"psi","seed":77,"grid":{"n":[6,10],"k":[2,3],"alpha":[1.5],"sigma":["max"],"samples":[20000]}})");
    const Json b = Json::parse(R"({"command":"bourgain","grid":{"n":[12,20],"trial":[0,1]}})");
    const int before = max_threads();
    set_threads(1);
    const std::string a1 = run_sweep(spec, 5), b1 = run_sweep(b, 5);
    set_threads(4);
    const std::string a4 = run_sweep(spec, 5), b4 = run_sweep(b, 5);
    set_threads(before);
    CHECK(a1 == a4);
    CHECK(b1 == b4);
    CHECK(a1 != run_sweep(Json::parse(R"({"command":"psi","seed":78,"grid":{"n":[6],"k":[2],"alpha":[1.5],"sigma":["max"],"samples":[20000]}})"), 5));
}

TEST_CASE("per-cell errors do not stop the sweep")
{
    const auto rows = parse_csv(run_sweep(Json::parse(R"({"command":"jl-dim","grid":{"n":[100],"alpha":[1,2]}})"), 0));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].back().rfind("ParameterDomain", 0) == 0);
    CHECK(rows[2].back().empty());
    CHECK(!rows[2][3].empty());
}

TEST_CASE("sweep spec errors")
{
    CHECK_ERRC(run_sweep(Json::parse(R"({"grid":{}})"), 0), Errc::InvalidInput);
    CHECK_ERRC(run_sweep(Json::parse(R"({"command":"nope"})"), 0), Errc::InvalidInput);
    CHECK_ERRC(run_sweep(Json::parse(R"({"command":"jl-dim","grid":{"n":[10],"beta":[1]}})"), 0), Errc::InvalidInput);
    CHECK_ERRC(run_sweep(Json::parse(R"({"command":"jl-dim","grid":{"n":[10]}})"), 0), Errc::InvalidInput);
}

TEST_CASE("pipeline on two points")
{
    const PipelineReport r = pipeline_embed_reduce(FiniteMetric::equilateral(2, 3.0), 1.5, 4);
    CHECK(r.final_dim == 1);
    CHECK(r.distortion == doctest::Approx(1.0));
    CHECK(r.reduction == "span");
}

TEST_CASE("pipeline meets the total budget")
{
    int ok = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const FiniteMetric m = random_metric(64, 500 + s);
        const PointCloud b = bourgain_embed(m, derive_seed(s, 0));
        const double a1 = distortion(m, b).distortion;
        const PipelineReport r = pipeline_embed_reduce(m, 4.0 * a1, s);
        CHECK(r.bourgain_distortion == doctest::Approx(a1));
        if (r.distortion <= 4.0 * a1 + 1e-9) ++ok;
        CHECK(r.final_dim <= 63);
    }
    CHECK(ok == 20);
}

TEST_CASE("pipeline budget errors")
{
    const FiniteMetric m = random_metric(16, 3);
    CHECK_ERRC(pipeline_embed_reduce(m, 1.0, 0), Errc::BudgetInfeasible);
    CHECK_ERRC(pipeline_embed_reduce(FiniteMetric::equilateral(1), 2.0, 0), Errc::DegenerateSource);
}

}  // TEST_SUITE
