#include "mdr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mdr {

std::string fmt_num(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double sig12(double v)
{
    if (!std::isfinite(v)) return v;
    return std::strtod(fmt_num(v).c_str(), nullptr);
}

Json jnum(double v)
{
    if (std::isfinite(v)) return sig12(v);
    return fmt_num(v);
}

namespace {

Json num(double v) { return jnum(v); }

double as_double(const Json& j)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "Infinity") return INFINITY;
        if (s == "-inf") return -INFINITY;
    }
    fail(Errc::InvalidInput, "expected a number in JSON input");
}

}  // namespace

Json to_json(const Matrix& m)
{
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(num(m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j)
{
    if (!j.is_array()) fail(Errc::InvalidInput, "expected a JSON matrix");
    const int n = static_cast<int>(j.size());
    const int c = n ? static_cast<int>(j[0].size()) : 0;
    Matrix m(n, c);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != c) fail(Errc::InvalidInput, "ragged JSON matrix");
        for (int k = 0; k < c; ++k) m(i, k) = as_double(j[i][k]);
    }
    return m;
}

Json to_json(const FiniteMetric& m) { return Json{{"n", m.size()}, {"dist", to_json(m.dist())}}; }

FiniteMetric metric_from_json(const Json& j)
{
    const Matrix d = matrix_from_json(j.at("dist"));
    if (j.contains("n") && j.at("n").get<int>() != d.rows()) fail(Errc::IndexMismatch, "n disagrees with dist");
    return FiniteMetric::build(d);
}

Json to_json(const Norm& n)
{
    switch (n.kind) {
    case Norm::l2: return "l2";
    case Norm::l1: return "l1";
    case Norm::linf: return "linf";
    case Norm::lp: return Json{{"lp", n.p}};
    }
    return "l2";
}

Norm norm_from_json(const Json& j)
{
    if (j.is_object()) return Norm::make_lp(as_double(j.at("lp")));
    const auto s = j.get<std::string>();
    Norm n;
    if (s == "l2")
        n.kind = Norm::l2;
    else if (s == "l1")
        n = Norm::make_lp(1.0);
    else if (s == "linf")
        n.kind = Norm::linf;
    else
        fail(Errc::InvalidInput, "unknown norm '" + s + "'");
    return n;
}

Json to_json(const PointCloud& c)
{
    return Json{{"n", c.size()}, {"dim", c.dim()}, {"norm", to_json(c.norm)}, {"coords", to_json(c.coords)}};
}

PointCloud cloud_from_json(const Json& j)
{
    PointCloud c;
    c.coords = matrix_from_json(j.at("coords"));
    c.norm = j.contains("norm") ? norm_from_json(j.at("norm")) : Norm{};
    return c;
}

Json to_json(const Graph& g)
{
    Json e = Json::array();
    for (const auto& x : g.edges) e.push_back(Json::array({x.u, x.v, num(x.w)}));
    return Json{{"n", g.n}, {"edges", e}};
}

Graph graph_from_json(const Json& j)
{
    Graph g;
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) {
        Edge x;
        x.u = e.at(0).get<int>();
        x.v = e.at(1).get<int>();
        if (e.size() > 2) x.w = as_double(e.at(2));
        if (x.u < 0 || x.v < 0 || x.u >= g.n || x.v >= g.n) fail(Errc::IndexMismatch, "edge endpoint out of range");
        g.edges.push_back(x);
    }
    return g;
}

Json to_json(const ReversibleChain& c)
{
    Json pi = Json::array();
    for (int i = 0; i < c.size(); ++i) pi.push_back(num(c.pi(i)));
    return Json{{"n", c.size()}, {"A", to_json(c.A)}, {"pi", pi}};
}

ReversibleChain chain_from_json(const Json& j)
{
    Matrix A = matrix_from_json(j.at("A"));
    const auto& p = j.at("pi");
    Vector pi(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) pi(static_cast<Eigen::Index>(i)) = as_double(p[i]);
    return ReversibleChain::make(std::move(A), std::move(pi));
}

Json to_json(const TemplateGraph& t)
{
    Json e = Json::array();
    for (const auto& [l, r] : t.edges) e.push_back(Json::array({l, t.n + r}));
    Json left = Json::array(), right = Json::array();
    for (int i = 0; i < t.n; ++i) {
        left.push_back(i);
        right.push_back(t.n + i);
    }
    return Json{{"n", 2 * t.n},
                {"edges", e},
                {"partition", Json{{"L", left}, {"R", right}}},
                {"girth", t.girth == kUnreachable ? Json("inf") : Json(t.girth)}};
}

Json to_json(const JlPlan& p)
{
    return Json{{"n", p.n},
                {"alpha", num(p.alpha)},
                {"mode", mode_name(p.mode)},
                {"k", p.k},
                {"sigma", num(p.sigma)},
                {"success_prob", num(p.success_prob)},
                {"union_bound", num(p.union_bound)},
                {"haar_dim", p.mode == JlMode::haar_projection ? Json(p.haar_dim) : Json(nullptr)}};
}

Json to_json(const ProbabilityEstimate& p)
{
    Json j{{"value", num(p.value)}, {"std_error", num(p.std_error)}, {"method", method_name(p.method)}};
    if (p.method == ProbabilityEstimate::Method::monte_carlo) j["samples"] = p.samples;
    return j;
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(Errc::InvalidInput, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        fail(Errc::InvalidInput, std::string("malformed JSON in ") + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::InvalidInput, "cannot write " + path);
    out << text;
}

}  // namespace mdr
