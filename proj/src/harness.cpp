#include "mdr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "mdr/graph.hpp"
#include "mdr/jl.hpp"
#include "mdr/matousek.hpp"
#include "mdr/parallel.hpp"
#include "mdr/spectral.hpp"

namespace mdr {

PipelineReport pipeline_embed_reduce(const FiniteMetric& m, double alpha_total, std::uint64_t seed)
{
    const int n = m.size();
    if (n < 2) fail(Errc::DegenerateSource, "pipeline needs at least two points");
    if (!std::isfinite(alpha_total)) fail(Errc::ParameterDomain, "alpha_total must be finite");
    PipelineReport r;
    r.n = n;
    const PointCloud b = bourgain_embed(m, derive_seed(seed, 0));
    r.bourgain_dim = b.dim();
    r.bourgain_distortion = distortion(m, b).distortion;
    if (!(alpha_total > r.bourgain_distortion))
        fail(Errc::BudgetInfeasible, "alpha_total " + fmt_num(alpha_total) + " does not exceed the measured Bourgain distortion " +
                                         fmt_num(r.bourgain_distortion));
    r.budget = alpha_total / r.bourgain_distortion;

    const PointCloud span = span_coordinates(b);
    r.reduction = "span";
    r.image = span;
    try {
        const JlPlan plan = make_plan(n, r.budget, JlMode::haar_projection);
        if (plan.k < span.dim()) {
            r.k = plan.k;
            const JlResult jl = jl_transform(b, r.budget, JlMode::haar_projection, derive_seed(seed, 1));
            r.jl_attempts = jl.attempts;
            if (jl.success) {
                r.reduction = "jl";
                r.image = jl.image;
            }
        }
    } catch (const Error& e) {
        if (e.code() != Errc::NoFeasibleK && e.code() != Errc::ParameterDomain) throw;
    }
    r.final_dim = r.image.dim();
    r.distortion = distortion(m, r.image).distortion;
    return r;
}

Json to_json(const PipelineReport& r)
{
    Json j;
    j["n"] = r.n;
    j["bourgain_dim"] = r.bourgain_dim;
    j["bourgain_distortion"] = sig12(r.bourgain_distortion);
    j["budget"] = sig12(r.budget);
    j["reduction"] = r.reduction;
    j["k"] = r.k;
    j["jl_attempts"] = r.jl_attempts;
    j["final_dim"] = r.final_dim;
    j["distortion"] = sig12(r.distortion);
    return j;
}

namespace {

using Row = std::vector<std::string>;

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string scalar_text(const Json& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number()) return fmt_num(v.get<double>());
    return v.dump();
}

std::int64_t as_count(const Json& v)
{
    if (v.is_number_integer()) return v.get<std::int64_t>();
    const double d = v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>();
    if (d != std::floor(d) || std::abs(d) > 9.2e18) fail(Errc::InvalidInput, "expected an integer, got " + v.dump());
    return static_cast<std::int64_t>(d);
}

double as_real(const Json& v) { return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>(); }

struct Command {
    std::vector<std::string> params;  // grid keys, in output order
    std::vector<std::string> outputs;
    std::function<Row(const std::vector<Json>&, std::uint64_t)> eval;
};

JlMode parse_mode(const std::string& s)
{
    if (s == "haar" || s == "projection" || s == "haar_projection") return JlMode::haar_projection;
    if (s == "gaussian" || s == "scaled_gaussian") return JlMode::scaled_gaussian;
    fail(Errc::InvalidInput, "unknown mode '" + s + "'");
}

std::map<std::string, Command> commands()
{
    std::map<std::string, Command> c;
    c["jl-dim"] = {{"n", "alpha", "mode"}, {"k", "sigma", "success_prob", "union_bound"}, [](const auto& v, std::uint64_t) {
                       const JlPlan p = make_plan(as_count(v[0]), as_real(v[1]), parse_mode(v[2].template get<std::string>()));
                       return Row{std::to_string(p.k), fmt_num(p.sigma), fmt_num(p.success_prob), fmt_num(p.union_bound)};
                   }};
    c["psi"] = {{"n", "k", "alpha", "sigma", "samples"}, {"psi", "psi_mc", "psi_mc_se"}, [](const auto& v, std::uint64_t seed) {
                    const auto n = as_count(v[0]), k = as_count(v[1]);
                    const double a = as_real(v[2]);
                    const double s = v[3].is_string() && v[3] == "max" ? sigma_max(n, k, a) : as_real(v[3]);
                    const auto samples = as_count(v[4]);
                    Row r{fmt_num(psi(n, k, a, s).value), "", ""};
                    if (samples > 0) {
                        const auto mc = psi_monte_carlo(static_cast<int>(n), static_cast<int>(k), a, s, samples, seed);
                        r[1] = fmt_num(mc.value);
                        r[2] = fmt_num(mc.std_error);
                    }
                    return r;
                }};
    c["sigma-max"] = {{"n", "k", "alpha"}, {"sigma_max", "psi"}, [](const auto& v, std::uint64_t) {
                          const auto n = as_count(v[0]), k = as_count(v[1]);
                          const double s = sigma_max(n, k, as_real(v[2]));
                          return Row{fmt_num(s), fmt_num(psi(n, k, as_real(v[2]), s).value)};
                      }};
    c["bourgain"] = {{"n", "trial"}, {"dim", "distortion"}, [](const auto& v, std::uint64_t seed) {
                         const FiniteMetric m = random_metric(static_cast<int>(as_count(v[0])), derive_seed(seed, 0), 1.0, 10.0);
                         const PointCloud b = bourgain_embed(m, derive_seed(seed, 1));
                         return Row{std::to_string(b.dim()), fmt_num(distortion(m, b).distortion)};
                     }};
    c["regular-graph"] = {{"n", "r", "seed"}, {"lambda2", "alpha_hat", "exponent"}, [](const auto& v, std::uint64_t seed) {
                              const int n = static_cast<int>(as_count(v[0]));
                              const Graph g = random_regular_graph(n, static_cast<int>(as_count(v[1])),
                                                                   derive_seed(seed, static_cast<std::uint64_t>(as_count(v[2]))));
                              const auto h = all_pairs_hops(g);
                              Matrix d(n, n);
                              for (int i = 0; i < n; ++i)
                                  for (int j = 0; j < n; ++j) d(i, j) = h[static_cast<std::size_t>(i) * n + j];
                              const ReversibleChain ch = chain_from_graph(g);
                              const DimExponent de = dim_lower_exponent(bourgain_embed(FiniteMetric::build(d), seed), ch);
                              return Row{fmt_num(lambda2(ch)), fmt_num(de.alpha_hat), fmt_num(de.exponent)};
                          }};
    c["matousek"] = {{"n", "g", "s", "T", "trials"},
                     {"mean_edges", "min_girth", "min_fork_dist", "max_doubling_lb", "volumetric_lb"},
                     [](const auto& v, std::uint64_t seed) {
                         const auto rows = experiment_harness(static_cast<int>(as_count(v[0])), static_cast<int>(as_count(v[1])),
                                                              as_real(v[2]), as_real(v[3]), static_cast<int>(as_count(v[4])), seed);
                         if (rows.empty()) fail(Errc::ParameterDomain, "trials must be positive");
                         double edges = 0.0, fork = rows[0].min_fork_dist, dbl = 0.0;
                         int gmin = rows[0].girth;
                         for (const auto& r : rows) {
                             edges += static_cast<double>(r.edges);
                             gmin = std::min(gmin, r.girth);
                             fork = std::min(fork, r.min_fork_dist);
                             dbl = std::max(dbl, r.doubling_lb);
                         }
                         return Row{fmt_num(edges / rows.size()), gmin == kUnreachable ? "inf" : std::to_string(gmin),
                                    fmt_num(fork), fmt_num(dbl), fmt_num(rows[0].volumetric_lb)};
                     }};
    return c;
}

}  // namespace

std::string run_sweep(const Json& spec, std::uint64_t default_seed)
{
    if (!spec.is_object() || !spec.contains("command") || !spec["command"].is_string())
        fail(Errc::InvalidInput, "sweep spec needs a \"command\" string");
    const auto table = commands();
    const std::string name = spec["command"].get<std::string>();
    const auto it = table.find(name);
    if (it == table.end()) fail(Errc::InvalidInput, "sweep does not support command '" + name + "'");
    const Command& cmd = it->second;
    const std::uint64_t seed = spec.contains("seed") ? spec["seed"].get<std::uint64_t>() : default_seed;
    const Json grid = spec.value("grid", Json::object());
    if (!grid.is_object()) fail(Errc::InvalidInput, "\"grid\" must be an object");
    for (const auto& [key, _] : grid.items())
        if (std::find(cmd.params.begin(), cmd.params.end(), key) == cmd.params.end())
            fail(Errc::InvalidInput, "unknown grid parameter '" + key + "' for " + name);

    // defaults for omitted parameters
    std::vector<std::vector<Json>> axes;
    for (const auto& p : cmd.params) {
        Json vals;
        if (grid.contains(p)) vals = grid[p];
        else if (p == "mode") vals = Json::array({"haar"});
        else if (p == "samples") vals = Json::array({0});
        else if (p == "trial" || p == "seed") vals = Json::array({0});
        else fail(Errc::InvalidInput, "grid parameter '" + p + "' is required for " + name);
        if (!vals.is_array()) vals = Json::array({vals});
        if (vals.empty()) fail(Errc::InvalidInput, "grid parameter '" + p + "' has no values");
        axes.emplace_back(vals.begin(), vals.end());
    }

    std::size_t cells = 1;
    for (const auto& a : axes) cells *= a.size();
    std::vector<Row> out(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        std::vector<Json> v(axes.size());
        std::size_t rest = c;
        for (std::size_t i = axes.size(); i-- > 0;) {
            v[i] = axes[i][rest % axes[i].size()];
            rest /= axes[i].size();
        }
        Row row;
        for (const auto& x : v) row.push_back(scalar_text(x));
        std::string err;
        Row res(cmd.outputs.size());
        try {
            res = cmd.eval(v, derive_seed(seed, c));
        } catch (const Error& e) {
            err = std::string(errc_name(e.code())) + ": " + e.what();
        } catch (const std::exception& e) {
            err = std::string("InvalidInput: ") + e.what();
        }
        row.insert(row.end(), res.begin(), res.end());
        row.push_back(err);
        out[c] = std::move(row);
    }

    std::ostringstream os;
    Row header = cmd.params;
    header.insert(header.end(), cmd.outputs.begin(), cmd.outputs.end());
    header.push_back("error");
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : out) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
        os << '\n';
    }
    return os.str();
}

}  // namespace mdr
