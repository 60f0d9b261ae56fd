#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mdr/graph.hpp"
#include "mdr/harness.hpp"
#include "mdr/io.hpp"
#include "mdr/jl.hpp"
#include "mdr/matousek.hpp"
#include "mdr/metric.hpp"
#include "mdr/parallel.hpp"
#include "mdr/sdp.hpp"
#include "mdr/spectral.hpp"
#include "mdr/verify.hpp"

using namespace mdr;

namespace {

struct RunConfig {
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
    std::string out;
    std::string format = "json";
    std::optional<double> tol;
};

// accepts 1000, 1e9, 2.5e3; rejects non-integral values
std::int64_t parse_count(const std::string& s, const char* what)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        fail(Errc::InvalidInput, std::string(what) + " is not a number: '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9.0e18)
        fail(Errc::InvalidInput, std::string(what) + " must be an integer: '" + s + "'");
    return static_cast<std::int64_t>(v);
}

std::vector<int> parse_list(const std::string& s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(static_cast<int>(parse_count(tok, "list entry")));
    return out;
}

std::string csv_of(const Json& j)
{
    std::ostringstream os;
    auto text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (j.is_array()) {
        if (j.empty()) return "";
        bool first = true;
        for (const auto& [k, _] : j[0].items()) os << (first ? "" : ",") << k, first = false;
        os << '\n';
        for (const auto& row : j) {
            first = true;
            for (const auto& [_, v] : row.items()) os << (first ? "" : ",") << text(v), first = false;
            os << '\n';
        }
        return os.str();
    }
    bool first = true;
    for (const auto& [k, v] : j.items())
        if (v.is_primitive()) os << (first ? "" : ",") << k, first = false;
    os << '\n';
    first = true;
    for (const auto& [k, v] : j.items())
        if (v.is_primitive()) os << (first ? "" : ",") << text(v), first = false;
    os << '\n';
    return os.str();
}

void emit_text(const RunConfig& cfg, const std::string& text)
{
    if (cfg.out.empty()) std::cout << text;
    else write_text_file(cfg.out, text);
}

void emit(const RunConfig& cfg, const Json& j)
{
    emit_text(cfg, cfg.format == "csv" ? csv_of(j) : j.dump(2) + "\n");
}

int report_error(Errc code, const std::string& msg)
{
    Json e{{"error", {{"code", errc_name(code)}, {"message", msg}}}};
    std::cerr << e.dump() << std::endl;
    return 2;
}

JlMode mode_of(const std::string& s)
{
    if (s == "haar" || s == "haar_projection" || s == "projection") return JlMode::haar_projection;
    if (s == "gaussian" || s == "scaled_gaussian") return JlMode::scaled_gaussian;
    fail(Errc::InvalidInput, "mode must be haar or gaussian");
}

void require_alpha(double alpha)
{
    if (!(alpha > 1.0) || !std::isfinite(alpha)) fail(Errc::ParameterDomain, "alpha must exceed 1");
}

bool is_cloud(const Json& j) { return j.is_object() && j.contains("coords"); }

ReversibleChain load_chain(const std::string& chain, const std::string& graph)
{
    if (!chain.empty()) return chain_from_json(read_json_file(chain));
    if (!graph.empty()) return chain_from_graph(graph_from_json(read_json_file(graph)));
    fail(Errc::InvalidInput, "pass --chain or --graph");
}

Json chain_summary(const ReversibleChain& c)
{
    const double l2 = lambda2(c);
    return Json{{"n", c.size()}, {"lambda2", jnum(l2)}};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mdrlab: metric dimension reduction laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    if (const char* env = std::getenv("MDRLAB_THREADS")) {
        try {
            cfg.threads = static_cast<int>(parse_count(env, "MDRLAB_THREADS"));
        } catch (const Error& e) {
            return report_error(e.code(), e.what());
        }
    }
    double tol_value = 0.0;
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads (default: MDRLAB_THREADS or all cores)");
    app.add_option("--out", cfg.out, "write output to this file");
    app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    auto* tol_opt = app.add_option("--tol", tol_value, "tolerance override");

    std::string n_str, k_str, mode = "haar", in, target, map, chain, graph, cloud_path, metric_path, table;
    std::string sigma_str, suite, fault, method = "auto", spec_path, norm_name = "l1";
    double alpha = 2.0, theta = 0.5, s_scale = 1.0, T = 0.0, p = 2.0, d = 0.0, tau_omega = 1.0, tau_Omega = 2.0;
    double alpha_total = 0.0, points = 0.0;
    int g = 6, r = 4, trials = 0, retries = 20, iters = 4000, cap = 4096, dim = 2, instances = 200;
    std::int64_t haar_dim = 0;
    std::uint64_t samples = 0;
    std::string dmode = "exact";

    auto* c_jldim = app.add_subcommand("jl-dim", "minimal certified JL dimension");
    c_jldim->add_option("--n", n_str, "number of points (1e9 accepted)")->required();
    c_jldim->add_option("--alpha", alpha)->required();
    c_jldim->add_option("--mode", mode, "haar or gaussian");

    auto* c_jlproj = app.add_subcommand("jl-project", "JL-reduce a Euclidean point cloud");
    c_jlproj->add_option("--in", in, "PointCloud JSON")->required();
    c_jlproj->add_option("--alpha", alpha)->required();
    c_jlproj->add_option("--mode", mode);
    c_jlproj->add_option("--k", k_str);
    c_jlproj->add_option("--haar-dim", haar_dim);
    c_jlproj->add_option("--retries", retries);

    auto* c_psi = app.add_subcommand("psi", "per-pair success probability of the scaled Haar projection");
    c_psi->add_option("--n", n_str)->required();
    c_psi->add_option("--k", k_str)->required();
    c_psi->add_option("--alpha", alpha)->required();
    c_psi->add_option("--sigma", sigma_str, "scaling, or 'max'")->default_str("max");
    c_psi->add_option("--samples", samples, "Monte Carlo samples (0: none)");

    auto* c_smax = app.add_subcommand("sigma-max", "maximising scaling");
    c_smax->add_option("--n", n_str)->required();
    c_smax->add_option("--k", k_str)->required();
    c_smax->add_option("--alpha", alpha)->required();

    auto* c_dist = app.add_subcommand("distortion", "distortion of a map between finite metrics");
    c_dist->add_option("--source", in, "FiniteMetric JSON")->required();
    c_dist->add_option("--target", target, "FiniteMetric or PointCloud JSON")->required();
    c_dist->add_option("--map", map, "comma-separated images (default: identity)");

    auto* c_frechet = app.add_subcommand("frechet", "isometric embedding into l_inf");
    c_frechet->add_option("--in", in)->required();

    auto* c_bourgain = app.add_subcommand("bourgain", "randomised embedding into l2");
    c_bourgain->add_option("--in", in)->required();

    auto* c_snow = app.add_subcommand("snowflake", "entrywise power d^theta");
    c_snow->add_option("--in", in)->required();
    c_snow->add_option("--theta", theta)->required();

    auto* c_doubling = app.add_subcommand("doubling", "doubling constant and dimension lower bounds");
    c_doubling->add_option("--in", in)->required();
    c_doubling->add_option("--mode", dmode)->check(CLI::IsMember({"exact", "greedy"}));
    c_doubling->add_option("--alpha", alpha);

    auto* c_sdp = app.add_subcommand("c2-sdp", "least Euclidean distortion by semidefinite feasibility");
    c_sdp->add_option("--in", in)->required();

    auto* c_cert = app.add_subcommand("certificate", "check or search a negative-type certificate");
    c_cert->add_option("--in", in)->required();
    c_cert->add_option("--alpha", alpha)->required();
    c_cert->add_option("--matrix", target, "certificate matrix JSON (omit to search)");
    c_cert->add_option("--iters", iters);

    auto* c_gamma = app.add_subcommand("gamma", "spectral gap quantities of a chain");
    c_gamma->add_option("--chain", chain);
    c_gamma->add_option("--graph", graph);
    c_gamma->add_option("--metric", metric_path, "finite metric for exhaustive gamma");
    c_gamma->add_option("--p", p);
    c_gamma->add_option("--norm", norm_name, "l1, linf or l2 for the sampled lower bound");
    c_gamma->add_option("--dim", dim);
    c_gamma->add_option("--samples", samples);

    auto* c_ray = app.add_subcommand("rayleigh", "nonlinear Rayleigh quotient");
    c_ray->add_option("--chain", chain);
    c_ray->add_option("--graph", graph);
    c_ray->add_option("--cloud", cloud_path);
    c_ray->add_option("--metric", metric_path);
    c_ray->add_option("--map", map);
    c_ray->add_option("--p", p);

    auto* c_t = app.add_subcommand("t-param", "mixing parameter t(x;A) and the power check");
    c_t->add_option("--chain", chain);
    c_t->add_option("--graph", graph);
    c_t->add_option("--cloud", cloud_path)->required();
    c_t->add_option("--d", d, "Hilbert distortion (default: built-in pair)");
    c_t->add_option("--cap", cap);

    auto* c_dimexp = app.add_subcommand("dim-exponent", "certified dimension lower-bound exponent");
    c_dimexp->add_option("--chain", chain);
    c_dimexp->add_option("--graph", graph);
    c_dimexp->add_option("--cloud", cloud_path)->required();

    auto* c_cheeger = app.add_subcommand("cheeger", "spectral sweep cut");
    c_cheeger->add_option("--chain", chain);
    c_cheeger->add_option("--graph", graph);

    auto* c_rr = app.add_subcommand("regular-graph", "random simple r-regular graph");
    c_rr->add_option("--n", n_str)->required();
    c_rr->add_option("--r", r);

    auto* c_markov = app.add_subcommand("markov-convexity", "Markov convexity ratio");
    c_markov->add_option("--spec", spec_path, "JSON with P, init, horizon, q and fdist (or metric + map)");
    c_markov->add_option("--path", k_str, "symmetric walk on a path with this many states instead of --spec");
    c_markov->add_option("--horizon", trials);
    c_markov->add_option("--samples", samples);
    c_markov->add_option("--method", method)->check(CLI::IsMember({"auto", "exact", "mc"}));

    auto* c_mgen = app.add_subcommand("matousek-gen", "girth-pruned bipartite template");
    c_mgen->add_option("--n", n_str)->required();
    c_mgen->add_option("--g", g);
    c_mgen->add_option("--s", s_scale);
    c_mgen->add_option("--T", T);
    c_mgen->add_option("--trials", trials, "run the experiment harness with this many trials");
    c_mgen->add_option("--alpha", alpha);

    auto* c_smet = app.add_subcommand("signed-metric", "truncated path metric of a signed template");
    c_smet->add_option("--n", n_str)->required();
    c_smet->add_option("--g", g);
    c_smet->add_option("--s", s_scale);
    c_smet->add_option("--T", T);

    auto* c_beta = app.add_subcommand("beta", "modulus beta(omega, Omega)");
    c_beta->add_option("--tau-omega", tau_omega);
    c_beta->add_option("--tau-Omega", tau_Omega);
    c_beta->add_option("--theta", theta);
    c_beta->add_option("--table", table, "JSON {s, omega, Omega} samples");
    c_beta->add_option("--points", points, "also report beta * log(points)");

    auto* c_sweep = app.add_subcommand("sweep", "cross-product parameter sweep to CSV");
    c_sweep->add_option("--spec", spec_path)->required();

    auto* c_pipe = app.add_subcommand("pipeline", "Bourgain embedding followed by JL reduction");
    c_pipe->add_option("--in", in)->required();
    c_pipe->add_option("--alpha-total", alpha_total)->required();

    auto* c_verify = app.add_subcommand("verify", "property suite");
    c_verify->add_option("suite", suite, "jl, sdp, spectral, matousek or metric")->required();
    c_verify->add_option("--samples", samples, "Monte Carlo samples for the psi agreement property");
    c_verify->add_option("--instances", instances);
    c_verify->add_option("--fault", fault, "deliberate fault: printed-prefactor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(Errc::InvalidInput, e.what());
    }
    if (*tol_opt) cfg.tol = tol_value;

    try {
        if (cfg.threads < 0) fail(Errc::InvalidInput, "--threads must be positive");
        if (cfg.threads > 0) set_threads(cfg.threads);

        if (*c_jldim) {
            require_alpha(alpha);
            const auto n = parse_count(n_str, "n");
            if (mode_of(mode) == JlMode::haar_projection && n >= 5 && alpha > 1.0 && std::isfinite(alpha)) {
                const MinDim md = jl_min_dim_projection(n, alpha);
                if (!md.feasible) {
                    emit(cfg, Json{{"n", n}, {"alpha", jnum(alpha)}, {"mode", mode_name(JlMode::haar_projection)},
                                   {"k", md.k}, {"feasible", false}});
                    return 0;
                }
            }
            Json j = to_json(make_plan(n, alpha, mode_of(mode)));
            j["feasible"] = true;
            emit(cfg, j);
        } else if (*c_jlproj) {
            require_alpha(alpha);
            JlOptions o;
            o.k = k_str.empty() ? 0 : parse_count(k_str, "k");
            o.haar_dim = haar_dim;
            o.max_retries = retries;
            const JlResult res = jl_transform(cloud_from_json(read_json_file(in)), alpha, mode_of(mode), cfg.seed, o);
            // the best attempt is still written out before the error
            emit(cfg, Json{{"plan", to_json(res.plan)},
                           {"success", res.success},
                           {"attempts", res.attempts},
                           {"min_ratio", jnum(res.min_ratio)},
                           {"max_ratio", jnum(res.max_ratio)},
                           {"distortion", jnum(res.distortion)},
                           {"image", to_json(res.image)}});
            if (!res.success)
                fail(Errc::RetriesExhausted, "no attempt met the distortion target in " + std::to_string(res.attempts) +
                                                 " tries (best distortion " + fmt_num(res.distortion) + ")");
        } else if (*c_psi) {
            require_alpha(alpha);
            const auto n = parse_count(n_str, "n"), k = parse_count(k_str, "k");
            const double sigma = sigma_str.empty() || sigma_str == "max" ? sigma_max(n, k, alpha) : std::stod(sigma_str);
            Json j{{"n", n}, {"k", k}, {"alpha", jnum(alpha)}, {"sigma", jnum(sigma)}};
            const ProbabilityEstimate q = psi(n, k, alpha, sigma);
            j["psi"] = jnum(q.value);
            j["failure"] = jnum(psi_failure(n, k, alpha, sigma));
            if (samples > 0) {
                const auto mc = psi_monte_carlo(static_cast<int>(n), static_cast<int>(k), alpha, sigma, samples, cfg.seed);
                j["psi_mc"] = jnum(mc.value);
                j["psi_mc_se"] = jnum(mc.std_error);
                j["samples"] = samples;
            }
            emit(cfg, j);
        } else if (*c_smax) {
            require_alpha(alpha);
            const auto n = parse_count(n_str, "n"), k = parse_count(k_str, "k");
            const double s = sigma_max(n, k, alpha);
            emit(cfg, Json{{"n", n}, {"k", k}, {"alpha", jnum(alpha)}, {"sigma_max", jnum(s)}, {"psi", jnum(psi(n, k, alpha, s).value)}});
        } else if (*c_dist) {
            const FiniteMetric src = metric_from_json(read_json_file(in));
            const Json tj = read_json_file(target);
            EmbeddingReport rep;
            if (is_cloud(tj)) {
                if (!map.empty()) fail(Errc::InvalidInput, "--map applies to metric targets only");
                rep = distortion(src, cloud_from_json(tj));
            } else {
                std::vector<int> f = map.empty() ? std::vector<int>() : parse_list(map);
                if (map.empty())
                    for (int i = 0; i < src.size(); ++i) f.push_back(i);
                rep = distortion(src, metric_from_json(tj), f);
            }
            emit(cfg, Json{{"distortion", jnum(rep.distortion)},
                           {"scale", jnum(rep.scale)},
                           {"expansion", jnum(rep.expansion)},
                           {"contraction", jnum(rep.contraction)},
                           {"avg_ratio", jnum(rep.avg_ratio)}});
        } else if (*c_frechet) {
            emit(cfg, to_json(frechet_embed(metric_from_json(read_json_file(in)))));
        } else if (*c_bourgain) {
            const FiniteMetric m = metric_from_json(read_json_file(in));
            const PointCloud b = bourgain_embed(m, cfg.seed);
            emit(cfg, Json{{"distortion", jnum(distortion(m, b).distortion)}, {"cloud", to_json(b)}});
        } else if (*c_snow) {
            emit(cfg, to_json(snowflake(metric_from_json(read_json_file(in)), theta)));
        } else if (*c_doubling) {
            const FiniteMetric m = metric_from_json(read_json_file(in));
            if (!(alpha >= 1.0)) fail(Errc::ParameterDomain, "alpha must be at least 1");
            Json j{{"n", m.size()},
                   {"mode", dmode},
                   {"doubling_constant", jnum(doubling_constant(m, dmode == "exact" ? DoublingMode::exact : DoublingMode::greedy))}};
            if (m.size() >= 2) {
                j["alpha"] = jnum(alpha);
                j["doubling_dim_lower_bound"] = jnum(doubling_dim_lower_bound(m, alpha));
                j["volumetric_lower_bound"] = jnum(volumetric_lower_bound(m.size(), alpha));
            }
            emit(cfg, j);
        } else if (*c_sdp) {
            C2Options o;
            if (cfg.tol) o.tol = *cfg.tol;
            const FiniteMetric m = metric_from_json(read_json_file(in));
            const C2Result res = c2_sdp(m, o);
            const PointCloud pts = extract_points(res.Q);
            emit(cfg, Json{{"alpha", jnum(res.alpha)},
                           {"lo", jnum(res.lo)},
                           {"hi", jnum(res.hi)},
                           {"iterations", res.iterations},
                           {"converged", res.converged},
                           {"realised_distortion", jnum(m.size() > 1 ? distortion(m, pts).distortion : 1.0)},
                           {"points", to_json(pts)}});
        } else if (*c_cert) {
            const FiniteMetric m = metric_from_json(read_json_file(in));
            if (!target.empty()) {
                const CertificateCheck c = check_certificate(m, matrix_from_json(read_json_file(target)), alpha);
                emit(cfg, Json{{"alpha", jnum(alpha)}, {"holds", c.holds}, {"lhs", jnum(c.lhs)}, {"rhs", jnum(c.rhs)}});
            } else {
                const CertificateSearch c = search_certificate(m, alpha, iters, cfg.seed);
                emit(cfg, Json{{"alpha", jnum(alpha)},
                               {"violated", c.violated},
                               {"lhs", jnum(c.lhs)},
                               {"rhs", jnum(c.rhs)},
                               {"A", to_json(c.A)}});
            }
        } else if (*c_gamma) {
            const ReversibleChain c = load_chain(chain, graph);
            Json j = chain_summary(c);
            j["gamma_hilbert"] = jnum(gamma_hilbert(c));
            if (!metric_path.empty())
                j["gamma_bruteforce"] = jnum(gamma_bruteforce(c, metric_from_json(read_json_file(metric_path)), p));
            if (samples > 0) {
                j["gamma_lower_bound"] = jnum(gamma_sampled_lower_bound(c, norm_from_json(Json(norm_name)), dim, p,
                                                                       static_cast<int>(samples), cfg.seed));
                j["gamma_lower_bound_note"] = "certified lower bound";
            }
            emit(cfg, j);
        } else if (*c_ray) {
            const ReversibleChain c = load_chain(chain, graph);
            Configuration x;
            if (!cloud_path.empty()) x = configuration(cloud_from_json(read_json_file(cloud_path)));
            else if (!metric_path.empty()) x = configuration(metric_from_json(read_json_file(metric_path)), parse_list(map));
            else fail(Errc::InvalidInput, "pass --cloud, or --metric with --map");
            emit(cfg, Json{{"p", jnum(p)}, {"rayleigh", jnum(rayleigh(x, c, p))}});
        } else if (*c_t) {
            const ReversibleChain c = load_chain(chain, graph);
            const PointCloud x = cloud_from_json(read_json_file(cloud_path));
            const double dd = d > 0.0 ? d : hilbert_pair(x).d;
            const TParameter tp = t_parameter(x, c, dd, cap);
            const PowerCheck pc = power_expander_check(x, c, cap);
            const double l2 = lambda2(c);
            emit(cfg, Json{{"t", tp.t},
                           {"d", jnum(dd)},
                           {"hilbert_rayleigh", jnum(tp.hilbert_rayleigh)},
                           {"lambda2", jnum(l2)},
                           {"t_upper_bound", t_upper_bound(l2, dd)},
                           {"power_value", jnum(pc.value)},
                           {"rayleigh_a", jnum(pc.rayleigh_a)}});
        } else if (*c_dimexp) {
            const ReversibleChain c = load_chain(chain, graph);
            const DimExponent de = dim_lower_exponent(cloud_from_json(read_json_file(cloud_path)), c);
            emit(cfg, Json{{"alpha_hat", jnum(de.alpha_hat)}, {"exponent", jnum(de.exponent)}});
        } else if (*c_cheeger) {
            const ReversibleChain c = load_chain(chain, graph);
            const CheegerCut cut = cheeger_sweep(c);
            const double l2 = lambda2(c);
            emit(cfg, Json{{"side", cut.side},
                           {"conductance", jnum(cut.conductance)},
                           {"lambda2", jnum(l2)},
                           {"cheeger_bound", jnum(std::sqrt(2.0 * (1.0 - l2)))}});
        } else if (*c_rr) {
            const int n = static_cast<int>(parse_count(n_str, "n"));
            const Graph gr = random_regular_graph(n, r, cfg.seed);
            Json j = to_json(gr);
            j["lambda2"] = jnum(lambda2(chain_from_graph(gr)));
            emit(cfg, j);
        } else if (*c_markov) {
            MarkovChainSpec sp;
            if (!k_str.empty()) {
                const int S = static_cast<int>(parse_count(k_str, "path"));
                if (S < 2) fail(Errc::ParameterDomain, "a path needs two states");
                sp.P = Matrix::Zero(S, S);
                for (int i = 0; i < S; ++i) {
                    if (i == 0) sp.P(0, 1) = 1.0;
                    else if (i == S - 1) sp.P(i, i - 1) = 1.0;
                    else sp.P(i, i - 1) = sp.P(i, i + 1) = 0.5;
                }
                sp.init = Vector::Constant(S, 1.0 / S);
                sp.fdist.resize(S, S);
                for (int a = 0; a < S; ++a)
                    for (int b = 0; b < S; ++b) sp.fdist(a, b) = std::abs(a - b);
                sp.horizon = trials > 0 ? trials : 8;
                sp.q = p;
            } else if (!spec_path.empty()) {
                const Json j = read_json_file(spec_path);
                sp.P = matrix_from_json(j.at("P"));
                const Matrix init = matrix_from_json(Json::array({j.at("init")}));
                sp.init = init.row(0).transpose();
                sp.horizon = trials > 0 ? trials : j.value("horizon", 2);
                sp.q = j.value("q", 2.0);
                if (j.contains("fdist")) {
                    sp.fdist = matrix_from_json(j["fdist"]);
                } else {
                    const FiniteMetric m = metric_from_json(j.at("metric"));
                    const auto f = j.at("map").get<std::vector<int>>();
                    sp.fdist = configuration(m, f).dist;
                }
            } else {
                fail(Errc::InvalidInput, "pass --spec or --path");
            }
            const McMethod mm = method == "exact" ? McMethod::exact : method == "mc" ? McMethod::monte_carlo : McMethod::automatic;
            const auto res = markov_convexity_ratio(sp, samples > 0 ? samples : 100000, cfg.seed, mm);
            emit(cfg, Json{{"lhs", jnum(res.lhs)},
                           {"rhs", jnum(res.rhs)},
                           {"ratio", jnum(res.ratio)},
                           {"lhs_q", jnum(res.lhs_q)},
                           {"rhs_q", jnum(res.rhs_q)},
                           {"lhs_q_se", jnum(res.lhs_q_se)},
                           {"rhs_q_se", jnum(res.rhs_q_se)},
                           {"method", res.exact ? "exact" : "monte_carlo"},
                           {"samples", res.samples}});
        } else if (*c_mgen) {
            const int n = static_cast<int>(parse_count(n_str, "n"));
            if (trials > 0) {
                const double TT = T > 0.0 ? T : s_scale * g;
                const auto rows = experiment_harness(n, g, s_scale, TT, trials, cfg.seed, alpha);
                if (cfg.format == "csv") {
                    emit_text(cfg, harness_csv(rows));
                } else {
                    Json a = Json::array();
                    for (const auto& row : rows)
                        a.push_back({{"trial", row.trial},
                                     {"n", row.n},
                                     {"g", row.g},
                                     {"s", jnum(row.s)},
                                     {"T", jnum(row.T)},
                                     {"edges", row.edges},
                                     {"girth", row.girth == kUnreachable ? Json("inf") : Json(row.girth)},
                                     {"min_fork_dist", jnum(row.min_fork_dist)},
                                     {"doubling_lb", jnum(row.doubling_lb)},
                                     {"volumetric_lb", jnum(row.volumetric_lb)}});
                    emit(cfg, a);
                }
            } else {
                emit(cfg, to_json(gen_template(n, g, cfg.seed)));
            }
        } else if (*c_smet) {
            const int n = static_cast<int>(parse_count(n_str, "n"));
            const double TT = T > 0.0 ? T : s_scale * g;
            const TemplateGraph t = gen_template(n, g, derive_seed(cfg.seed, 0));
            const auto sigma = random_signs(t.edges.size(), derive_seed(cfg.seed, 1));
            const FiniteMetric m = signed_metric(t, sigma, {s_scale, TT});
            double fork = TT;
            for (int l = 0; l < n; ++l) fork = std::min(fork, m(l, n + l));
            Json j = to_json(m);
            j["girth"] = t.girth == kUnreachable ? Json("inf") : Json(t.girth);
            j["min_fork_dist"] = jnum(fork);
            j["signs"] = sigma;
            emit(cfg, j);
        } else if (*c_beta) {
            ModulusPair mp;
            if (!table.empty()) {
                const Json j = read_json_file(table);
                mp = ModulusPair::table(j.at("s").get<std::vector<double>>(), j.at("omega").get<std::vector<double>>(),
                                        j.at("Omega").get<std::vector<double>>());
            } else {
                mp = ModulusPair::power_family(tau_omega, tau_Omega, theta);
            }
            const double b = beta_modulus(mp);
            Json j{{"beta", jnum(b)}};
            if (points > 0.0) j["exponent"] = jnum(coarse_dim_exponent(points, mp));
            emit(cfg, j);
        } else if (*c_sweep) {
            emit_text(cfg, run_sweep(read_json_file(spec_path), cfg.seed));
        } else if (*c_pipe) {
            const PipelineReport rep = pipeline_embed_reduce(metric_from_json(read_json_file(in)), alpha_total, cfg.seed);
            Json j = to_json(rep);
            j["alpha_total"] = jnum(alpha_total);
            emit(cfg, j);
        } else if (*c_verify) {
            const auto& names = suite_names();
            if (std::find(names.begin(), names.end(), suite) == names.end())
                fail(Errc::InvalidInput, "unknown suite '" + suite + "'");
            VerifyOptions o;
            o.seed = cfg.seed;
            if (samples > 0) o.mc_samples = samples;
            o.instances = instances;
            if (fault == "printed-prefactor") o.prefactor = PsiPrefactor::printed;
            else if (!fault.empty()) fail(Errc::InvalidInput, "unknown fault '" + fault + "'");
            const SuiteResult res = run_suite(suite, o);
            emit(cfg, to_json(res));
            return res.passed() ? 0 : 1;
        }
    } catch (const Error& e) {
        return report_error(e.code(), e.what());
    } catch (const nlohmann::json::exception& e) {
        return report_error(Errc::InvalidInput, e.what());
    } catch (const std::invalid_argument& e) {
        return report_error(Errc::InvalidInput, e.what());
    } catch (const std::out_of_range& e) {
        return report_error(Errc::InvalidInput, e.what());
    }
    return 0;
}
