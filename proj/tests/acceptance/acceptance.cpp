// One line per acceptance criterion: PASS/FAIL, wall time against its budget, detail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mdr/harness.hpp"
#include "mdr/jl.hpp"
#include "mdr/parallel.hpp"
#include "mdr/sdp.hpp"
#include "mdr/verify.hpp"

using namespace mdr;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void add(const PropertyResult& p)
    {
        if (!p.ok()) {
            ok = false;
            detail += p.name + " failed " + std::to_string(p.failures) + "/" + std::to_string(p.trials) + " (" + p.detail + "); ";
        } else {
            detail += p.name + " " + std::to_string(p.trials) + "/" + std::to_string(p.trials) + "; ";
        }
    }
    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            detail += "FAILED " + what + "; ";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failed = 0;

void criterion(int id, const char* name, double budget, const std::function<Outcome()>& body)
{
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double s = seconds_since(t0);
    if (budget > 0.0 && s > budget) {
        o.ok = false;
        o.detail += "over the " + fmt_num(budget) + " s budget; ";
    }
    if (!o.ok) ++failed;
    std::printf("%s %2d %-28s %8.2f s  %s\n", o.ok ? "PASS" : "FAIL", id, name, s, o.detail.c_str());
    std::fflush(stdout);
}

FiniteMetric from(std::initializer_list<double> v, int n)
{
    Matrix d(n, n);
    auto it = v.begin();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i, j) = *it++;
    return FiniteMetric::build(d);
}

}  // namespace

int main()
{
    const std::uint64_t seed = kDefaultSeed;

    criterion(1, "reference dimensions", 3.0, [] {
        Outcome o;
        const std::pair<double, std::int64_t> cells[] = {{2.0, 329}, {10.0, 37}, {450.0, 9}};
        for (auto [alpha, want] : cells) {
            const auto t0 = Clock::now();
            const auto k = jl_min_dim_gaussian(1000000000, alpha);
            const double s = seconds_since(t0);
            o.require(k == want, "alpha=" + fmt_num(alpha) + " gave k=" + std::to_string(k));
            o.require(s < 1.0, "alpha=" + fmt_num(alpha) + " took " + fmt_num(s) + " s");
            o.detail += "k(1e9," + fmt_num(alpha) + ")=" + std::to_string(k) + "; ";
        }
        return o;
    });

    criterion(2, "projection optimality", 60.0, [] {
        Outcome o;
        o.add(props::projection_vs_gaussian());
        return o;
    });

    criterion(3, "psi correctness", 120.0, [&] {
        Outcome o;
        o.add(props::psi_closed_form());
        o.add(props::psi_monte_carlo(1000000, seed));
        return o;
    });

    criterion(4, "empirical JL", 60.0, [&] {
        Outcome o;
        const auto e = props::empirical_jl(200, seed);
        o.add(e.result);
        return o;
    });

    criterion(5, "SDP distortion", 30.0, [] {
        Outcome o;
        const FiniteMetric c4 = from({0, 1, 2, 1, 1, 0, 1, 2, 2, 1, 0, 1, 1, 2, 1, 0}, 4);
        const FiniteMetric k13 = from({0, 1, 1, 1, 1, 0, 2, 2, 1, 2, 0, 2, 1, 2, 2, 0}, 4);
        const struct {
            const char* name;
            FiniteMetric m;
            double want, tol;
        } cases[] = {{"simplex", FiniteMetric::equilateral(6), 1.0, 1e-6},
                     {"C4", c4, std::sqrt(2.0), 1e-3},
                     {"K13", k13, 2.0 / std::sqrt(3.0), 1e-3}};
        for (const auto& c : cases) {
            const double oracle = c2_configuration_search(c.m).alpha;
            const bool oracle_ok = std::abs(oracle - c.want) <= std::max(c.tol, 1e-3);
            o.require(oracle_ok, std::string(c.name) + " oracle " + fmt_num(oracle));
            const double a = c2_sdp(c.m).alpha;
            o.require(oracle_ok && std::abs(a - c.want) <= c.tol, std::string(c.name) + " sdp " + fmt_num(a));
            o.detail += std::string(c.name) + " sdp " + fmt_num(a) + " oracle " + fmt_num(oracle) + "; ";
        }
        return o;
    });

    criterion(6, "spectral suite", 120.0, [&] {
        Outcome o;
        o.add(props::lemma_clauses(200, seed));
        o.add(props::hilbert_identity(200, seed));
        o.add(props::t_ceiling(200, seed));
        o.add(props::power_expander(200, seed));
        return o;
    });

    criterion(7, "gamma identities", 0.0, [&] {
        Outcome o;
        o.add(props::gamma_identities(200, seed));
        return o;
    });

    criterion(8, "Matousek construction", 60.0, [&] {
        Outcome o;
        o.add(props::matousek_instances(200, 64, seed));
        return o;
    });

    criterion(9, "beta modulus", 0.0, [] {
        Outcome o;
        o.add(props::beta_modulus_values());
        return o;
    });

    criterion(10, "Markov convexity", 0.0, [&] {
        Outcome o;
        o.add(props::markov_convexity(1000000, seed));
        return o;
    });

    criterion(11, "sweep determinism", 0.0, [&] {
        Outcome o;
        const char* specs[] = {
            R"({"command":"jl-dim","grid":{"n":[1e3,1e6,1e9],"alpha":[1.5,2,10],"mode":["haar","gaussian"]}})",
            R"({"command":"psi","grid":{"n":[8,20],"k":[3],"alpha":[2],"sigma":["max",1.5],"samples":[20000]}})",
            R"({"command":"bourgain","grid":{"n":[16,32],"trial":[0,1,2]}})",
            R"({"command":"regular-graph","grid":{"n":[64],"r":[3,4],"seed":[0,1]}})",
            R"({"command":"matousek","grid":{"n":[24],"g":[4,6],"s":[1],"T":[8],"trials":[4]}})",
        };
        const int before = max_threads();
        for (const char* s : specs) {
            const Json spec = Json::parse(s);
            std::string ref;
            for (int threads : {1, 2, 3, 8}) {
                set_threads(threads);
                const std::string out = run_sweep(spec, seed);
                if (ref.empty()) ref = out;
                o.require(out == ref, spec["command"].get<std::string>() + " differs at " + std::to_string(threads) + " threads");
            }
            o.detail += spec["command"].get<std::string>() + " ok; ";
        }
        set_threads(before);
        o.add(props::harness_determinism(seed));
        return o;
    });

    std::printf("%s: %d of 11 criteria failed\n", failed ? "FAIL" : "PASS", failed);
    return failed ? 1 : 0;
}
